#include "artgraph/embed/node2vec.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "artgraph/util/error.hpp"
#include "artgraph/util/rng.hpp"

namespace artgraph::embed {

void Node2VecConfig::validate() const {
  if (dim < 1 || walk_length < 1 || walks_per_node < 1 || window < 1 || negatives < 1) {
    fail(ErrorKind::kValidation, "node2vec counts must be >= 1");
  }
  if (!(p > 0) || !(q > 0) || !(learning_rate > 0)) {
    fail(ErrorKind::kValidation, "node2vec p, q and learning_rate must be > 0");
  }
  if (alias_cache_capacity < 1) fail(ErrorKind::kValidation, "alias cache capacity must be >= 1");
}

void to_json(nlohmann::json& j, const Node2VecConfig& c) {
  j = {{"dim", c.dim},
       {"p", c.p},
       {"q", c.q},
       {"walk_length", c.walk_length},
       {"walks_per_node", c.walks_per_node},
       {"window", c.window},
       {"negatives", c.negatives},
       {"epochs", c.epochs},
       {"learning_rate", c.learning_rate},
       {"seed", c.seed},
       {"directed", c.directed},
       {"alias_cache_capacity", c.alias_cache_capacity}};
}

void from_json(const nlohmann::json& j, Node2VecConfig& c) {
  Node2VecConfig d;
  c.dim = j.value("dim", d.dim);
  c.p = j.value("p", d.p);
  c.q = j.value("q", d.q);
  c.walk_length = j.value("walk_length", d.walk_length);
  c.walks_per_node = j.value("walks_per_node", d.walks_per_node);
  c.window = j.value("window", d.window);
  c.negatives = j.value("negatives", d.negatives);
  c.epochs = j.value("epochs", d.epochs);
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.seed = j.value("seed", d.seed);
  c.directed = j.value("directed", d.directed);
  c.alias_cache_capacity = j.value("alias_cache_capacity", d.alias_cache_capacity);
}

WalkGraph::WalkGraph(const PropertyGraph& graph, bool directed)
    : nodes_(graph.node_ids()), adj_(graph.slot_count()) {
  for (auto id : nodes_) {
    auto& list = adj_[id.value];
    for (const auto& e : graph.out_edges(id)) list.push_back(e.node);
    if (!directed)
      for (const auto& e : graph.in_edges(id)) list.push_back(e.node);
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

std::span<const NodeId> WalkGraph::neighbors(NodeId id) const {
  if (id.value >= adj_.size()) fail(ErrorKind::kNotFound, "unknown node id " + std::to_string(id.value));
  return adj_[id.value];
}

bool WalkGraph::adjacent(NodeId from, NodeId to) const {
  const auto list = neighbors(from);
  return std::binary_search(list.begin(), list.end(), to);
}

std::vector<std::pair<NodeId, double>> transition_weights(const WalkGraph& graph, NodeId prev,
                                                          NodeId curr, double p, double q) {
  std::vector<std::pair<NodeId, double>> out;
  for (auto next : graph.neighbors(curr)) {
    double w;
    if (next == prev) {
      w = 1.0 / p;
    } else if (graph.adjacent(prev, next)) {
      w = 1.0;
    } else {
      w = 1.0 / q;
    }
    out.emplace_back(next, w);
  }
  return out;
}

std::vector<std::pair<NodeId, double>> transition_weights(const PropertyGraph& graph, NodeId prev,
                                                          NodeId curr, double p, double q,
                                                          bool directed) {
  return transition_weights(WalkGraph(graph, directed), prev, curr, p, q);
}

std::size_t TransitionCache::KeyHash::operator()(const std::pair<NodeId, NodeId>& k) const noexcept {
  return static_cast<std::size_t>(mix_seed(k.first.value, k.second.value));
}

const AliasTable& TransitionCache::get(const WalkGraph& graph, NodeId prev, NodeId curr, double p,
                                       double q) {
  const auto key = std::pair{prev, curr};
  if (auto it = map_.find(key); it != map_.end()) {
    order_.splice(order_.begin(), order_, it->second);
    return it->second->second;
  }
  const auto weights = transition_weights(graph, prev, curr, p, q);
  std::vector<double> w(weights.size());
  std::transform(weights.begin(), weights.end(), w.begin(), [](const auto& e) { return e.second; });
  order_.emplace_front(key, AliasTable::build(w));
  map_[key] = order_.begin();
  if (map_.size() > capacity_) {
    map_.erase(order_.back().first);
    order_.pop_back();
  }
  return order_.front().second;
}

std::vector<Walk> generate_walks(const PropertyGraph& graph, const Node2VecConfig& config) {
  config.validate();
  const WalkGraph walk_graph(graph, config.directed);
  TransitionCache cache(config.alias_cache_capacity);

  std::vector<Walk> walks;
  walks.reserve(walk_graph.nodes().size() * config.walks_per_node);
  for (std::size_t round = 0; round < config.walks_per_node; ++round) {
    auto order = walk_graph.nodes();
    Rng shuffle_rng(mix_seed(config.seed ^ 0x5a17ULL, round));
    shuffle_rng.shuffle(order);
    for (auto start : order) {
      Rng rng(mix_seed(mix_seed(config.seed, start.value), round + 1));
      Walk walk{start};
      walk.reserve(config.walk_length);
      while (walk.size() < config.walk_length) {
        const auto curr = walk.back();
        const auto nbrs = walk_graph.neighbors(curr);
        if (nbrs.empty()) break;
        if (walk.size() == 1) {
          walk.push_back(nbrs[rng.below(nbrs.size())]);
        } else {
          const auto prev = walk[walk.size() - 2];
          const auto& table = cache.get(walk_graph, prev, curr, config.p, config.q);
          walk.push_back(nbrs[table.draw(rng)]);
        }
      }
      walks.push_back(std::move(walk));
    }
  }
  return walks;
}

namespace {

inline float dot(const float* a, const float* b, std::size_t n) {
  float s = 0.0f;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline float sigmoid(float x) { return 1.0f / (1.0f + std::exp(-x)); }

}  // namespace

EmbeddingTable train_skipgram(const std::vector<Walk>& walks, const Node2VecConfig& config) {
  config.validate();
  if (walks.empty()) fail(ErrorKind::kValidation, "skip-gram needs at least one walk");

  std::map<NodeId, std::size_t> counts;
  std::size_t total_tokens = 0;
  for (const auto& w : walks) {
    for (auto id : w) ++counts[id];
    total_tokens += w.size();
  }
  std::vector<NodeId> vocab;
  std::unordered_map<NodeId, std::uint32_t> slot;
  std::vector<double> noise;
  for (const auto& [id, c] : counts) {
    slot.emplace(id, static_cast<std::uint32_t>(vocab.size()));
    vocab.push_back(id);
    noise.push_back(std::pow(static_cast<double>(c), 0.75));
  }
  const auto noise_table = AliasTable::build(noise);

  const std::size_t dim = config.dim;
  const std::size_t vocab_size = vocab.size();
  std::vector<float> input(vocab_size * dim);
  std::vector<float> output(vocab_size * dim, 0.0f);
  {
    Rng init_rng(mix_seed(config.seed, 0x1417ULL));
    const double bound = 0.5 / static_cast<double>(dim);
    for (auto& x : input) x = static_cast<float>(init_rng.uniform(-bound, bound));
  }

  // Walks re-encoded as vocabulary slots.
  std::vector<std::vector<std::uint32_t>> encoded;
  encoded.reserve(walks.size());
  for (const auto& w : walks) {
    std::vector<std::uint32_t> e(w.size());
    std::transform(w.begin(), w.end(), e.begin(), [&](NodeId id) { return slot.at(id); });
    encoded.push_back(std::move(e));
  }

  Rng rng(mix_seed(config.seed, 0x5c1bULL));
  std::vector<float> grad_in(dim);
  const double total_steps = static_cast<double>(config.epochs * total_tokens);
  double processed = 0.0;
  const std::ptrdiff_t window = static_cast<std::ptrdiff_t>(config.window);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& walk : encoded) {
      const auto len = static_cast<std::ptrdiff_t>(walk.size());
      for (std::ptrdiff_t i = 0; i < len; ++i) {
        const float lr = static_cast<float>(
            config.learning_rate * std::max(1e-4, 1.0 - processed / total_steps));
        processed += 1.0;
        float* center = &input[walk[i] * dim];
        const auto lo = std::max<std::ptrdiff_t>(0, i - window);
        const auto hi = std::min<std::ptrdiff_t>(len - 1, i + window);
        for (auto j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const auto context = walk[j];
          std::fill(grad_in.begin(), grad_in.end(), 0.0f);
          for (std::size_t d = 0; d <= config.negatives; ++d) {
            std::uint32_t target;
            float label;
            if (d == 0) {
              target = context;
              label = 1.0f;
            } else {
              target = static_cast<std::uint32_t>(noise_table.draw(rng));
              if (target == context) continue;
              label = 0.0f;
            }
            float* out = &output[target * dim];
            const float g = (label - sigmoid(dot(center, out, dim))) * lr;
            for (std::size_t k = 0; k < dim; ++k) grad_in[k] += g * out[k];
            for (std::size_t k = 0; k < dim; ++k) out[k] += g * center[k];
          }
          for (std::size_t k = 0; k < dim; ++k) center[k] += grad_in[k];
        }
      }
    }
  }

  EmbeddingTable table(dim);
  for (std::size_t v = 0; v < vocab_size; ++v)
    table.add(vocab[v], std::span<const float>(&input[v * dim], dim));
  return table;
}

EmbeddingTable node2vec(const PropertyGraph& graph, const Node2VecConfig& config) {
  if (graph.empty()) fail(ErrorKind::kValidation, "node2vec needs a non-empty graph");
  return train_skipgram(generate_walks(graph, config), config);
}

}  // namespace artgraph::embed
