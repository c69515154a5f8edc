#include <gtest/gtest.h>

#include <map>
#include <set>

#include "artgraph/embed/alias_table.hpp"
#include "artgraph/embed/embedding_table.hpp"
#include "artgraph/embed/node2vec.hpp"
#include "artgraph/util/error.hpp"
#include "artgraph/util/rng.hpp"
#include "support/embedding_checks.hpp"
#include "support/graph_builders.hpp"
#include "support/temp_dir.hpp"

using namespace artgraph;
using namespace artgraph::embed;
using artgraph::testing::TempDir;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an artgraph::Error";
  return ErrorKind::kInternal;
}

std::map<NodeId, double> as_map(const std::vector<std::pair<NodeId, double>>& v) {
  return {v.begin(), v.end()};
}

std::vector<double> empirical(const AliasTable& table, std::size_t draws, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> freq(table.size(), 0.0);
  for (std::size_t i = 0; i < draws; ++i) freq[table.draw(rng)] += 1.0;
  for (auto& f : freq) f /= static_cast<double>(draws);
  return freq;
}

Node2VecConfig small_config() {
  Node2VecConfig c;
  c.dim = 16;
  c.walk_length = 10;
  c.walks_per_node = 4;
  c.epochs = 2;
  return c;
}

}  // namespace

TEST(TransitionWeights, UnbiasedWhenPAndQAreOne) {
  const auto g = artgraph::testing::random_schema_graph(3, 30, 120);
  const WalkGraph wg(g, false);
  for (auto curr : g.node_ids())
    for (auto prev : wg.neighbors(curr))
      for (const auto& [next, w] : transition_weights(wg, prev, curr, 1.0, 1.0)) EXPECT_EQ(w, 1.0);
}

TEST(TransitionWeights, PathAndTriangle) {
  PropertyGraph path;
  const auto t = path.add_node(NodeLabel::kArtist, "t");
  const auto v = path.add_node(NodeLabel::kArtist, "v");
  const auto x = path.add_node(NodeLabel::kArtist, "x");
  path.add_edge(t, EdgeType::kInfluenced, v);
  path.add_edge(v, EdgeType::kInfluenced, x);
  EXPECT_EQ(as_map(transition_weights(path, t, v, 0.5, 2.0)), (std::map<NodeId, double>{{t, 2.0}, {x, 0.5}}));

  auto triangle = path;
  triangle.add_edge(x, EdgeType::kInfluenced, t);
  EXPECT_EQ(as_map(transition_weights(triangle, t, v, 0.5, 2.0)), (std::map<NodeId, double>{{t, 2.0}, {x, 1.0}}));
}

TEST(TransitionWeights, IsolatedCurrentNodeGivesNothing) {
  PropertyGraph g;
  const auto a = g.add_node(NodeLabel::kArtist, "a");
  const auto b = g.add_node(NodeLabel::kArtist, "b");
  EXPECT_TRUE(transition_weights(g, a, b, 1.0, 1.0).empty());
}

TEST(TransitionWeights, MatchesThreeCaseOracleExhaustively) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = artgraph::testing::random_schema_graph(seed, 40, 150);
    const WalkGraph wg(g, false);
    const double p = 0.25 + 0.5 * static_cast<double>(seed % 4);
    const double q = 4.0 / (1.0 + static_cast<double>(seed % 3));
    for (auto prev : g.node_ids()) {
      for (auto curr : g.node_ids()) {
        for (const auto& [next, w] : transition_weights(wg, prev, curr, p, q)) {
          EXPECT_NEAR(w, artgraph::testing::oracle_transition_weight(g, prev, next, p, q), 1e-12);
        }
      }
    }
  }
}

TEST(AliasTable, SmallExamples) {
  const std::vector<double> w13{1.0, 3.0};
  const auto t = AliasTable::build(w13);
  const auto p = artgraph::testing::implied_distribution(t);
  EXPECT_NEAR(p[0], 0.25, 1e-15);
  EXPECT_NEAR(p[1], 0.75, 1e-15);

  const std::vector<double> single{5.0};
  const auto one = AliasTable::build(single);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(one.draw(rng), 0u);

  for (double x : t.prob()) {
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
}

TEST(AliasTable, RejectsBadWeights) {
  EXPECT_EQ(kind_of([] { AliasTable::build(std::vector<double>{0.0, 0.0}); }), ErrorKind::kValidation);
  EXPECT_EQ(kind_of([] { AliasTable::build(std::vector<double>{1.0, -1.0}); }), ErrorKind::kValidation);
  EXPECT_EQ(kind_of([] { AliasTable::build(std::vector<double>{}); }), ErrorKind::kValidation);
}

TEST(AliasTable, EmpiricalDistributionWithinTolerance) {
  const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  const auto t = AliasTable::build(w);
  EXPECT_LE(artgraph::testing::total_variation(empirical(t, 1'000'000, 7), w), 0.005);
}

TEST(AliasTable, ImpliedDistributionIsExactForRandomWeights) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 1 + rng.below(64);
    std::vector<double> w(n);
    double total = 0;
    for (auto& x : w) {
      x = rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.0, 10.0);
      total += x;
    }
    if (total == 0) w[0] = total = 1.0;
    const auto p = artgraph::testing::implied_distribution(AliasTable::build(w));
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(p[i], w[i] / total, 1e-12);
  }
}

TEST(GenerateWalks, IsolatedNodeAndTwoNodeGraph) {
  auto config = small_config();
  PropertyGraph lonely;
  lonely.add_node(NodeLabel::kArtist, "a");
  for (const auto& w : generate_walks(lonely, config)) EXPECT_EQ(w.size(), 1u);

  PropertyGraph pair;
  const auto a = pair.add_node(NodeLabel::kArtist, "a");
  const auto b = pair.add_node(NodeLabel::kArtist, "b");
  pair.add_edge(a, EdgeType::kInfluenced, b);
  const auto walks = generate_walks(pair, config);
  EXPECT_EQ(walks.size(), 2 * config.walks_per_node);
  for (const auto& w : walks) {
    EXPECT_EQ(w.size(), config.walk_length);
    for (std::size_t i = 1; i < w.size(); ++i) EXPECT_NE(w[i], w[i - 1]);
  }
}

TEST(GenerateWalks, EveryNodeStartsWalksPerNodeWalks) {
  const auto g = artgraph::testing::random_schema_graph(5, 60, 200);
  auto config = small_config();
  config.p = 0.5;
  config.q = 2.0;
  const auto walks = generate_walks(g, config);
  std::map<NodeId, std::size_t> starts;
  for (const auto& w : walks) {
    ++starts[w.front()];
    EXPECT_LE(w.size(), config.walk_length);
    for (std::size_t i = 1; i < w.size(); ++i) {
      EXPECT_TRUE(g.has_edge(w[i - 1], EdgeType::kInfluenced, w[i]) ||
                  !g.neighbors(w[i - 1], Direction::kBoth).empty());
    }
  }
  EXPECT_EQ(starts.size(), g.node_count());
  for (const auto& [id, n] : starts) EXPECT_EQ(n, config.walks_per_node);
  EXPECT_EQ(walks, generate_walks(g, config));
}

TEST(GenerateWalks, FirstStepIsUniformOverNeighbours) {
  PropertyGraph star;
  const auto center = star.add_node(NodeLabel::kArtist, "center");
  std::vector<NodeId> leaves;
  for (int i = 0; i < 5; ++i) {
    leaves.push_back(star.add_node(NodeLabel::kArtist, "leaf" + std::to_string(i)));
    star.add_edge(center, EdgeType::kInfluenced, leaves.back());
  }
  Node2VecConfig config;
  config.walk_length = 2;
  config.walks_per_node = 100'000;
  std::vector<double> freq(leaves.size(), 0.0);
  double n = 0;
  for (const auto& w : generate_walks(star, config)) {
    if (w.front() != center) continue;
    freq[w[1].value - leaves.front().value] += 1.0;
    n += 1.0;
  }
  for (auto& f : freq) f /= n;
  const std::vector<double> uniform(leaves.size(), 1.0 / static_cast<double>(leaves.size()));
  EXPECT_LE(artgraph::testing::total_variation(freq, uniform), 0.01);
}

TEST(GenerateWalks, SecondStepFollowsBiasedWeights) {
  // path t - v - x: having come t -> v, P(back to t) = (1/p) / (1/p + 1/q).
  PropertyGraph g;
  const auto t = g.add_node(NodeLabel::kArtist, "t");
  const auto v = g.add_node(NodeLabel::kArtist, "v");
  const auto x = g.add_node(NodeLabel::kArtist, "x");
  g.add_edge(t, EdgeType::kInfluenced, v);
  g.add_edge(v, EdgeType::kInfluenced, x);
  Node2VecConfig config;
  config.p = 0.5;
  config.q = 2.0;
  config.walk_length = 3;
  config.walks_per_node = 50'000;
  double back = 0, total = 0;
  for (const auto& w : generate_walks(g, config)) {
    if (w.front() != t) continue;
    total += 1;
    if (w[2] == t) back += 1;
  }
  EXPECT_NEAR(back / total, 2.0 / 2.5, 0.01);
}

TEST(TransitionCache, EvictsBeyondCapacity) {
  const auto g = artgraph::testing::barbell_graph(6);
  const WalkGraph wg(g, false);
  TransitionCache cache(3);
  for (auto curr : wg.nodes())
    for (auto prev : wg.neighbors(curr)) cache.get(wg, prev, curr, 1.0, 2.0);
  EXPECT_EQ(cache.size(), 3u);
}

TEST(TrainSkipgram, ZeroEpochsKeepsInitialisation) {
  const auto g = artgraph::testing::barbell_graph(4);
  auto config = small_config();
  config.epochs = 0;
  const auto walks = generate_walks(g, config);
  const auto table = train_skipgram(walks, config);
  EXPECT_EQ(table.size(), g.node_count());
  const double bound = 0.5 / static_cast<double>(config.dim);
  for (std::size_t i = 0; i < table.size(); ++i)
    for (float x : table.row(i)) {
      EXPECT_GE(x, -bound);
      EXPECT_LE(x, bound);
    }
  EXPECT_EQ(table, train_skipgram(walks, config));
  auto other = config;
  other.seed = 2;
  EXPECT_FALSE(table == train_skipgram(walks, other));
}

TEST(TrainSkipgram, VectorsFiniteAndNonZero) {
  const auto g = artgraph::testing::random_schema_graph(11, 80, 300);
  const auto table = node2vec(g, small_config());
  EXPECT_EQ(table.size(), g.node_count());
  for (std::size_t i = 0; i < table.size(); ++i) {
    double norm = 0;
    for (float x : table.row(i)) {
      EXPECT_TRUE(std::isfinite(x));
      norm += double(x) * x;
    }
    EXPECT_GT(norm, 0.0);
  }
}

TEST(TrainSkipgram, BarbellCliquesSeparate) {
  const auto g = artgraph::testing::barbell_graph(10);
  Node2VecConfig config;
  config.seed = 3;
  const auto r = artgraph::testing::barbell_homophily(node2vec(g, config), 10);
  EXPECT_GE(r.gap(), 0.2) << "intra " << r.intra << " inter " << r.inter;
}

TEST(Node2Vec, DeterministicAndRejectsEmptyGraph) {
  const auto g = artgraph::testing::random_schema_graph(2, 50, 150);
  const auto config = small_config();
  EXPECT_EQ(node2vec(g, config), node2vec(g, config));
  EXPECT_EQ(kind_of([&] { node2vec(PropertyGraph{}, config); }), ErrorKind::kValidation);
  auto bad = config;
  bad.p = 0;
  EXPECT_EQ(kind_of([&] { node2vec(g, bad); }), ErrorKind::kValidation);
}

TEST(EmbeddingFile, RoundTripAndCorruption) {
  TempDir dir;
  const auto g = artgraph::testing::random_schema_graph(4, 30, 80);
  const auto table = node2vec(g, small_config());
  save_embeddings(table, dir.file("e.agem"));
  EXPECT_EQ(load_embeddings(dir.file("e.agem")), table);
  EXPECT_EQ(load_embeddings(dir.file("e.agem"), 16), table);

  const auto bytes = encode_embeddings(table);
  EXPECT_EQ(bytes.substr(0, 4), "AGEM");
  EXPECT_EQ(kind_of([&] { decode_embeddings(bytes.substr(0, bytes.size() - 3)); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { decode_embeddings(bytes, 128); }), ErrorKind::kShape);
  auto wrong_dim = bytes;
  wrong_dim[6] = 17;  // header claims dim 17
  EXPECT_EQ(kind_of([&] { decode_embeddings(wrong_dim); }), ErrorKind::kFormat);
  auto wrong_version = bytes;
  wrong_version[4] = 2;
  EXPECT_EQ(kind_of([&] { decode_embeddings(wrong_version); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { load_embeddings(dir.file("missing.agem")); }), ErrorKind::kIo);
}
