#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "artgraph/embed/alias_table.hpp"
#include "artgraph/embed/embedding_table.hpp"
#include "artgraph/embed/node2vec.hpp"
#include "artgraph/graph/property_graph.hpp"

namespace artgraph::testing {

// Exact distribution implied by an alias table.
inline std::vector<double> implied_distribution(const embed::AliasTable& t) {
  const auto n = t.size();
  std::vector<double> p(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] += t.prob()[i] / static_cast<double>(n);
    p[t.alias()[i]] += (1.0 - t.prob()[i]) / static_cast<double>(n);
  }
  return p;
}

inline double total_variation(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

// Three-case node2vec rule evaluated directly against the typed edge list.
inline double oracle_transition_weight(const PropertyGraph& g, NodeId prev, NodeId next, double p,
                                       double q) {
  if (next == prev) return 1.0 / p;
  for (const auto& e : g.edges())
    if ((e.src == prev && e.dst == next) || (e.src == next && e.dst == prev)) return 1.0;
  return 1.0 / q;
}

inline double cosine(std::span<const float> a, std::span<const float> b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += double(a[i]) * b[i];
    aa += double(a[i]) * a[i];
    bb += double(b[i]) * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

struct HomophilyResult {
  double intra = 0;
  double inter = 0;
  double gap() const { return intra - inter; }
};

// Mean cosine within and across the two cliques of a barbell graph whose
// first `clique_size` ids form one clique.
inline HomophilyResult barbell_homophily(const embed::EmbeddingTable& table, std::size_t clique_size) {
  HomophilyResult r;
  std::size_t n_intra = 0, n_inter = 0;
  for (std::uint64_t i = 0; i < 2 * clique_size; ++i) {
    for (std::uint64_t j = i + 1; j < 2 * clique_size; ++j) {
      const double c = cosine(*table.find(NodeId{i}), *table.find(NodeId{j}));
      if ((i < clique_size) == (j < clique_size)) {
        r.intra += c;
        ++n_intra;
      } else {
        r.inter += c;
        ++n_inter;
      }
    }
  }
  r.intra /= static_cast<double>(n_intra);
  r.inter /= static_cast<double>(n_inter);
  return r;
}

}  // namespace artgraph::testing
