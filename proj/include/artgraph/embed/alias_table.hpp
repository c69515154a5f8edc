#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "artgraph/util/rng.hpp"

namespace artgraph::embed {

// Walker/Vose alias table: O(n) construction, O(1) draws.
class AliasTable {
 public:
  AliasTable() = default;

  // Throws kValidation for negative, non-finite or all-zero weights.
  static AliasTable build(std::span<const double> weights);

  std::size_t draw(Rng& rng) const {
    const auto column = static_cast<std::size_t>(rng.below(prob_.size()));
    return rng.uniform() < prob_[column] ? column : alias_[column];
  }

  std::size_t size() const { return prob_.size(); }
  std::span<const double> prob() const { return prob_; }
  std::span<const std::uint32_t> alias() const { return alias_; }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace artgraph::embed
