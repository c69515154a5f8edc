#include "artgraph/embed/alias_table.hpp"

#include <cmath>

#include "artgraph/util/error.hpp"

namespace artgraph::embed {

AliasTable AliasTable::build(std::span<const double> weights) {
  if (weights.empty()) fail(ErrorKind::kValidation, "alias table needs at least one weight");
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) fail(ErrorKind::kValidation, "alias weights must be finite and >= 0");
    total += w;
  }
  if (total <= 0.0) fail(ErrorKind::kValidation, "alias weights must not all be zero");

  const std::size_t n = weights.size();
  AliasTable table;
  table.prob_.resize(n);
  table.alias_.resize(n);

  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    table.prob_[s] = scaled[s];
    table.alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (auto i : large) {
    table.prob_[i] = 1.0;
    table.alias_[i] = i;
  }
  for (auto i : small) {
    table.prob_[i] = 1.0;
    table.alias_[i] = i;
  }
  return table;
}

}  // namespace artgraph::embed
