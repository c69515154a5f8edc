#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "artgraph/experiment/features.hpp"
#include "artgraph/graph/property_graph.hpp"

namespace artgraph::experiment {

struct SyntheticSpec {
  std::size_t num_artists = 20;
  std::size_t num_styles = 5;
  std::size_t num_genres = 5;
  std::size_t artworks_per_artist = 100;
  double visual_noise = 16.0;
  double context_signal = 0.9;  // P(artwork inherits its artist's home style / genre)
  std::uint64_t seed = 1;
  std::size_t visual_dim = 2048;

  void validate() const;
};

void to_json(nlohmann::json& j, const SyntheticSpec& s);
void from_json(const nlohmann::json& j, SyntheticSpec& s);

struct SyntheticData {
  PropertyGraph graph;
  FeatureTable features;
  std::vector<std::size_t> home_style;  // per artist index
  std::vector<std::size_t> home_genre;
};

// Artist i has home style i mod num_styles and a random home genre, and is
// partOfMovement the movement of its home style (one movement per style).
// Each artwork keeps the home style with probability context_signal and
// otherwise takes one of the other styles uniformly; genres likewise. Its
// visual vector is artist + style + genre prototype (each N(0, 1) per
// dimension) plus visual_noise * N(0, 1), divided by sqrt(3 + visual_noise^2)
// so every dimension has unit variance whatever the noise level.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace artgraph::experiment
