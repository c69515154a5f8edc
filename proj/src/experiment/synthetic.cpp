#include "artgraph/experiment/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "artgraph/util/error.hpp"
#include "artgraph/util/rng.hpp"

namespace artgraph::experiment {

void SyntheticSpec::validate() const {
  if (num_artists < 1 || num_styles < 1 || num_genres < 1 || artworks_per_artist < 1 || visual_dim < 1)
    fail(ErrorKind::kValidation, "synthetic counts and visual_dim must be >= 1");
  if (!(context_signal >= 0 && context_signal <= 1))
    fail(ErrorKind::kValidation, "context_signal must lie in [0, 1]");
  if (!(visual_noise >= 0)) fail(ErrorKind::kValidation, "visual_noise must be >= 0");
}

void to_json(nlohmann::json& j, const SyntheticSpec& s) {
  j = {{"num_artists", s.num_artists},
       {"num_styles", s.num_styles},
       {"num_genres", s.num_genres},
       {"artworks_per_artist", s.artworks_per_artist},
       {"visual_noise", s.visual_noise},
       {"context_signal", s.context_signal},
       {"seed", s.seed},
       {"visual_dim", s.visual_dim}};
}

void from_json(const nlohmann::json& j, SyntheticSpec& s) {
  SyntheticSpec d;
  s.num_artists = j.value("num_artists", d.num_artists);
  s.num_styles = j.value("num_styles", d.num_styles);
  s.num_genres = j.value("num_genres", d.num_genres);
  s.artworks_per_artist = j.value("artworks_per_artist", d.artworks_per_artist);
  s.visual_noise = j.value("visual_noise", d.visual_noise);
  s.context_signal = j.value("context_signal", d.context_signal);
  s.seed = j.value("seed", d.seed);
  s.visual_dim = j.value("visual_dim", d.visual_dim);
}

namespace {

std::string numbered(const char* prefix, std::size_t i, int width) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%0*zu", prefix, width, i);
  return buf;
}

// Home class with probability `signal`, otherwise one of the other classes.
std::size_t planted_draw(Rng& rng, std::size_t home, std::size_t classes, double signal) {
  if (classes == 1 || rng.uniform() < signal) return home;
  const auto other = static_cast<std::size_t>(rng.below(classes - 1));
  return other < home ? other : other + 1;
}

std::vector<std::vector<float>> prototypes(Rng& rng, std::size_t count, std::size_t dim) {
  std::vector<std::vector<float>> out(count, std::vector<float>(dim));
  for (auto& p : out)
    for (auto& x : p) x = static_cast<float>(rng.normal());
  return out;
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  SyntheticData data;
  auto& g = data.graph;
  data.features = FeatureTable(spec.visual_dim);
  Rng rng(mix_seed(spec.seed, 0x5e7ULL));

  std::vector<NodeId> styles, genres, movements, artists;
  for (std::size_t s = 0; s < spec.num_styles; ++s) styles.push_back(g.add_node(NodeLabel::kStyle, numbered("style", s, 2)));
  for (std::size_t s = 0; s < spec.num_genres; ++s) genres.push_back(g.add_node(NodeLabel::kGenre, numbered("genre", s, 2)));
  for (std::size_t s = 0; s < spec.num_styles; ++s)
    movements.push_back(g.add_node(NodeLabel::kMovement, numbered("movement", s, 2)));

  const auto artist_proto = prototypes(rng, spec.num_artists, spec.visual_dim);
  const auto style_proto = prototypes(rng, spec.num_styles, spec.visual_dim);
  const auto genre_proto = prototypes(rng, spec.num_genres, spec.visual_dim);

  for (std::size_t a = 0; a < spec.num_artists; ++a) {
    data.home_style.push_back(a % spec.num_styles);
    data.home_genre.push_back(static_cast<std::size_t>(rng.below(spec.num_genres)));
    artists.push_back(g.add_node(NodeLabel::kArtist, numbered("artist", a, 3)));
    g.add_edge(artists.back(), EdgeType::kPartOfMovement, movements[data.home_style[a]]);
  }

  std::vector<float> visual(spec.visual_dim);
  const double scale = 1.0 / std::sqrt(3.0 + spec.visual_noise * spec.visual_noise);
  for (std::size_t a = 0; a < spec.num_artists; ++a) {
    for (std::size_t k = 0; k < spec.artworks_per_artist; ++k) {
      const auto style = planted_draw(rng, data.home_style[a], spec.num_styles, spec.context_signal);
      const auto genre = planted_draw(rng, data.home_genre[a], spec.num_genres, spec.context_signal);
      const auto name = numbered(numbered("artwork", a, 3).c_str(), k, 4);
      const auto art = g.add_node(NodeLabel::kArtwork, name);
      g.add_edge(art, EdgeType::kCreatedBy, artists[a]);
      g.add_edge(art, EdgeType::kHasStyle, styles[style]);
      g.add_edge(art, EdgeType::kHasGenre, genres[genre]);
      for (std::size_t d = 0; d < spec.visual_dim; ++d) {
        visual[d] = static_cast<float>((static_cast<double>(artist_proto[a][d]) + style_proto[style][d] +
                                       genre_proto[genre][d] + spec.visual_noise * rng.normal()) *
                                      scale);
      }
      data.features.add(name, visual);
    }
  }
  return data;
}

}  // namespace artgraph::experiment
