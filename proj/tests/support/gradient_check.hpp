#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "artgraph/model/classifier.hpp"
#include "artgraph/util/rng.hpp"

namespace artgraph::testing {

struct GradientCheck {
  // max_k |a_k - n_k| / max_k |n_k|, worst over tensors
  double max_tensor_rel_error = 0;
  std::string worst_tensor;
  // per entry |a - n| / max(|a|, |n|, 1e-7), worst over all entries
  double max_entry_rel_error = 0;
  std::string worst_entry;
  std::size_t checked = 0;
};

inline double relative_error(double analytic, double numeric, double floor = 1e-7) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

// Central differences over every parameter entry.
inline GradientCheck check_gradients(const model::Batch<double>& batch, model::Params<double> params,
                                     const model::ModelConfig& config, double step = 1e-3) {
  auto loss_at = [&](const model::Params<double>& p) {
    return model::total_loss(batch, model::forward(batch.visual, p, config), config);
  };
  const auto analytic = model::backward(batch, model::forward(batch.visual, params, config), params, config);

  std::vector<const double*> grads;
  analytic.for_each([&](std::string_view, const auto& t) { grads.push_back(t.data()); });

  GradientCheck result;
  std::size_t tensor = 0;
  params.for_each([&](std::string_view name, auto& t) {
    const double* g = grads[tensor++];
    double diff_max = 0, numeric_max = 0;
    for (Eigen::Index k = 0; k < t.size(); ++k) {
      const double saved = t.data()[k];
      t.data()[k] = saved + step;
      const double up = loss_at(params);
      t.data()[k] = saved - step;
      const double down = loss_at(params);
      t.data()[k] = saved;
      const double numeric = (up - down) / (2 * step);
      diff_max = std::max(diff_max, std::abs(g[k] - numeric));
      numeric_max = std::max(numeric_max, std::abs(numeric));
      const double err = relative_error(g[k], numeric);
      ++result.checked;
      if (err > result.max_entry_rel_error) {
        result.max_entry_rel_error = err;
        result.worst_entry = std::string(name) + "[" + std::to_string(k) + "]";
      }
    }
    if (t.size() == 0) return;
    const double err = diff_max / std::max(numeric_max, 1e-300);
    if (err > result.max_tensor_rel_error) {
      result.max_tensor_rel_error = err;
      result.worst_tensor = std::string(name);
    }
  });
  return result;
}

// Toy setup: visual 8, context 4, hidden 6, three tasks with 3 classes, random
// non-zero biases, batch of `n` instances carrying context vectors.
struct ToyProblem {
  model::ModelConfig config;
  model::Params<double> params;
  model::Batch<double> batch;
};

inline ToyProblem toy_problem(std::uint64_t seed, model::Mode mode, double gamma = 0.4, std::size_t n = 5,
                              double visual_scale = 1.0) {
  ToyProblem toy;
  auto& c = toy.config;
  c.visual_dim = 8;
  c.context_dim = 4;
  c.encoder_hidden = 6;
  c.num_classes = {3, 3, 3};
  c.gamma = gamma;
  c.mode = mode;
  toy.params = model::Params<double>::xavier(c, seed);
  Rng rng(mix_seed(seed, 77));
  toy.params.for_each([&](std::string_view, auto& t) {
    if (t.cols() == 1)
      for (Eigen::Index k = 0; k < t.size(); ++k) t(k) = rng.uniform(-0.5, 0.5);
  });
  toy.batch.visual = model::Mat<double>(c.visual_dim, n);
  toy.batch.context = model::Mat<double>(c.context_dim, n);
  for (Eigen::Index k = 0; k < toy.batch.visual.size(); ++k) toy.batch.visual.data()[k] = visual_scale * rng.normal();
  for (Eigen::Index k = 0; k < toy.batch.context->size(); ++k) toy.batch.context->data()[k] = rng.uniform(-0.9, 0.9);
  for (std::size_t t = 0; t < model::kNumTasks; ++t)
    for (std::size_t j = 0; j < n; ++j) toy.batch.labels[t].push_back(static_cast<std::uint32_t>(rng.below(3)));
  return toy;
}

}  // namespace artgraph::testing
