#include "artgraph/model/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "artgraph/util/error.hpp"
#include "artgraph/util/rng.hpp"

namespace artgraph::model {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kMultimodal: return "multimodal";
    case Mode::kRegularizationOnly: return "regularization_only";
    case Mode::kVisualOnly: return "visual_only";
  }
  return "?";
}

Mode parse_mode(std::string_view s) {
  for (auto m : {Mode::kMultimodal, Mode::kRegularizationOnly, Mode::kVisualOnly})
    if (to_string(m) == s) return m;
  fail(ErrorKind::kValidation, "unknown mode '" + std::string(s) +
                                   "' (expected multimodal, regularization_only or visual_only)");
}

void ModelConfig::validate() const {
  if (visual_dim < 1 || context_dim < 1 || encoder_hidden < 1 || batch_size < 1)
    fail(ErrorKind::kValidation, "model dimensions and batch size must be >= 1");
  for (std::size_t i = 0; i < kNumTasks; ++i) {
    if (num_classes[i] < 1)
      fail(ErrorKind::kValidation, std::string(kTaskNames[i]) + " needs at least one class");
    if (!(lambda[i] >= 0)) fail(ErrorKind::kValidation, "lambda weights must be >= 0");
  }
  if (!(gamma >= 0 && gamma <= 1)) fail(ErrorKind::kValidation, "gamma must lie in [0, 1]");
  if (!(learning_rate > 0) || !(epsilon > 0) || !(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1))
    fail(ErrorKind::kValidation, "invalid optimiser settings");
}

bool ModelConfig::same_architecture(const ModelConfig& o) const {
  return visual_dim == o.visual_dim && context_dim == o.context_dim &&
         encoder_hidden == o.encoder_hidden && num_classes == o.num_classes && mode == o.mode;
}

void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = {{"visual_dim", c.visual_dim},
       {"context_dim", c.context_dim},
       {"encoder_hidden", c.encoder_hidden},
       {"num_artists", c.num_classes[0]},
       {"num_styles", c.num_classes[1]},
       {"num_genres", c.num_classes[2]},
       {"gamma", c.gamma},
       {"lambda_artist", c.lambda[0]},
       {"lambda_style", c.lambda[1]},
       {"lambda_genre", c.lambda[2]},
       {"learning_rate", c.learning_rate},
       {"beta1", c.beta1},
       {"beta2", c.beta2},
       {"epsilon", c.epsilon},
       {"batch_size", c.batch_size},
       {"epochs", c.epochs},
       {"seed", c.seed},
       {"mode", to_string(c.mode)}};
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  ModelConfig d;
  c.visual_dim = j.value("visual_dim", d.visual_dim);
  c.context_dim = j.value("context_dim", d.context_dim);
  c.encoder_hidden = j.value("encoder_hidden", d.encoder_hidden);
  c.num_classes = {j.value("num_artists", d.num_classes[0]), j.value("num_styles", d.num_classes[1]),
                   j.value("num_genres", d.num_classes[2])};
  c.gamma = j.value("gamma", d.gamma);
  c.lambda = {j.value("lambda_artist", d.lambda[0]), j.value("lambda_style", d.lambda[1]),
              j.value("lambda_genre", d.lambda[2])};
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.beta1 = j.value("beta1", d.beta1);
  c.beta2 = j.value("beta2", d.beta2);
  c.epsilon = j.value("epsilon", d.epsilon);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.epochs = j.value("epochs", d.epochs);
  c.seed = j.value("seed", d.seed);
  c.mode = parse_mode(j.value("mode", std::string(to_string(d.mode))));
}

// ---- parameters ----

template <typename S>
Params<S> Params<S>::zeros(const ModelConfig& config) {
  config.validate();
  Params p;
  if (config.has_encoder()) {
    p.w1 = Mat<S>::Zero(config.encoder_hidden, config.visual_dim);
    p.b1 = Vec<S>::Zero(config.encoder_hidden);
    p.w2 = Mat<S>::Zero(config.context_dim, config.encoder_hidden);
    p.b2 = Vec<S>::Zero(config.context_dim);
  }
  for (std::size_t i = 0; i < kNumTasks; ++i) {
    p.head_w[i] = Mat<S>::Zero(config.num_classes[i], config.head_input_dim());
    p.head_b[i] = Vec<S>::Zero(config.num_classes[i]);
  }
  return p;
}

template <typename S>
Params<S> Params<S>::xavier(const ModelConfig& config, std::uint64_t seed) {
  auto p = zeros(config);
  Rng rng(mix_seed(seed, 0xc1a5ULL));
  auto fill = [&](Mat<S>& w) {
    const double bound = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    // column-major storage order, so the draw sequence is layout-independent
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = static_cast<S>(rng.uniform(-bound, bound));
  };
  if (config.has_encoder()) {
    fill(p.w1);
    fill(p.w2);
  }
  for (auto& w : p.head_w) fill(w);
  return p;
}

template <typename S>
std::size_t Params<S>::parameter_count() const {
  std::size_t n = 0;
  for_each([&](std::string_view, const auto& t) { n += static_cast<std::size_t>(t.size()); });
  return n;
}

template <typename S>
bool Params<S>::all_finite() const {
  bool ok = true;
  for_each([&](std::string_view, const auto& t) { ok = ok && t.allFinite(); });
  return ok;
}

template <typename S>
template <typename T>
Params<T> Params<S>::cast() const {
  Params<T> out;
  out.w1 = w1.template cast<T>();
  out.b1 = b1.template cast<T>();
  out.w2 = w2.template cast<T>();
  out.b2 = b2.template cast<T>();
  for (std::size_t i = 0; i < kNumTasks; ++i) {
    out.head_w[i] = head_w[i].template cast<T>();
    out.head_b[i] = head_b[i].template cast<T>();
  }
  return out;
}

namespace {

template <typename A, typename B>
bool same_tensor(const A& a, const B& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

// Flat views of every tensor, in for_each order.
template <typename P>
auto flat(P& params) {
  using S = std::remove_const_t<std::remove_reference_t<decltype(*params.w1.data())>>;
  using Elem = std::conditional_t<std::is_const_v<P>, const S, S>;
  std::vector<std::span<Elem>> out;
  params.for_each([&](std::string_view, auto& t) {
    out.emplace_back(t.data(), static_cast<std::size_t>(t.size()));
  });
  return out;
}

}  // namespace

template <typename S>
bool Params<S>::operator==(const Params& o) const {
  bool eq = same_tensor(w1, o.w1) && same_tensor(b1, o.b1) && same_tensor(w2, o.w2) && same_tensor(b2, o.b2);
  for (std::size_t i = 0; i < kNumTasks; ++i)
    eq = eq && same_tensor(head_w[i], o.head_w[i]) && same_tensor(head_b[i], o.head_b[i]);
  return eq;
}

// ---- batches ----

template <typename S>
Batch<S> make_batch(std::span<const LabeledInstance> instances, std::span<const std::size_t> rows,
                    const ModelConfig& config) {
  Batch<S> b;
  const auto n = static_cast<Eigen::Index>(rows.size());
  b.visual.resize(static_cast<Eigen::Index>(config.visual_dim), n);
  const bool all_context = std::all_of(rows.begin(), rows.end(),
                                       [&](std::size_t r) { return instances[r].context.has_value(); });
  if (all_context && n > 0) b.context.emplace(static_cast<Eigen::Index>(config.context_dim), n);
  for (auto& l : b.labels) l.resize(rows.size());

  for (Eigen::Index c = 0; c < n; ++c) {
    const auto& inst = instances[rows[static_cast<std::size_t>(c)]];
    if (inst.visual.size() != config.visual_dim)
      fail(ErrorKind::kShape, "visual vector of length " + std::to_string(inst.visual.size()) +
                                  ", expected " + std::to_string(config.visual_dim));
    for (Eigen::Index r = 0; r < b.visual.rows(); ++r) b.visual(r, c) = static_cast<S>(inst.visual[r]);
    if (b.context) {
      if (inst.context->size() != config.context_dim)
        fail(ErrorKind::kShape, "context vector of length " + std::to_string(inst.context->size()) +
                                    ", expected " + std::to_string(config.context_dim));
      for (Eigen::Index r = 0; r < b.context->rows(); ++r)
        (*b.context)(r, c) = static_cast<S>((*inst.context)[r]);
    }
    for (std::size_t t = 0; t < kNumTasks; ++t) {
      if (inst.labels[t] >= config.num_classes[t])
        fail(ErrorKind::kIndex, std::string(kTaskNames[t]) + " label " + std::to_string(inst.labels[t]) +
                                    " out of range for " + std::to_string(config.num_classes[t]) + " classes");
      b.labels[t][static_cast<std::size_t>(c)] = inst.labels[t];
    }
  }
  return b;
}

template <typename S>
Batch<S> make_batch(std::span<const LabeledInstance> instances, const ModelConfig& config) {
  std::vector<std::size_t> rows(instances.size());
  std::iota(rows.begin(), rows.end(), 0);
  return make_batch<S>(instances, rows, config);
}

// ---- forward ----

template <typename S>
Vec<S> encoder_forward(const Vec<S>& visual, const Params<S>& params) {
  if (visual.size() != params.w1.cols())
    fail(ErrorKind::kShape, "visual vector of length " + std::to_string(visual.size()) +
                                ", encoder expects " + std::to_string(params.w1.cols()));
  const Vec<S> hidden = (params.w1 * visual + params.b1).array().tanh().matrix();
  return (params.w2 * hidden + params.b2).array().tanh().matrix();
}

template <typename S>
ForwardTrace<S> forward(const Mat<S>& visual, const Params<S>& params, const ModelConfig& config) {
  if (visual.rows() != static_cast<Eigen::Index>(config.visual_dim))
    fail(ErrorKind::kShape, "visual input has " + std::to_string(visual.rows()) + " rows, expected " +
                                std::to_string(config.visual_dim));
  ForwardTrace<S> t;
  if (config.has_encoder()) {
    t.hidden = ((params.w1 * visual).colwise() + params.b1).array().tanh().matrix();
    t.predicted = ((params.w2 * t.hidden).colwise() + params.b2).array().tanh().matrix();
  }
  const auto v = static_cast<Eigen::Index>(config.visual_dim);
  for (std::size_t i = 0; i < kNumTasks; ++i) {
    const auto& w = params.head_w[i];
    if (config.concatenates()) {
      t.logits[i] = w.leftCols(v) * visual + w.rightCols(w.cols() - v) * t.predicted;
    } else {
      t.logits[i] = w * visual;
    }
    t.logits[i].colwise() += params.head_b[i];
  }
  return t;
}

// ---- losses ----

double mse_loss(std::span<const double> p, std::span<const double> u) {
  if (p.size() != u.size())
    fail(ErrorKind::kShape, "mse_loss length mismatch: " + std::to_string(p.size()) + " vs " +
                                std::to_string(u.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - u[i]) * (p[i] - u[i]);
  return s;
}

double cross_entropy(std::span<const double> z, std::size_t cls) {
  if (cls >= z.size())
    fail(ErrorKind::kIndex, "class " + std::to_string(cls) + " out of range for " +
                                std::to_string(z.size()) + " logits");
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double x : z) s += std::exp(x - m);
  return std::log(s) - (z[cls] - m);
}

template <typename S>
LossTerms loss_terms(const Batch<S>& batch, const ForwardTrace<S>& trace, const ModelConfig& config) {
  const auto n = batch.size();
  if (n == 0) fail(ErrorKind::kValidation, "loss of an empty batch");
  LossTerms out;
  std::vector<double> col;
  for (std::size_t i = 0; i < kNumTasks; ++i) {
    const auto& z = trace.logits[i];
    double sum = 0.0;
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      col.assign(static_cast<std::size_t>(z.rows()), 0.0);
      for (Eigen::Index r = 0; r < z.rows(); ++r) col[static_cast<std::size_t>(r)] = static_cast<double>(z(r, j));
      sum += cross_entropy(col, batch.labels[i][static_cast<std::size_t>(j)]);
    }
    out.classification += config.lambda[i] * (sum / static_cast<double>(n));
  }
  if (config.has_encoder()) {
    if (!batch.context)
      fail(ErrorKind::kValidation, std::string("every instance needs a context vector in ") +
                                       std::string(to_string(config.mode)) + " mode");
    const Mat<double> diff = trace.predicted.template cast<double>() - batch.context->template cast<double>();
    out.mse = diff.colwise().squaredNorm().sum() / static_cast<double>(n);
  }
  out.total = (1.0 - config.gamma) * out.classification + config.gamma * out.mse;
  return out;
}

template <typename S>
S total_loss(const Batch<S>& batch, const ForwardTrace<S>& trace, const ModelConfig& config) {
  return static_cast<S>(loss_terms(batch, trace, config).total);
}

// ---- backward ----

template <typename S>
Params<S> backward(const Batch<S>& batch, const ForwardTrace<S>& trace, const Params<S>& params,
                   const ModelConfig& config) {
  const auto n = static_cast<Eigen::Index>(batch.size());
  if (n == 0) fail(ErrorKind::kValidation, "gradient of an empty batch");
  const S inv_n = S(1) / static_cast<S>(n);
  const auto v = static_cast<Eigen::Index>(config.visual_dim);

  Params<S> g;
  Mat<S> d_pred;
  if (config.has_encoder()) {
    if (!batch.context)
      fail(ErrorKind::kValidation, std::string("every instance needs a context vector in ") +
                                       std::string(to_string(config.mode)) + " mode");
    d_pred = (S(2) * static_cast<S>(config.gamma) * inv_n) * (trace.predicted - *batch.context);
  }

  for (std::size_t i = 0; i < kNumTasks; ++i) {
    // softmax(z) - onehot, scaled by the task weight
    Mat<S> dz = trace.logits[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      auto c = dz.col(j);
      c.array() -= c.maxCoeff();
      c = c.array().exp().matrix();
      c /= c.sum();
      c(batch.labels[i][static_cast<std::size_t>(j)]) -= S(1);
    }
    dz *= static_cast<S>((1.0 - config.gamma) * config.lambda[i]) * inv_n;

    g.head_b[i] = dz.rowwise().sum();
    if (config.concatenates()) {
      g.head_w[i].resize(dz.rows(), v + static_cast<Eigen::Index>(config.context_dim));
      g.head_w[i].leftCols(v).noalias() = dz * batch.visual.transpose();
      g.head_w[i].rightCols(static_cast<Eigen::Index>(config.context_dim)).noalias() = dz * trace.predicted.transpose();
      d_pred.noalias() += params.head_w[i].rightCols(static_cast<Eigen::Index>(config.context_dim)).transpose() * dz;
    } else {
      g.head_w[i].noalias() = dz * batch.visual.transpose();
    }
  }

  if (config.has_encoder()) {
    const Mat<S> d_s2 = (d_pred.array() * (S(1) - trace.predicted.array().square())).matrix();
    g.w2.noalias() = d_s2 * trace.hidden.transpose();
    g.b2 = d_s2.rowwise().sum();
    const Mat<S> d_h = params.w2.transpose() * d_s2;
    const Mat<S> d_s1 = (d_h.array() * (S(1) - trace.hidden.array().square())).matrix();
    g.w1.noalias() = d_s1 * batch.visual.transpose();
    g.b1 = d_s1.rowwise().sum();
  }
  return g;
}

// ---- optimiser ----

template <typename S>
AdamState<S> AdamState<S>::zeros(const ModelConfig& config) {
  return {Params<S>::zeros(config), Params<S>::zeros(config), 0};
}

template <typename S>
void adam_step(Params<S>& params, const Params<S>& grads, AdamState<S>& state, const ModelConfig& config) {
  auto p = flat(params);
  const auto g = flat(grads);
  auto m = flat(state.m);
  auto v = flat(state.v);
  ++state.step;
  const double t = static_cast<double>(state.step);
  const S b1 = static_cast<S>(config.beta1);
  const S b2 = static_cast<S>(config.beta2);
  const S c1 = static_cast<S>(1.0 - std::pow(config.beta1, t));
  const S c2 = static_cast<S>(1.0 - std::pow(config.beta2, t));
  const S lr = static_cast<S>(config.learning_rate);
  const S eps = static_cast<S>(config.epsilon);
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (g[k].size() != p[k].size()) fail(ErrorKind::kShape, "gradient shape does not match parameters");
    for (std::size_t e = 0; e < p[k].size(); ++e) {
      const S gr = g[k][e];
      m[k][e] = b1 * m[k][e] + (S(1) - b1) * gr;
      v[k][e] = b2 * v[k][e] + (S(1) - b2) * gr * gr;
      const S m_hat = m[k][e] / c1;
      const S v_hat = v[k][e] / c2;
      p[k][e] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  }
}

// ---- inference ----

std::uint32_t argmax(std::span<const float> logits) {
  if (logits.empty()) fail(ErrorKind::kValidation, "argmax of empty logits");
  std::uint32_t best = 0;
  for (std::uint32_t i = 1; i < logits.size(); ++i)
    if (logits[i] > logits[best]) best = i;
  return best;
}

namespace {

Mat<float> single_column(std::span<const float> visual, const ModelConfig& config) {
  if (visual.size() != config.visual_dim)
    fail(ErrorKind::kShape, "visual vector of length " + std::to_string(visual.size()) + ", expected " +
                                std::to_string(config.visual_dim));
  return Eigen::Map<const Mat<float>>(visual.data(), static_cast<Eigen::Index>(visual.size()), 1);
}

std::span<const float> column(const Mat<float>& m, Eigen::Index c) {
  return {m.data() + c * m.rows(), static_cast<std::size_t>(m.rows())};
}

}  // namespace

Prediction predict(std::span<const float> visual, const Params<float>& params, const ModelConfig& config) {
  const auto t = forward<float>(single_column(visual, config), params, config);
  Prediction out;
  for (std::size_t i = 0; i < kNumTasks; ++i) out[i] = argmax(column(t.logits[i], 0));
  return out;
}

std::array<std::vector<float>, kNumTasks> predict_proba(std::span<const float> visual,
                                                        const Params<float>& params,
                                                        const ModelConfig& config) {
  const auto t = forward<float>(single_column(visual, config), params, config);
  std::array<std::vector<float>, kNumTasks> out;
  for (std::size_t i = 0; i < kNumTasks; ++i) {
    const auto z = column(t.logits[i], 0);
    const double m = *std::max_element(z.begin(), z.end());
    std::vector<double> e(z.size());
    double s = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) s += e[k] = std::exp(double(z[k]) - m);
    out[i].resize(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) out[i][k] = static_cast<float>(e[k] / s);
  }
  return out;
}

std::vector<Prediction> predict_all(std::span<const LabeledInstance> instances,
                                    const Params<float>& params, const ModelConfig& config) {
  constexpr std::size_t kChunk = 256;
  std::vector<Prediction> out;
  out.reserve(instances.size());
  for (std::size_t start = 0; start < instances.size(); start += kChunk) {
    const auto chunk = instances.subspan(start, std::min(kChunk, instances.size() - start));
    Mat<float> x(static_cast<Eigen::Index>(config.visual_dim), static_cast<Eigen::Index>(chunk.size()));
    for (std::size_t c = 0; c < chunk.size(); ++c) {
      if (chunk[c].visual.size() != config.visual_dim)
        fail(ErrorKind::kShape, "visual vector of length " + std::to_string(chunk[c].visual.size()) +
                                    ", expected " + std::to_string(config.visual_dim));
      std::copy(chunk[c].visual.begin(), chunk[c].visual.end(), x.col(static_cast<Eigen::Index>(c)).data());
    }
    const auto t = forward<float>(x, params, config);
    for (std::size_t c = 0; c < chunk.size(); ++c) {
      Prediction p;
      for (std::size_t i = 0; i < kNumTasks; ++i)
        p[i] = argmax(column(t.logits[i], static_cast<Eigen::Index>(c)));
      out.push_back(p);
    }
  }
  return out;
}

std::array<double, kNumTasks> accuracy(std::span<const LabeledInstance> instances,
                                       const Params<float>& params, const ModelConfig& config) {
  if (instances.empty()) fail(ErrorKind::kValidation, "accuracy of an empty instance set");
  const auto preds = predict_all(instances, params, config);
  std::array<double, kNumTasks> correct{};
  for (std::size_t k = 0; k < instances.size(); ++k)
    for (std::size_t i = 0; i < kNumTasks; ++i)
      if (preds[k][i] == instances[k].labels[i]) correct[i] += 1.0;
  for (auto& c : correct) c /= static_cast<double>(instances.size());
  return correct;
}

// ---- training ----

TrainingState init_training(const ModelConfig& config) {
  config.validate();
  return {config, Params<float>::xavier(config, config.seed), AdamState<float>::zeros(config), 0, {}};
}

void train_epochs(TrainingState& state, std::span<const LabeledInstance> dataset,
                  std::span<const LabeledInstance> validation) {
  const auto& config = state.config;
  config.validate();
  if (dataset.empty()) fail(ErrorKind::kValidation, "training set is empty");
  std::vector<std::size_t> order(dataset.size());
  for (std::size_t epoch = state.epochs_done; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng(mix_seed(config.seed, 0xe90c0000ULL + epoch)).shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const auto rows = std::span<const std::size_t>(order).subspan(
          start, std::min(config.batch_size, order.size() - start));
      const auto batch = make_batch<float>(dataset, rows, config);
      const auto trace = forward<float>(batch.visual, state.params, config);
      loss_sum += loss_terms(batch, trace, config).total * static_cast<double>(rows.size());
      const auto grads = backward(batch, trace, state.params, config);
      adam_step(state.params, grads, state.adam, config);
    }
    EpochLog entry{epoch + 1, loss_sum / static_cast<double>(dataset.size()), std::nullopt};
    if (!validation.empty()) entry.validation_accuracy = accuracy(validation, state.params, config);
    state.log.push_back(entry);
    state.epochs_done = epoch + 1;
  }
}

TrainingState train(std::span<const LabeledInstance> dataset, const ModelConfig& config,
                    std::span<const LabeledInstance> validation) {
  auto state = init_training(config);
  if (dataset.empty()) fail(ErrorKind::kValidation, "training set is empty");
  train_epochs(state, dataset, validation);
  return state;
}

void to_json(nlohmann::json& j, const EpochLog& e) {
  j = {{"epoch", e.epoch}, {"loss", e.loss}, {"validation_accuracy", nullptr}};
  if (e.validation_accuracy) {
    auto& acc = j["validation_accuracy"] = nlohmann::json::object();
    for (std::size_t i = 0; i < kNumTasks; ++i) acc[std::string(kTaskNames[i])] = (*e.validation_accuracy)[i];
  }
}

void from_json(const nlohmann::json& j, EpochLog& e) {
  e.epoch = j.at("epoch").get<std::size_t>();
  e.loss = j.at("loss").get<double>();
  e.validation_accuracy.reset();
  if (const auto& acc = j.at("validation_accuracy"); !acc.is_null()) {
    std::array<double, kNumTasks> a{};
    for (std::size_t i = 0; i < kNumTasks; ++i) a[i] = acc.at(std::string(kTaskNames[i])).get<double>();
    e.validation_accuracy = a;
  }
}

#define ARTGRAPH_INSTANTIATE(S)                                                                      \
  template struct Params<S>;                                                                         \
  template struct AdamState<S>;                                                                      \
  template Batch<S> make_batch<S>(std::span<const LabeledInstance>, const ModelConfig&);             \
  template Batch<S> make_batch<S>(std::span<const LabeledInstance>, std::span<const std::size_t>,    \
                                  const ModelConfig&);                                               \
  template Vec<S> encoder_forward<S>(const Vec<S>&, const Params<S>&);                               \
  template ForwardTrace<S> forward<S>(const Mat<S>&, const Params<S>&, const ModelConfig&);          \
  template LossTerms loss_terms<S>(const Batch<S>&, const ForwardTrace<S>&, const ModelConfig&);     \
  template S total_loss<S>(const Batch<S>&, const ForwardTrace<S>&, const ModelConfig&);             \
  template Params<S> backward<S>(const Batch<S>&, const ForwardTrace<S>&, const Params<S>&,          \
                                 const ModelConfig&);                                                \
  template void adam_step<S>(Params<S>&, const Params<S>&, AdamState<S>&, const ModelConfig&);

ARTGRAPH_INSTANTIATE(float)
ARTGRAPH_INSTANTIATE(double)
#undef ARTGRAPH_INSTANTIATE

template Params<double> Params<float>::cast<double>() const;
template Params<float> Params<double>::cast<float>() const;

}  // namespace artgraph::model
