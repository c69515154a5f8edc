#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "artgraph/graph/property_graph.hpp"

namespace artgraph::model {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

inline constexpr std::size_t kNumTasks = 3;
enum class Task { kArtist = 0, kStyle = 1, kGenre = 2 };
inline constexpr std::array<std::string_view, kNumTasks> kTaskNames{"artist", "style", "genre"};

enum class Mode { kMultimodal, kRegularizationOnly, kVisualOnly };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view s);

struct ModelConfig {
  std::size_t visual_dim = 2048;
  std::size_t context_dim = 128;
  std::size_t encoder_hidden = 512;
  std::array<std::size_t, kNumTasks> num_classes{1, 1, 1};  // artist, style, genre
  double gamma = 0.4;
  std::array<double, kNumTasks> lambda{0.5, 0.2, 0.2};
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t batch_size = 32;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  Mode mode = Mode::kMultimodal;

  void validate() const;
  bool has_encoder() const { return mode != Mode::kVisualOnly; }
  bool concatenates() const { return mode == Mode::kMultimodal; }
  std::size_t head_input_dim() const { return visual_dim + (concatenates() ? context_dim : 0); }
  // Fields that fix tensor shapes; a resumed run must agree on all of them.
  bool same_architecture(const ModelConfig& other) const;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);

struct LabeledInstance {
  NodeId artwork;
  std::vector<float> visual;
  std::array<std::uint32_t, kNumTasks> labels{};
  std::optional<std::vector<float>> context;  // u_j; training-graph artworks only
};

// Encoder W1 (hidden x visual), W2 (context x hidden); head i maps the head
// input to class logits. The encoder is empty in visual_only mode.
template <typename S>
struct Params {
  Mat<S> w1, w2;
  Vec<S> b1, b2;
  std::array<Mat<S>, kNumTasks> head_w;
  std::array<Vec<S>, kNumTasks> head_b;

  static Params zeros(const ModelConfig& config);
  static Params xavier(const ModelConfig& config, std::uint64_t seed);

  template <typename F>
  void for_each(F&& f) {
    visit(*this, f);
  }
  template <typename F>
  void for_each(F&& f) const {
    visit(*this, f);
  }

  std::size_t parameter_count() const;
  bool all_finite() const;
  template <typename T>
  Params<T> cast() const;
  bool operator==(const Params& other) const;

 private:
  template <typename Self, typename F>
  static void visit(Self& self, F& f) {
    static constexpr std::array<std::string_view, kNumTasks> kW{"artist.w", "style.w", "genre.w"};
    static constexpr std::array<std::string_view, kNumTasks> kB{"artist.b", "style.b", "genre.b"};
    f(std::string_view("encoder.w1"), self.w1);
    f(std::string_view("encoder.b1"), self.b1);
    f(std::string_view("encoder.w2"), self.w2);
    f(std::string_view("encoder.b2"), self.b2);
    for (std::size_t i = 0; i < kNumTasks; ++i) {
      f(kW[i], self.head_w[i]);
      f(kB[i], self.head_b[i]);
    }
  }
};

// Column-per-instance batch.
template <typename S>
struct Batch {
  Mat<S> visual;                   // visual_dim x B
  std::optional<Mat<S>> context;   // context_dim x B, when every instance has one
  std::array<std::vector<std::uint32_t>, kNumTasks> labels;

  std::size_t size() const { return static_cast<std::size_t>(visual.cols()); }
};

template <typename S>
Batch<S> make_batch(std::span<const LabeledInstance> instances, const ModelConfig& config);
template <typename S>
Batch<S> make_batch(std::span<const LabeledInstance> instances, std::span<const std::size_t> rows,
                    const ModelConfig& config);

template <typename S>
struct ForwardTrace {
  Mat<S> hidden;     // tanh(W1 x + b1)
  Mat<S> predicted;  // p_j, context_dim x B
  std::array<Mat<S>, kNumTasks> logits;
};

// p = tanh(W2 tanh(W1 x + b1) + b2) for a single visual vector.
template <typename S>
Vec<S> encoder_forward(const Vec<S>& visual, const Params<S>& params);

template <typename S>
ForwardTrace<S> forward(const Mat<S>& visual, const Params<S>& params, const ModelConfig& config);

// ||p - u||^2, no length normalisation.
double mse_loss(std::span<const double> p, std::span<const double> u);
// -log softmax(z)[cls], computed with the max subtracted.
double cross_entropy(std::span<const double> logits, std::size_t cls);

struct LossTerms {
  double classification = 0;  // sum_i lambda_i * batch-mean cross-entropy of task i
  double mse = 0;             // batch-mean ||p - u||^2; 0 in visual_only mode
  double total = 0;           // (1 - gamma) classification + gamma mse
};

template <typename S>
LossTerms loss_terms(const Batch<S>& batch, const ForwardTrace<S>& trace, const ModelConfig& config);

template <typename S>
S total_loss(const Batch<S>& batch, const ForwardTrace<S>& trace, const ModelConfig& config);

template <typename S>
Params<S> backward(const Batch<S>& batch, const ForwardTrace<S>& trace, const Params<S>& params,
                   const ModelConfig& config);

template <typename S>
struct AdamState {
  Params<S> m, v;
  std::uint64_t step = 0;

  static AdamState zeros(const ModelConfig& config);
  bool operator==(const AdamState& other) const = default;
};

template <typename S>
void adam_step(Params<S>& params, const Params<S>& grads, AdamState<S>& state, const ModelConfig& config);

using Prediction = std::array<std::uint32_t, kNumTasks>;

// Lowest index wins ties.
std::uint32_t argmax(std::span<const float> logits);

Prediction predict(std::span<const float> visual, const Params<float>& params, const ModelConfig& config);
std::array<std::vector<float>, kNumTasks> predict_proba(std::span<const float> visual,
                                                        const Params<float>& params,
                                                        const ModelConfig& config);
std::vector<Prediction> predict_all(std::span<const LabeledInstance> instances,
                                    const Params<float>& params, const ModelConfig& config);

// Per-task fraction of correct predictions; empty input is a validation error.
std::array<double, kNumTasks> accuracy(std::span<const LabeledInstance> instances,
                                       const Params<float>& params, const ModelConfig& config);

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double loss = 0;        // instance-weighted mean of batch total losses
  std::optional<std::array<double, kNumTasks>> validation_accuracy;
};

struct TrainingState {
  ModelConfig config;
  Params<float> params;
  AdamState<float> adam;
  std::size_t epochs_done = 0;
  std::vector<EpochLog> log;
};

TrainingState init_training(const ModelConfig& config);

// Runs the epochs from state.epochs_done up to state.config.epochs. Each
// epoch's shuffle depends only on (seed, epoch), so a resumed run matches an
// uninterrupted one bit for bit.
void train_epochs(TrainingState& state, std::span<const LabeledInstance> dataset,
                  std::span<const LabeledInstance> validation = {});

TrainingState train(std::span<const LabeledInstance> dataset, const ModelConfig& config,
                    std::span<const LabeledInstance> validation = {});

void to_json(nlohmann::json& j, const EpochLog& e);
void from_json(const nlohmann::json& j, EpochLog& e);

}  // namespace artgraph::model
