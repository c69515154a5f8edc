#include "artgraph/model/checkpoint.hpp"

#include "artgraph/util/binary_io.hpp"
#include "artgraph/util/error.hpp"

namespace artgraph::model {

namespace {

constexpr std::string_view kMagic = "AGCK";

template <typename T>
std::vector<std::uint64_t> shape_of(const T& t) {
  if constexpr (T::ColsAtCompileTime == 1) {
    return {static_cast<std::uint64_t>(t.rows())};
  } else {
    return {static_cast<std::uint64_t>(t.rows()), static_cast<std::uint64_t>(t.cols())};
  }
}

std::string shape_string(const std::vector<std::uint64_t>& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "]";
}

void put_tensors(io::Writer& out, const Params<float>& params, std::string_view prefix) {
  params.for_each([&](std::string_view name, const auto& t) {
    out.put_string(std::string(prefix) + std::string(name));
    const auto shape = shape_of(t);
    out.put<std::uint32_t>(static_cast<std::uint32_t>(shape.size()));
    for (auto d : shape) out.put<std::uint64_t>(d);
    out.put_floats({t.data(), static_cast<std::size_t>(t.size())});
  });
}

void get_tensors(io::Reader& in, Params<float>& params, std::string_view prefix) {
  params.for_each([&](std::string_view name, auto& t) {
    const auto expected_name = std::string(prefix) + std::string(name);
    const auto got_name = in.get_string();
    if (got_name != expected_name)
      fail(ErrorKind::kFormat, "checkpoint tensor '" + got_name + "' where '" + expected_name + "' was expected");
    const auto rank = in.get<std::uint32_t>();
    if (rank > 2) fail(ErrorKind::kFormat, "checkpoint tensor '" + got_name + "' has rank " + std::to_string(rank));
    std::vector<std::uint64_t> shape(rank);
    for (auto& d : shape) d = in.get<std::uint64_t>();
    if (shape != shape_of(t))
      fail(ErrorKind::kShape, "checkpoint tensor '" + got_name + "' has shape " + shape_string(shape) +
                                  ", config implies " + shape_string(shape_of(t)));
    in.get_floats({t.data(), static_cast<std::size_t>(t.size())});
  });
}

}  // namespace

std::string encode_checkpoint(const Checkpoint& c) {
  nlohmann::json header = {{"config", c.state.config},
                           {"adam_step", c.state.adam.step},
                           {"epochs_done", c.state.epochs_done},
                           {"log", c.state.log},
                           {"metadata", c.metadata}};
  io::Writer out;
  out.put_bytes(kMagic);
  out.put<std::uint16_t>(kCheckpointVersion);
  out.put_string(header.dump());
  put_tensors(out, c.state.params, "");
  put_tensors(out, c.state.adam.m, "adam.m.");
  put_tensors(out, c.state.adam.v, "adam.v.");
  return out.bytes();
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  io::Reader in(bytes);
  if (in.remaining() < kMagic.size() || in.get_bytes(kMagic.size()) != kMagic)
    fail(ErrorKind::kFormat, "not a checkpoint file (bad magic)");
  const auto version = in.get<std::uint16_t>();
  if (version != kCheckpointVersion)
    fail(ErrorKind::kFormat, "unsupported checkpoint version " + std::to_string(version));
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(in.get_string());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kFormat, std::string("corrupt checkpoint header: ") + e.what());
  }
  Checkpoint c;
  try {
    c.state.config = header.at("config").get<ModelConfig>();
    c.state.adam.step = header.at("adam_step").get<std::uint64_t>();
    c.state.epochs_done = header.at("epochs_done").get<std::size_t>();
    c.state.log = header.at("log").get<std::vector<EpochLog>>();
    c.metadata = header.value("metadata", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kFormat, std::string("corrupt checkpoint header: ") + e.what());
  }
  c.state.config.validate();
  c.state.params = Params<float>::zeros(c.state.config);
  c.state.adam.m = Params<float>::zeros(c.state.config);
  c.state.adam.v = Params<float>::zeros(c.state.config);
  get_tensors(in, c.state.params, "");
  get_tensors(in, c.state.adam.m, "adam.m.");
  get_tensors(in, c.state.adam.v, "adam.v.");
  if (!in.done()) fail(ErrorKind::kFormat, "trailing bytes after checkpoint tensors");
  return c;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  io::write_file(path, encode_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::string& path) { return decode_checkpoint(io::read_file(path)); }

void check_resume_compatible(const ModelConfig& saved, const ModelConfig& requested) {
  auto mismatch = [](const std::string& field, auto a, auto b) {
    fail(ErrorKind::kValidation, "cannot resume: " + field + " is " + std::to_string(a) +
                                     " in the checkpoint but " + std::to_string(b) + " was requested");
  };
  if (saved.visual_dim != requested.visual_dim) mismatch("visual_dim", saved.visual_dim, requested.visual_dim);
  if (saved.context_dim != requested.context_dim) mismatch("context_dim", saved.context_dim, requested.context_dim);
  if (saved.encoder_hidden != requested.encoder_hidden)
    mismatch("encoder_hidden", saved.encoder_hidden, requested.encoder_hidden);
  for (std::size_t i = 0; i < kNumTasks; ++i)
    if (saved.num_classes[i] != requested.num_classes[i])
      mismatch(std::string(kTaskNames[i]) + " class count", saved.num_classes[i], requested.num_classes[i]);
  if (saved.mode != requested.mode)
    fail(ErrorKind::kValidation, "cannot resume: checkpoint mode is " + std::string(to_string(saved.mode)) +
                                     " but " + std::string(to_string(requested.mode)) + " was requested");
  if (saved.seed != requested.seed) mismatch("seed", saved.seed, requested.seed);
}

}  // namespace artgraph::model
