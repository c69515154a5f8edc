#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "artgraph/model/classifier.hpp"

namespace artgraph::model {

inline constexpr std::uint16_t kCheckpointVersion = 1;

// Model state plus free-form metadata (the CLI stores the label vocabulary
// there so a checkpoint can be served on its own).
struct Checkpoint {
  TrainingState state;
  nlohmann::json metadata = nlohmann::json::object();
};

// AGCK, u16 version, config JSON, then named tensors: name, rank, u64 dims,
// little-endian f32 data. Adam moments are stored as "adam.m.*" / "adam.v.*".
std::string encode_checkpoint(const Checkpoint& checkpoint);
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// Throws kValidation naming the first architecture field that differs.
void check_resume_compatible(const ModelConfig& saved, const ModelConfig& requested);

}  // namespace artgraph::model
