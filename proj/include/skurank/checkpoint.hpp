#pragma once

#include <cstdint>
#include <filesystem>

#include "skurank/network.hpp"

namespace skurank {

/// Trained parameters bound to the vocabulary they were trained with.
struct TrainedModel {
  ModelParams<double> params;
  std::uint64_t vocab_hash = 0;
};

/// Text header (format version, vocabulary hash, network config, tensor
/// names and shapes) followed by each tensor's column-major float64 payload
/// in declared order.
void save_checkpoint(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_checkpoint(const std::filesystem::path& path);

/// Throws unless `model` was trained against a vocabulary with `vocab_hash`.
void require_vocab_match(const TrainedModel& model, std::uint64_t vocab_hash);

}  // namespace skurank
