#pragma once

#include <map>
#include <string>

#include "mtp/nn/tensor.hpp"

namespace mtp::nn {

// Checkpoint = JSON manifest (names, shapes, seeds, hyperparameters)
// followed by a little-endian float64 blob in manifest order, one file.
struct CheckpointMeta {
  int version = 1;
  std::uint64_t master_seed = 0;
  std::map<std::string, std::string> hyper;
};

void save_checkpoint(const std::string& path, const ParamStore& params,
                     const CheckpointMeta& meta);

// Restores values and manifest; the returned store has zeroed gradients.
ParamStore load_checkpoint(const std::string& path, CheckpointMeta* meta);

}  // namespace mtp::nn
