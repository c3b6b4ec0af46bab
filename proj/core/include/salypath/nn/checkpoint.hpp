#pragma once

#include <string>

#include "salypath/nn/model.hpp"

namespace salypath::nn {

// SPW1 checkpoint layout (all integers little-endian):
//   bytes 0..3  magic "SPW1"
//   uint32 width, height
//   uint32 n_widths, then that many uint32 channel widths
//   uint32 aux_depth, aux_width, n_fixations
//   float64 beta
//   uint32 group count; per group:
//     uint32 name length, name bytes,
//     uint32 value count, then that many float32 values.

void save_checkpoint(const SalyPathNet& net, const std::string& path);

/// Rebuild a network from a checkpoint. Parameter values are restored
/// from their float32 on-disk form.
SalyPathNet load_checkpoint(const std::string& path);

} // namespace salypath::nn
