#pragma once

#include <string>

#include "vfi/types.hpp"

namespace vfi {

// Middlebury .flo layout: float32 magic 202021.25, int32 width, int32 height,
// then row-major interleaved (u, v) float32 pairs, all little-endian.
FlowField load_flo(const std::string& path);
void save_flo(const std::string& path, const FlowField& flow);

}  // namespace vfi
