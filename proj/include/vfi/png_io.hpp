#pragma once

#include <string>

#include "vfi/types.hpp"

namespace vfi {

// Reads an 8-bit PNG into a 1- or 3-channel frame; samples map to [0, 1] by
// dividing by 255 (no gamma handling). Palette and 16-bit files are folded to
// 8-bit RGB; alpha is dropped. Throws io_error / format_error.
Frame read_png(const std::string& path);

// Writes a 1- or 3-channel frame as an 8-bit PNG, rounding clamp(v, 0, 1)*255.
void write_png(const std::string& path, const Frame& frame);

}  // namespace vfi
