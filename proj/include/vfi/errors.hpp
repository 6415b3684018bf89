#pragma once

#include <stdexcept>
#include <string>

namespace vfi {

// Filesystem-level failure: missing file, short read, failed write.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// File exists but its contents do not match the expected layout.
struct format_error : std::runtime_error {
  explicit format_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace vfi
