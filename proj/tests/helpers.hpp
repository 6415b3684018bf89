#pragma once

#include <cstring>
#include <filesystem>
#include <random>
#include <string>

#include "vfi/types.hpp"

namespace testutil {

// Self-deleting temp directory under the system tmp path.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           (tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline float max_abs_diff(const vfi::Image& a, const vfi::Image& b) {
  float m = 0.0f;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

inline float max_abs_diff(const vfi::FlowField& a, const vfi::FlowField& b) {
  float m = 0.0f;
  for (std::size_t i = 0; i < a.u.size(); ++i) {
    m = std::max(m, std::abs(a.u[i] - b.u[i]));
    m = std::max(m, std::abs(a.v[i] - b.v[i]));
  }
  return m;
}

// Bit-level equality (distinguishes -0.0f from +0.0f, NaNs compare equal).
inline bool bitwise_equal(const vfi::Image& a, const vfi::Image& b) {
  return a.same_shape(b) &&
         std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(float)) == 0;
}

inline bool bitwise_equal(const vfi::FlowField& a, const vfi::FlowField& b) {
  return a.same_shape(b) &&
         std::memcmp(a.u.data(), b.u.data(), a.u.size() * sizeof(float)) == 0 &&
         std::memcmp(a.v.data(), b.v.data(), a.v.size() * sizeof(float)) == 0;
}

inline vfi::Image random_image(int h, int w, int c, std::uint32_t seed,
                               float lo = 0.0f, float hi = 1.0f) {
  vfi::Image img(h, w, c);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> dist(lo, hi);
  for (float& v : img.data) v = dist(rng);
  return img;
}

inline vfi::FlowField random_flow(int h, int w, std::uint32_t seed, float mag) {
  vfi::FlowField f(h, w);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> dist(-mag, mag);
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    f.u[i] = dist(rng);
    f.v[i] = dist(rng);
  }
  return f;
}

}  // namespace testutil
