#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace vfi {

// Row-major H x W x C float tensor with interleaved channels.
// Frames hold intensities in [0, 1]; feature maps hold unbounded activations.
struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;

  Image() = default;
  Image(int h, int w, int c, float fill = 0.0f)
      : height(h), width(w), channels(c),
        data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
                 static_cast<std::size_t>(c),
             fill) {}

  float& at(int y, int x, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  const float& at(int y, int x, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  bool same_shape(const Image& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
  bool empty() const { return data.empty(); }
};

using Frame = Image;
using FeatureMap = Image;

// Per-pixel displacement in pixel units, planar (u = horizontal, v = vertical).
struct FlowField {
  int height = 0;
  int width = 0;
  std::vector<float> u;
  std::vector<float> v;

  FlowField() = default;
  FlowField(int h, int w, float fill_u = 0.0f, float fill_v = 0.0f)
      : height(h), width(w),
        u(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill_u),
        v(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill_v) {}

  std::size_t idx(int y, int x) const {
    return static_cast<std::size_t>(y) * width + x;
  }

  bool same_shape(const FlowField& o) const {
    return height == o.height && width == o.width;
  }
  bool empty() const { return u.empty(); }
};

// Four consecutive frames; the pair being interpolated sits at [1] and [2].
// Labels are the integers substituted into file-based flow path patterns.
// Boundary windows of a sequence replicate the first/last frame and set the
// corresponding flag so flows involving the duplicate can be derived instead
// of estimated.
struct FrameQuad {
  std::array<Frame, 4> frames;
  std::array<int, 4> labels = {-1, 0, 1, 2};
  bool replicated_front = false;
  bool replicated_back = false;
};

}  // namespace vfi
