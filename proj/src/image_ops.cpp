#include "vfi/image_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vfi/parallel.hpp"

namespace vfi {

namespace {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

// a + t*(b - a): exact for t = 0 and for a == b, and stays inside [a, b].
inline float lerp(float a, float b, float t) { return a + t * (b - a); }

}  // namespace

Image resample_bilinear(const Image& src, int new_h, int new_w) {
  if (src.empty() || new_h <= 0 || new_w <= 0)
    throw std::invalid_argument("resample_bilinear: empty input or non-positive size");
  if (new_h == src.height && new_w == src.width) return src;

  Image out(new_h, new_w, src.channels);
  const double sy_step = static_cast<double>(src.height) / new_h;
  const double sx_step = static_cast<double>(src.width) / new_w;
  const int c = src.channels;

  parallel_chunks(new_h, [&](int y_begin, int y_end) {
    for (int y = y_begin; y < y_end; ++y) {
      double sy = (y + 0.5) * sy_step - 0.5;  // half-pixel centers
      int y0 = static_cast<int>(std::floor(sy));
      float fy = static_cast<float>(sy - y0);
      int y0c = clampi(y0, 0, src.height - 1);
      int y1c = clampi(y0 + 1, 0, src.height - 1);
      for (int x = 0; x < new_w; ++x) {
        double sx = (x + 0.5) * sx_step - 0.5;
        int x0 = static_cast<int>(std::floor(sx));
        float fx = static_cast<float>(sx - x0);
        int x0c = clampi(x0, 0, src.width - 1);
        int x1c = clampi(x0 + 1, 0, src.width - 1);
        for (int ch = 0; ch < c; ++ch) {
          float top = lerp(src.at(y0c, x0c, ch), src.at(y0c, x1c, ch), fx);
          float bot = lerp(src.at(y1c, x0c, ch), src.at(y1c, x1c, ch), fx);
          out.at(y, x, ch) = lerp(top, bot, fy);
        }
      }
    }
  });
  return out;
}

Image downsample_half(const Image& src) {
  if (src.empty()) throw std::invalid_argument("downsample_half: empty input");
  int oh = (src.height + 1) / 2;
  int ow = (src.width + 1) / 2;
  Image out(oh, ow, src.channels);
  parallel_chunks(oh, [&](int y_begin, int y_end) {
    for (int y = y_begin; y < y_end; ++y) {
      int y0 = 2 * y;
      int y1 = std::min(2 * y + 1, src.height - 1);
      for (int x = 0; x < ow; ++x) {
        int x0 = 2 * x;
        int x1 = std::min(2 * x + 1, src.width - 1);
        for (int ch = 0; ch < src.channels; ++ch) {
          out.at(y, x, ch) = 0.25f * (src.at(y0, x0, ch) + src.at(y0, x1, ch) +
                                      src.at(y1, x0, ch) + src.at(y1, x1, ch));
        }
      }
    }
  });
  return out;
}

Image channel_gradient(const Image& src) {
  if (src.empty()) throw std::invalid_argument("channel_gradient: empty input");
  Image out(src.height, src.width, 2 * src.channels);
  parallel_chunks(src.height, [&](int y_begin, int y_end) {
    for (int y = y_begin; y < y_end; ++y) {
      int yn = std::min(y + 1, src.height - 1);
      for (int x = 0; x < src.width; ++x) {
        int xn = std::min(x + 1, src.width - 1);
        for (int ch = 0; ch < src.channels; ++ch) {
          float v = src.at(y, x, ch);
          out.at(y, x, 2 * ch) = src.at(y, xn, ch) - v;
          out.at(y, x, 2 * ch + 1) = src.at(yn, x, ch) - v;
        }
      }
    }
  });
  return out;
}

Pyramid build_laplacian_pyramid(const Image& src, int levels) {
  if (levels < 1) throw std::invalid_argument("pyramid: levels must be >= 1");
  if (src.empty()) throw std::invalid_argument("pyramid: empty input");
  int min_side = 1 << (levels - 1);
  if (src.height < min_side || src.width < min_side)
    throw std::invalid_argument("pyramid: image too small for level count");

  std::vector<Image> gauss;
  gauss.reserve(levels);
  gauss.push_back(src);
  for (int i = 1; i < levels; ++i) gauss.push_back(downsample_half(gauss.back()));

  Pyramid pyr;
  pyr.levels.reserve(levels);
  for (int i = 0; i + 1 < levels; ++i) {
    Image up = resample_bilinear(gauss[i + 1], gauss[i].height, gauss[i].width);
    Image detail(gauss[i].height, gauss[i].width, gauss[i].channels);
    for (std::size_t k = 0; k < detail.data.size(); ++k)
      detail.data[k] = gauss[i].data[k] - up.data[k];
    pyr.levels.push_back(std::move(detail));
  }
  pyr.levels.push_back(gauss.back());
  return pyr;
}

Image reconstruct_laplacian(const Pyramid& pyr) {
  if (pyr.levels.empty()) throw std::invalid_argument("pyramid: no levels");
  Image acc = pyr.levels.back();
  for (int i = static_cast<int>(pyr.levels.size()) - 2; i >= 0; --i) {
    const Image& detail = pyr.levels[i];
    Image up = resample_bilinear(acc, detail.height, detail.width);
    for (std::size_t k = 0; k < up.data.size(); ++k) up.data[k] += detail.data[k];
    acc = std::move(up);
  }
  return acc;
}

}  // namespace vfi
