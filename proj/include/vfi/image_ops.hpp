#pragma once

#include "vfi/types.hpp"

namespace vfi {

// Separable bilinear resize with half-pixel-center coordinates and
// clamp-to-edge sampling. Identity dimensions return the input unchanged.
Image resample_bilinear(const Image& src, int new_h, int new_w);

// 2x2 box downsample to ceil(h/2) x ceil(w/2); odd edges duplicate the last
// row/column.
Image downsample_half(const Image& src);

// Forward-difference x and y gradients per channel, interleaved as
// [dx(c0), dy(c0), dx(c1), dy(c1), ...]. The last row/column difference is 0
// (replicate boundary).
Image channel_gradient(const Image& src);

// Band-pass decomposition: levels[i] holds the detail lost between Gaussian
// levels i and i+1; the last entry is the coarsest Gaussian level itself.
struct Pyramid {
  std::vector<Image> levels;
};

// Throws std::invalid_argument when levels < 1 or min(h, w) < 2^(levels-1).
Pyramid build_laplacian_pyramid(const Image& src, int levels);

// Exact inverse of build_laplacian_pyramid up to float rounding.
Image reconstruct_laplacian(const Pyramid& pyr);

}  // namespace vfi
