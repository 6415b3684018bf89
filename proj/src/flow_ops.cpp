#include "vfi/flow_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "vfi/parallel.hpp"

namespace vfi {

namespace {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

inline float lerp(float a, float b, float t) { return a + t * (b - a); }

constexpr double kSplatSigma = 1.0;
constexpr double kMinSplatWeight = 1e-8;

// Fills zero-weight pixels from the nearest valid neighbour: first along each
// row, then along columns for rows with no valid pixel at all. Filled pixels
// keep visibility 0.
void fill_holes(FlowField& flow, const std::vector<std::uint8_t>& valid) {
  int h = flow.height, w = flow.width;
  std::vector<std::uint8_t> row_valid = valid;

  for (int y = 0; y < h; ++y) {
    std::size_t base = flow.idx(y, 0);
    int prev = -1;  // nearest valid index to the left
    // Forward sweep records the left neighbour; distances resolve after.
    std::vector<int> left(w, -1);
    for (int x = 0; x < w; ++x) {
      if (valid[base + x]) prev = x;
      left[x] = prev;
    }
    int next = -1;
    for (int x = w - 1; x >= 0; --x) {
      if (valid[base + x]) next = x;
      if (valid[base + x]) continue;
      int src = -1;
      if (left[x] >= 0 && next >= 0)
        src = (x - left[x] <= next - x) ? left[x] : next;  // tie goes left
      else if (left[x] >= 0)
        src = left[x];
      else if (next >= 0)
        src = next;
      if (src >= 0) {
        flow.u[base + x] = flow.u[base + src];
        flow.v[base + x] = flow.v[base + src];
        row_valid[base + x] = 1;
      }
    }
  }

  // Columns: only rows that were entirely empty still have holes.
  for (int x = 0; x < w; ++x) {
    int prev = -1;
    std::vector<int> up(h, -1);
    for (int y = 0; y < h; ++y) {
      if (row_valid[flow.idx(y, x)]) prev = y;
      up[y] = prev;
    }
    int next = -1;
    for (int y = h - 1; y >= 0; --y) {
      if (row_valid[flow.idx(y, x)]) next = y;
      if (row_valid[flow.idx(y, x)]) continue;
      int src = -1;
      if (up[y] >= 0 && next >= 0)
        src = (y - up[y] <= next - y) ? up[y] : next;  // tie goes up
      else if (up[y] >= 0)
        src = up[y];
      else if (next >= 0)
        src = next;
      if (src >= 0) {
        flow.u[flow.idx(y, x)] = flow.u[flow.idx(src, x)];
        flow.v[flow.idx(y, x)] = flow.v[flow.idx(src, x)];
      }
      // A fully empty field keeps its zero initialisation.
    }
  }
}

}  // namespace

ReversedFlow reverse_flow(const FlowField& forward) {
  if (forward.empty()) throw std::invalid_argument("reverse_flow: empty flow");
  int h = forward.height, w = forward.width;
  std::vector<double> acc_w(forward.u.size(), 0.0);
  std::vector<double> acc_u(forward.u.size(), 0.0);
  std::vector<double> acc_v(forward.u.size(), 0.0);

  // Serial splatting: targets of neighbouring sources overlap, so this stage
  // keeps a single fixed accumulation order for bitwise reproducibility.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::size_t i = forward.idx(y, x);
      double fu = forward.u[i], fv = forward.v[i];
      if (!std::isfinite(fu) || !std::isfinite(fv)) continue;
      double px = x + fu, py = y + fv;
      int x0 = static_cast<int>(std::floor(px));
      int y0 = static_cast<int>(std::floor(py));
      for (int dy = 0; dy <= 1; ++dy) {
        int ty = y0 + dy;
        if (ty < 0 || ty >= h) continue;
        for (int dx = 0; dx <= 1; ++dx) {
          int tx = x0 + dx;
          if (tx < 0 || tx >= w) continue;
          double bx = 1.0 - std::abs(px - tx);
          double by = 1.0 - std::abs(py - ty);
          if (bx <= 0.0 || by <= 0.0) continue;
          double d2 = (px - tx) * (px - tx) + (py - ty) * (py - ty);
          double wgt = bx * by * std::exp(-d2 / (2.0 * kSplatSigma * kSplatSigma));
          std::size_t ti = forward.idx(ty, tx);
          acc_w[ti] += wgt;
          acc_u[ti] += wgt * fu;
          acc_v[ti] += wgt * fv;
        }
      }
    }
  }

  ReversedFlow out{FlowField(h, w), Image(h, w, 1)};
  std::vector<std::uint8_t> valid(forward.u.size(), 0);
  for (std::size_t i = 0; i < acc_w.size(); ++i) {
    if (acc_w[i] > kMinSplatWeight) {
      out.flow.u[i] = static_cast<float>(-(acc_u[i] / acc_w[i]));
      out.flow.v[i] = static_cast<float>(-(acc_v[i] / acc_w[i]));
      out.visibility.data[i] = static_cast<float>(std::min(1.0, acc_w[i]));
      valid[i] = 1;
    }
  }
  fill_holes(out.flow, valid);
  return out;
}

Image backward_warp(const Image& src, const FlowField& flow) {
  if (src.empty()) throw std::invalid_argument("backward_warp: empty image");
  if (src.height != flow.height || src.width != flow.width)
    throw std::invalid_argument("backward_warp: image/flow shape mismatch");

  Image out(src.height, src.width, src.channels);
  parallel_chunks(src.height, [&](int y_begin, int y_end) {
    for (int y = y_begin; y < y_end; ++y) {
      for (int x = 0; x < src.width; ++x) {
        std::size_t i = flow.idx(y, x);
        double sx = x + static_cast<double>(flow.u[i]);
        double sy = y + static_cast<double>(flow.v[i]);
        int x0 = static_cast<int>(std::floor(sx));
        int y0 = static_cast<int>(std::floor(sy));
        float fx = static_cast<float>(sx - x0);
        float fy = static_cast<float>(sy - y0);
        int x0c = clampi(x0, 0, src.width - 1);
        int x1c = clampi(x0 + 1, 0, src.width - 1);
        int y0c = clampi(y0, 0, src.height - 1);
        int y1c = clampi(y0 + 1, 0, src.height - 1);
        for (int c = 0; c < src.channels; ++c) {
          float top = lerp(src.at(y0c, x0c, c), src.at(y0c, x1c, c), fx);
          float bot = lerp(src.at(y1c, x0c, c), src.at(y1c, x1c, c), fx);
          out.at(y, x, c) = lerp(top, bot, fy);
        }
      }
    }
  });
  return out;
}

FlowField refine_flow(const FlowField& flow) {
  if (flow.empty()) throw std::invalid_argument("refine_flow: empty flow");
  int h = flow.height, w = flow.width;
  FlowField out(h, w);
  parallel_chunks(h, [&](int y_begin, int y_end) {
    float win_u[9], win_v[9];
    for (int y = y_begin; y < y_end; ++y) {
      for (int x = 0; x < w; ++x) {
        int n = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          int yy = clampi(y + dy, 0, h - 1);
          for (int dx = -1; dx <= 1; ++dx) {
            int xx = clampi(x + dx, 0, w - 1);
            win_u[n] = flow.u[flow.idx(yy, xx)];
            win_v[n] = flow.v[flow.idx(yy, xx)];
            ++n;
          }
        }
        std::nth_element(win_u, win_u + 4, win_u + 9);
        std::nth_element(win_v, win_v + 4, win_v + 9);
        out.u[out.idx(y, x)] = win_u[4];
        out.v[out.idx(y, x)] = win_v[4];
      }
    }
  });
  return out;
}

}  // namespace vfi
