#include "vfi/flow_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vfi/errors.hpp"
#include "vfi/flo_io.hpp"
#include "vfi/image_ops.hpp"
#include "vfi/parallel.hpp"

namespace vfi {

namespace {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

// Patch SAD between a around (y, x) and b around (y + dy, x + dx), summed
// over channels, clamp-to-edge.
double patch_cost(const Frame& a, const Frame& b, int y, int x, int dy, int dx,
                  int half) {
  double cost = 0.0;
  for (int py = -half; py <= half; ++py) {
    int ay = clampi(y + py, 0, a.height - 1);
    int by = clampi(y + dy + py, 0, b.height - 1);
    for (int px = -half; px <= half; ++px) {
      int ax = clampi(x + px, 0, a.width - 1);
      int bx = clampi(x + dx + px, 0, b.width - 1);
      for (int c = 0; c < a.channels; ++c)
        cost += std::abs(static_cast<double>(a.at(ay, ax, c)) - b.at(by, bx, c));
    }
  }
  return cost;
}

// Preference order for equal costs: smaller total displacement, then smaller
// dx, then smaller dy.
bool displacement_less(int dx_a, int dy_a, int dx_b, int dy_b) {
  long norm_a = static_cast<long>(dx_a) * dx_a + static_cast<long>(dy_a) * dy_a;
  long norm_b = static_cast<long>(dx_b) * dx_b + static_cast<long>(dy_b) * dy_b;
  if (norm_a != norm_b) return norm_a < norm_b;
  if (dx_a != dx_b) return dx_a < dx_b;
  return dy_a < dy_b;
}

// Parabolic minimum refinement from costs at offsets -1, 0, +1.
double parabolic_offset(double c_minus, double c_zero, double c_plus) {
  double denom = c_minus - 2.0 * c_zero + c_plus;
  if (denom <= 1e-12) return 0.0;
  double off = 0.5 * (c_minus - c_plus) / denom;
  return std::clamp(off, -0.5, 0.5);
}

// Per-component 3x3 median with replicate borders. Run on each level's
// integer field before it seeds the next level, it stops an isolated bad
// match from dragging a whole finer-level block off course.
void median_displacements(std::vector<int>& dx, std::vector<int>& dy, int h, int w) {
  std::vector<int> out_x(dx.size()), out_y(dy.size());
  parallel_chunks(h, [&](int y_begin, int y_end) {
    int win[9];
    for (int y = y_begin; y < y_end; ++y)
      for (int x = 0; x < w; ++x) {
        for (int comp = 0; comp < 2; ++comp) {
          const std::vector<int>& src = comp == 0 ? dx : dy;
          int n = 0;
          for (int oy = -1; oy <= 1; ++oy)
            for (int ox = -1; ox <= 1; ++ox) {
              int sy = clampi(y + oy, 0, h - 1);
              int sx = clampi(x + ox, 0, w - 1);
              win[n++] = src[static_cast<std::size_t>(sy) * w + sx];
            }
          std::nth_element(win, win + 4, win + 9);
          (comp == 0 ? out_x : out_y)[static_cast<std::size_t>(y) * w + x] = win[4];
        }
      }
  });
  dx = std::move(out_x);
  dy = std::move(out_y);
}

}  // namespace

FlowField block_match_flow(const Frame& a, const Frame& b,
                           const BlockMatchParams& params) {
  if (!a.same_shape(b)) throw std::invalid_argument("block_match_flow: frame shape mismatch");
  if (a.empty()) throw std::invalid_argument("block_match_flow: empty frames");
  if (params.levels < 1 || params.radius < 1 || params.patch < 1 || params.patch % 2 == 0)
    throw std::invalid_argument("block_match_flow: bad parameters");

  std::vector<Frame> pyr_a{a}, pyr_b{b};
  for (int l = 1; l < params.levels; ++l) {
    if (pyr_a.back().height < 2 || pyr_a.back().width < 2) break;
    pyr_a.push_back(downsample_half(pyr_a.back()));
    pyr_b.push_back(downsample_half(pyr_b.back()));
  }
  int levels = static_cast<int>(pyr_a.size());
  const int half = params.patch / 2;
  const int r = params.radius;

  // Integer displacements accumulated coarse-to-fine.
  std::vector<int> disp_x, disp_y;
  int prev_h = 0, prev_w = 0;

  for (int level = levels - 1; level >= 0; --level) {
    const Frame& la = pyr_a[level];
    const Frame& lb = pyr_b[level];
    std::vector<int> out_x(static_cast<std::size_t>(la.height) * la.width, 0);
    std::vector<int> out_y(out_x.size(), 0);
    const bool finest = (level == 0);
    FlowField* subpix = nullptr;
    FlowField result;
    if (finest) {
      result = FlowField(la.height, la.width);
      subpix = &result;
    }

    const std::vector<int>& base_x = disp_x;
    const std::vector<int>& base_y = disp_y;
    const bool has_base = !base_x.empty();
    const int bh = prev_h, bw = prev_w;

    parallel_chunks(la.height, [&](int y_begin, int y_end) {
      for (int y = y_begin; y < y_end; ++y) {
        for (int x = 0; x < la.width; ++x) {
          int cx = 0, cy = 0;
          if (has_base) {
            int sy = std::min(y / 2, bh - 1);
            int sx = std::min(x / 2, bw - 1);
            cx = 2 * base_x[static_cast<std::size_t>(sy) * bw + sx];
            cy = 2 * base_y[static_cast<std::size_t>(sy) * bw + sx];
          }
          double best_cost = 0.0;
          int best_x = 0, best_y = 0;
          bool first = true;
          for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
              int tx = cx + dx, ty = cy + dy;
              double cost = patch_cost(la, lb, y, x, ty, tx, half);
              if (first || cost < best_cost ||
                  (cost == best_cost && displacement_less(tx, ty, best_x, best_y))) {
                best_cost = cost;
                best_x = tx;
                best_y = ty;
                first = false;
              }
            }
          }
          std::size_t i = static_cast<std::size_t>(y) * la.width + x;
          out_x[i] = best_x;
          out_y[i] = best_y;
          if (finest) {
            if (best_cost == 0.0) {
              // Perfect match: refinement could only move away from it.
              subpix->u[i] = static_cast<float>(best_x);
              subpix->v[i] = static_cast<float>(best_y);
            } else {
              double cxm = patch_cost(la, lb, y, x, best_y, best_x - 1, half);
              double cxp = patch_cost(la, lb, y, x, best_y, best_x + 1, half);
              double cym = patch_cost(la, lb, y, x, best_y - 1, best_x, half);
              double cyp = patch_cost(la, lb, y, x, best_y + 1, best_x, half);
              subpix->u[i] = static_cast<float>(best_x + parabolic_offset(cxm, best_cost, cxp));
              subpix->v[i] = static_cast<float>(best_y + parabolic_offset(cym, best_cost, cyp));
            }
          }
        }
      }
    });

    if (finest) return result;
    median_displacements(out_x, out_y, la.height, la.width);
    disp_x = std::move(out_x);
    disp_y = std::move(out_y);
    prev_h = la.height;
    prev_w = la.width;
  }
  // Unreachable: the loop always returns at level 0.
  throw std::logic_error("block_match_flow: no levels");
}

FlowField estimate_flow(const FlowSource& source, const Frame& a,
                        const Frame& b, int label_a, int label_b) {
  if (!a.same_shape(b)) throw std::invalid_argument("estimate_flow: frame shape mismatch");

  if (const auto* analytic = std::get_if<AnalyticFlow>(&source)) {
    if (!analytic->scene) throw std::invalid_argument("estimate_flow: analytic source has no scene");
    return analytic_flow(*analytic->scene, label_a, label_b, analytic->scale,
                         a.height, a.width);
  }
  if (const auto* pre = std::get_if<PrecomputedFlow>(&source)) {
    std::string path = pre->pattern;
    auto substitute = [&path](const std::string& token, int value) {
      auto pos = path.find(token);
      while (pos != std::string::npos) {
        path.replace(pos, token.size(), std::to_string(value));
        pos = path.find(token, pos);
      }
    };
    substitute("{from}", label_a);
    substitute("{to}", label_b);
    FlowField flow = load_flo(path);
    if (flow.height == a.height && flow.width == a.width && pre->scale == 1.0)
      return flow;
    if (pre->scale == 1.0)
      throw format_error("precomputed flow dimensions mismatch: " + path);
    // Reduced-scale branch: resample the stored field and scale the vectors.
    FlowField out(a.height, a.width);
    Image plane(flow.height, flow.width, 1);
    for (int comp = 0; comp < 2; ++comp) {
      plane.data = comp == 0 ? flow.u : flow.v;
      Image resized = resample_bilinear(plane, a.height, a.width);
      auto& dst = comp == 0 ? out.u : out.v;
      for (std::size_t i = 0; i < dst.size(); ++i)
        dst[i] = static_cast<float>(resized.data[i] * pre->scale);
    }
    return out;
  }
  const auto& bm = std::get<BlockMatchFlow>(source);
  return block_match_flow(a, b, bm.params);
}

FlowSource scaled_source(const FlowSource& source, double factor) {
  FlowSource out = source;
  if (auto* analytic = std::get_if<AnalyticFlow>(&out)) analytic->scale *= factor;
  if (auto* pre = std::get_if<PrecomputedFlow>(&out)) pre->scale *= factor;
  return out;
}

}  // namespace vfi
