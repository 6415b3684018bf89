#include "vfi/synth_bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "vfi/errors.hpp"
#include "vfi/flo_io.hpp"
#include "vfi/png_io.hpp"

namespace vfi {

namespace fs = std::filesystem;

namespace {

constexpr double kCanvasMargin = 0.5;  // bilinear safety rim, canvas pixels
constexpr double kOverlapGap = 1.0;    // minimum sprite separation, pixels

inline float lerp(float a, float b, float t) { return a + t * (b - a); }

// Displacement relative to p0 along one axis.
double axis_offset(double v, double a, double j, double t) {
  return v * t + 0.5 * a * t * t + (1.0 / 6.0) * j * t * t * t;
}

// Extrema of the axis offset over t in [-1, 2], from the exact roots of the
// quadratic derivative v + a*t + j*t^2/2.
void axis_extrema(double v, double a, double j, double* lo, double* hi) {
  double candidates[4] = {-1.0, 2.0, 0.0, 0.0};
  int n = 2;
  if (std::abs(j) < 1e-12) {
    if (std::abs(a) > 1e-12) {
      double t = -v / a;
      if (t > -1.0 && t < 2.0) candidates[n++] = t;
    }
  } else {
    double disc = a * a - 2.0 * j * v;
    if (disc >= 0.0) {
      double r = std::sqrt(disc);
      for (double t : {(-a + r) / j, (-a - r) / j})
        if (t > -1.0 && t < 2.0) candidates[n++] = t;
    }
  }
  *lo = axis_offset(v, a, j, candidates[0]);
  *hi = *lo;
  for (int i = 1; i < n; ++i) {
    double val = axis_offset(v, a, j, candidates[i]);
    *lo = std::min(*lo, val);
    *hi = std::max(*hi, val);
  }
}

// Seeded sprite texture: uniform noise softened by two binomial passes so it
// keeps enough variance for matching but warps cleanly under resampling.
Image make_texture(int size, int channels, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> dist(0.05f, 0.95f);
  Image tex(size, size, channels);
  for (auto& v : tex.data) v = dist(rng);
  const float k[3] = {0.25f, 0.5f, 0.25f};
  for (int pass = 0; pass < 2; ++pass) {
    Image tmp = tex;
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x)
        for (int c = 0; c < channels; ++c) {
          float acc = 0.0f;
          for (int d = -1; d <= 1; ++d)
            acc += k[d + 1] * tmp.at(y, std::clamp(x + d, 0, size - 1), c);
          tex.at(y, x, c) = acc;
        }
    tmp = tex;
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x)
        for (int c = 0; c < channels; ++c) {
          float acc = 0.0f;
          for (int d = -1; d <= 1; ++d)
            acc += k[d + 1] * tmp.at(std::clamp(y + d, 0, size - 1), x, c);
          tex.at(y, x, c) = acc;
        }
  }
  return tex;
}

Frame make_background(const SpriteScene& scene, int h, int w) {
  Frame bg(h, w, scene.channels, scene.background_value);
  if (scene.textured_background) {
    std::mt19937 rng(scene.background_seed);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    for (auto& v : bg.data) v = dist(rng);
  }
  return bg;
}

struct SpriteBox {
  double x0, y0, x1, y1;  // inclusive texel extent in canvas coordinates
};

SpriteBox sprite_box(const Sprite& s, double t, double scale) {
  Vec2 p = sprite_position(s, t);
  double extent = (s.size - 1) * scale;
  return {p.x * scale, p.y * scale, p.x * scale + extent, p.y * scale + extent};
}

std::uint32_t mix_seed(std::uint32_t seed, int i) {
  return seed ^ (0x9E3779B9u * static_cast<std::uint32_t>(i + 1));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Vec2 sprite_position(const Sprite& s, double t) {
  return {s.p0.x + axis_offset(s.velocity.x, s.accel.x, s.jerk.x, t),
          s.p0.y + axis_offset(s.velocity.y, s.accel.y, s.jerk.y, t)};
}

void validate_scene(const SpriteScene& scene) {
  if (scene.height < 8 || scene.width < 8)
    throw std::invalid_argument("scene: canvas must be at least 8x8");
  if (scene.channels != 1 && scene.channels != 3)
    throw std::invalid_argument("scene: channels must be 1 or 3");
  for (const Sprite& s : scene.sprites) {
    if (s.size < 2) throw std::invalid_argument("scene: sprite size must be >= 2");
    double lo, hi;
    axis_extrema(s.velocity.x, s.accel.x, s.jerk.x, &lo, &hi);
    if (s.p0.x + lo < kCanvasMargin ||
        s.p0.x + hi + (s.size - 1) > scene.width - 1 - kCanvasMargin)
      throw std::invalid_argument("scene: sprite leaves canvas horizontally");
    axis_extrema(s.velocity.y, s.accel.y, s.jerk.y, &lo, &hi);
    if (s.p0.y + lo < kCanvasMargin ||
        s.p0.y + hi + (s.size - 1) > scene.height - 1 - kCanvasMargin)
      throw std::invalid_argument("scene: sprite leaves canvas vertically");
  }
  for (std::size_t i = 0; i < scene.sprites.size(); ++i) {
    for (std::size_t j = i + 1; j < scene.sprites.size(); ++j) {
      for (double t : kSampledTimes) {
        SpriteBox a = sprite_box(scene.sprites[i], t, 1.0);
        SpriteBox b = sprite_box(scene.sprites[j], t, 1.0);
        bool apart = a.x1 + kOverlapGap < b.x0 || b.x1 + kOverlapGap < a.x0 ||
                     a.y1 + kOverlapGap < b.y0 || b.y1 + kOverlapGap < a.y0;
        if (!apart) throw std::invalid_argument("scene: sprites overlap at a sampled time");
      }
    }
  }
}

Frame render_at(const SpriteScene& scene, double t, double scale) {
  validate_scene(scene);
  int h = static_cast<int>(std::floor(scene.height * scale));
  int w = static_cast<int>(std::floor(scene.width * scale));
  if (h < 1 || w < 1) throw std::invalid_argument("render_at: scale too small");
  Frame out = make_background(scene, h, w);

  for (const Sprite& s : scene.sprites) {
    Image tex = make_texture(s.size, scene.channels, s.texture_seed);
    SpriteBox box = sprite_box(s, t, scale);
    int yb = std::max(0, static_cast<int>(std::ceil(box.y0)));
    int ye = std::min(h - 1, static_cast<int>(std::floor(box.y1)));
    int xb = std::max(0, static_cast<int>(std::ceil(box.x0)));
    int xe = std::min(w - 1, static_cast<int>(std::floor(box.x1)));
    for (int y = yb; y <= ye; ++y) {
      double ly = (y - box.y0) / scale;  // texel coordinate
      int ty = std::clamp(static_cast<int>(std::floor(ly)), 0, s.size - 1);
      int ty1 = std::min(ty + 1, s.size - 1);
      float fy = static_cast<float>(ly - ty);
      for (int x = xb; x <= xe; ++x) {
        double lx = (x - box.x0) / scale;
        int tx = std::clamp(static_cast<int>(std::floor(lx)), 0, s.size - 1);
        int tx1 = std::min(tx + 1, s.size - 1);
        float fx = static_cast<float>(lx - tx);
        for (int c = 0; c < scene.channels; ++c) {
          float top = lerp(tex.at(ty, tx, c), tex.at(ty, tx1, c), fx);
          float bot = lerp(tex.at(ty1, tx, c), tex.at(ty1, tx1, c), fx);
          out.at(y, x, c) = lerp(top, bot, fy);
        }
      }
    }
  }
  return out;
}

FlowField analytic_flow(const SpriteScene& scene, double t0, double t1,
                        double scale, int out_h, int out_w) {
  int h = out_h > 0 ? out_h : static_cast<int>(std::floor(scene.height * scale));
  int w = out_w > 0 ? out_w : static_cast<int>(std::floor(scene.width * scale));
  FlowField flow(h, w);
  for (const Sprite& s : scene.sprites) {
    Vec2 a = sprite_position(s, t0);
    Vec2 b = sprite_position(s, t1);
    float du = static_cast<float>((b.x - a.x) * scale);
    float dv = static_cast<float>((b.y - a.y) * scale);
    SpriteBox box = sprite_box(s, t0, scale);
    int yb = std::max(0, static_cast<int>(std::ceil(box.y0)));
    int ye = std::min(h - 1, static_cast<int>(std::floor(box.y1)));
    int xb = std::max(0, static_cast<int>(std::ceil(box.x0)));
    int xe = std::min(w - 1, static_cast<int>(std::floor(box.x1)));
    for (int y = yb; y <= ye; ++y)
      for (int x = xb; x <= xe; ++x) {
        flow.u[flow.idx(y, x)] = du;
        flow.v[flow.idx(y, x)] = dv;
      }
  }
  return flow;
}

Image sprite_mask(const SpriteScene& scene, double t, int shrink,
                  int sprite_index, double scale) {
  int h = static_cast<int>(std::floor(scene.height * scale));
  int w = static_cast<int>(std::floor(scene.width * scale));
  Image mask(h, w, 1, 0.0f);
  for (std::size_t i = 0; i < scene.sprites.size(); ++i) {
    if (sprite_index >= 0 && static_cast<std::size_t>(sprite_index) != i) continue;
    SpriteBox box = sprite_box(scene.sprites[i], t, scale);
    int yb = std::max(0, static_cast<int>(std::ceil(box.y0 + shrink)));
    int ye = std::min(h - 1, static_cast<int>(std::floor(box.y1 - shrink)));
    int xb = std::max(0, static_cast<int>(std::ceil(box.x0 + shrink)));
    int xe = std::min(w - 1, static_cast<int>(std::floor(box.x1 - shrink)));
    for (int y = yb; y <= ye; ++y)
      for (int x = xb; x <= xe; ++x) mask.at(y, x, 0) = 1.0f;
  }
  return mask;
}

SpriteScene make_scene(std::uint32_t seed, MotionClass cls) {
  std::mt19937 rng(seed);
  SpriteScene scene;
  scene.height = 96;
  scene.width = 96;
  scene.channels = 3;
  scene.textured_background = true;
  scene.background_seed = rng();

  auto signed_range = [&rng](double lo, double hi) {
    std::uniform_real_distribution<double> mag(lo, hi);
    double m = mag(rng);
    return (rng() & 1u) ? m : -m;
  };

  std::uniform_int_distribution<int> size_dist(13, 19);
  for (int i = 0; i < 2; ++i) {
    Sprite s;
    s.size = size_dist(rng);
    s.texture_seed = rng();
    for (int attempt = 0; attempt < 4000; ++attempt) {
      switch (cls) {
        case MotionClass::Linear:
          s.velocity = {signed_range(0.5, 3.0), signed_range(0.5, 3.0)};
          s.accel = {0.0, 0.0};
          s.jerk = {0.0, 0.0};
          break;
        case MotionClass::Quadratic:
          // Strong curvature: a constant-velocity extrapolation misses by
          // |a|/8 px at the midpoint, enough to decorrelate the texture.
          s.velocity = {signed_range(0.3, 2.0), signed_range(0.3, 2.0)};
          s.accel = {signed_range(8.0, 12.0), signed_range(8.0, 12.0)};
          s.jerk = {0.0, 0.0};
          break;
        case MotionClass::Jerk: {
          // Acceleration and jerk share a sign per axis so the pairwise
          // acceleration estimates stay directionally consistent while the
          // jerk drives their disagreement |j|/3 above 2.
          s.velocity = {signed_range(0.3, 1.5), signed_range(0.3, 1.5)};
          std::uniform_real_distribution<double> acc_mag(2.0, 3.5);
          std::uniform_real_distribution<double> jerk_mag(7.0, 9.0);
          double sx = (rng() & 1u) ? 1.0 : -1.0;
          double sy = (rng() & 1u) ? 1.0 : -1.0;
          s.accel = {sx * acc_mag(rng), sy * acc_mag(rng)};
          s.jerk = {sx * jerk_mag(rng), sy * jerk_mag(rng)};
          break;
        }
      }
      // Place p0 inside the exactly feasible interval for this motion.
      double lo_x, hi_x, lo_y, hi_y;
      axis_extrema(s.velocity.x, s.accel.x, s.jerk.x, &lo_x, &hi_x);
      axis_extrema(s.velocity.y, s.accel.y, s.jerk.y, &lo_y, &hi_y);
      double px_lo = kCanvasMargin - lo_x;
      double px_hi = scene.width - 1 - kCanvasMargin - (s.size - 1) - hi_x;
      double py_lo = kCanvasMargin - lo_y;
      double py_hi = scene.height - 1 - kCanvasMargin - (s.size - 1) - hi_y;
      if (px_hi < px_lo || py_hi < py_lo) continue;  // motion span too wide
      std::uniform_real_distribution<double> ux(px_lo, px_hi);
      std::uniform_real_distribution<double> uy(py_lo, py_hi);
      s.p0 = {ux(rng), uy(rng)};

      bool clear = true;
      for (const Sprite& other : scene.sprites) {
        for (double t : kSampledTimes) {
          SpriteBox a = sprite_box(s, t, 1.0);
          SpriteBox b = sprite_box(other, t, 1.0);
          bool apart = a.x1 + kOverlapGap < b.x0 || b.x1 + kOverlapGap < a.x0 ||
                       a.y1 + kOverlapGap < b.y0 || b.y1 + kOverlapGap < a.y0;
          if (!apart) {
            clear = false;
            break;
          }
        }
        if (!clear) break;
      }
      if (clear) break;
    }
    scene.sprites.push_back(s);
  }
  validate_scene(scene);
  return scene;
}

void gen_dataset(const std::string& dir, std::uint32_t seed, MotionClass cls,
                 int count) {
  if (count < 1) throw std::invalid_argument("gen_dataset: count must be >= 1");
  fs::create_directories(dir);
  const int labels[4] = {-1, 0, 1, 2};
  const double midpoints[3] = {0.25, 0.5, 0.75};

  for (int i = 0; i < count; ++i) {
    SpriteScene scene = make_scene(mix_seed(seed, i), cls);
    char name[32];
    std::snprintf(name, sizeof(name), "seq_%04d", i);
    fs::path sub = fs::path(dir) / name;
    fs::create_directories(sub);

    char fname[64];
    for (int label : labels) {
      std::snprintf(fname, sizeof(fname), "frame_t%d.png", label);
      write_png((sub / fname).string(), render_at(scene, label));
    }
    for (double t : midpoints) {
      std::snprintf(fname, sizeof(fname), "gt_t%g.png", t);
      write_png((sub / fname).string(), render_at(scene, t));
    }
    for (int a : labels) {
      for (int b : labels) {
        if (a == b) continue;
        std::snprintf(fname, sizeof(fname), "flow_%d_%d.flo", a, b);
        save_flo((sub / fname).string(), analytic_flow(scene, a, b));
      }
    }
    write_manifest((sub / "manifest.txt").string(), scene, cls, seed);
  }
}

void write_manifest(const std::string& path, const SpriteScene& scene,
                    MotionClass cls, std::uint32_t seed) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out << "class = " << motion_class_name(cls) << "\n";
  out << "seed = " << seed << "\n";
  out << "height = " << scene.height << "\n";
  out << "width = " << scene.width << "\n";
  out << "channels = " << scene.channels << "\n";
  out << "background = " << (scene.textured_background ? "noise" : "constant") << "\n";
  out << "background_value = " << format_double(scene.background_value) << "\n";
  out << "background_seed = " << scene.background_seed << "\n";
  out << "sprites = " << scene.sprites.size() << "\n";
  for (std::size_t i = 0; i < scene.sprites.size(); ++i) {
    const Sprite& s = scene.sprites[i];
    out << "sprite." << i << ".p0 = " << format_double(s.p0.x) << " " << format_double(s.p0.y) << "\n";
    out << "sprite." << i << ".velocity = " << format_double(s.velocity.x) << " " << format_double(s.velocity.y) << "\n";
    out << "sprite." << i << ".accel = " << format_double(s.accel.x) << " " << format_double(s.accel.y) << "\n";
    out << "sprite." << i << ".jerk = " << format_double(s.jerk.x) << " " << format_double(s.jerk.y) << "\n";
    out << "sprite." << i << ".size = " << s.size << "\n";
    out << "sprite." << i << ".texture_seed = " << s.texture_seed << "\n";
  }
  out << "frame_labels = -1 0 1 2\n";
  if (!out) throw io_error("failed writing " + path);
}

SpriteScene scene_from_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t\r");
      std::size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto get = [&kv, &path](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw format_error("manifest missing key '" + key + "' in " + path);
    return it->second;
  };
  auto get_vec2 = [&get](const std::string& key) {
    std::istringstream ss(get(key));
    Vec2 v;
    if (!(ss >> v.x >> v.y)) throw format_error("manifest: bad vector for " + key);
    return v;
  };

  SpriteScene scene;
  scene.height = std::stoi(get("height"));
  scene.width = std::stoi(get("width"));
  scene.channels = std::stoi(get("channels"));
  scene.textured_background = get("background") == "noise";
  scene.background_value = std::stof(get("background_value"));
  scene.background_seed = static_cast<std::uint32_t>(std::stoul(get("background_seed")));
  int n = std::stoi(get("sprites"));
  for (int i = 0; i < n; ++i) {
    std::string prefix = "sprite." + std::to_string(i) + ".";
    Sprite s;
    s.p0 = get_vec2(prefix + "p0");
    s.velocity = get_vec2(prefix + "velocity");
    s.accel = get_vec2(prefix + "accel");
    s.jerk = get_vec2(prefix + "jerk");
    s.size = std::stoi(get(prefix + "size"));
    s.texture_seed = static_cast<std::uint32_t>(std::stoul(get(prefix + "texture_seed")));
    scene.sprites.push_back(s);
  }
  validate_scene(scene);
  return scene;
}

const char* motion_class_name(MotionClass cls) {
  switch (cls) {
    case MotionClass::Linear: return "linear";
    case MotionClass::Quadratic: return "quadratic";
    case MotionClass::Jerk: return "jerk";
  }
  return "unknown";
}

MotionClass motion_class_from_name(const std::string& name) {
  if (name == "linear") return MotionClass::Linear;
  if (name == "quadratic") return MotionClass::Quadratic;
  if (name == "jerk") return MotionClass::Jerk;
  throw std::invalid_argument("unknown motion class: " + name);
}

}  // namespace vfi
