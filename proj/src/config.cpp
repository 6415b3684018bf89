#include "vfi/config.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <stdexcept>

#include "vfi/errors.hpp"
#include "vfi/synth_bench.hpp"

namespace vfi {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string get_or(const ConfigMap& m, const std::string& key,
                   const std::string& fallback) {
  auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

int get_int(const ConfigMap& m, const std::string& key, int fallback) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  try {
    std::size_t pos = 0;
    int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw format_error("config key " + key + ": not an integer: " + it->second);
  }
}

double get_double(const ConfigMap& m, const std::string& key, double fallback) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  try {
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw format_error("config key " + key + ": not a number: " + it->second);
  }
}

bool get_bool(const ConfigMap& m, const std::string& key, bool fallback) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw format_error("config key " + key + ": expected true or false, got " + v);
}

std::string resolve(const std::string& dir, const std::string& path) {
  if (dir.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(dir) / path).string();
}

}  // namespace

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file " + path);
  ConfigMap out;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3)
        throw format_error(path + ":" + std::to_string(lineno) + ": bad section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty())
        throw format_error(path + ":" + std::to_string(lineno) + ": empty section name");
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw format_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty())
      throw format_error(path + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw format_error(path + ":" + std::to_string(lineno) + ": key outside any [section]");
    out[section + "." + key] = value;
  }
  return out;
}

PipelineConfig build_pipeline_config(const ConfigMap& settings,
                                     const std::string& base_dir,
                                     const std::string& input_dir) {
  static const std::set<std::string> known = {
      "flow.source",   "flow.pattern",  "flow.levels",
      "flow.radius",   "flow.patch",    "motion.mode",
      "motion.steepness", "motion.center", "reversal.refine",
      "synthesis.residual_weights", "fusion.mode", "fusion.value",
      "fusion.net_weights",
  };
  for (const auto& [key, value] : settings) {
    (void)value;
    if (!known.count(key)) throw format_error("unknown config key: " + key);
  }

  PipelineConfig cfg;

  std::string source = get_or(settings, "flow.source", "blockmatch");
  if (source == "blockmatch") {
    BlockMatchParams p;
    p.levels = get_int(settings, "flow.levels", p.levels);
    p.radius = get_int(settings, "flow.radius", p.radius);
    p.patch = get_int(settings, "flow.patch", p.patch);
    cfg.flow = BlockMatchFlow{p};
  } else if (source == "precomputed") {
    auto it = settings.find("flow.pattern");
    if (it == settings.end())
      throw format_error("flow.source=precomputed requires flow.pattern");
    const std::string& pattern = it->second;
    if (pattern.find("{from}") == std::string::npos ||
        pattern.find("{to}") == std::string::npos)
      throw format_error("flow.pattern must contain {from} and {to}");
    cfg.flow = PrecomputedFlow{resolve(input_dir, pattern), 1.0};
  } else if (source == "analytic") {
    auto scene = std::make_shared<SpriteScene>(
        scene_from_manifest(resolve(input_dir, "manifest.txt")));
    cfg.flow = AnalyticFlow{std::move(scene), 1.0};
  } else {
    throw format_error("unknown flow.source: " + source);
  }

  std::string mode = get_or(settings, "motion.mode", "rectified");
  if (mode == "linear")
    cfg.motion = MotionMode::Linear;
  else if (mode == "quadratic")
    cfg.motion = MotionMode::Quadratic;
  else if (mode == "rectified")
    cfg.motion = MotionMode::Rectified;
  else
    throw format_error("unknown motion.mode: " + mode);
  cfg.rectify.steepness = get_double(settings, "motion.steepness", cfg.rectify.steepness);
  cfg.rectify.center = get_double(settings, "motion.center", cfg.rectify.center);
  if (!(cfg.rectify.steepness > 0.0))
    throw format_error("motion.steepness must be positive");

  cfg.refine = get_bool(settings, "reversal.refine", cfg.refine);

  if (auto it = settings.find("synthesis.residual_weights"); it != settings.end())
    cfg.residual = load_synth_weights(resolve(base_dir, it->second));

  std::string fusion = get_or(settings, "fusion.mode", "none");
  if (fusion == "none") {
    if (settings.count("fusion.value") || settings.count("fusion.net_weights"))
      throw format_error("fusion keys given but fusion.mode is none");
  } else if (fusion == "constant") {
    double v = get_double(settings, "fusion.value", 1.0);
    if (!(v >= 0.0 && v <= 1.0))
      throw format_error("fusion.value must lie in [0,1]");
    cfg.fusion = ConstantMask{v};
  } else if (fusion == "warp_error") {
    cfg.fusion = WarpErrorMask{};
  } else if (fusion == "net") {
    auto it = settings.find("fusion.net_weights");
    if (it == settings.end())
      throw format_error("fusion.mode=net requires fusion.net_weights");
    cfg.fusion = NetMask{load_net(resolve(base_dir, it->second))};
  } else {
    throw format_error("unknown fusion.mode: " + fusion);
  }

  return cfg;
}

}  // namespace vfi
