// Command-line front end: frame interpolation, dataset synthesis, metric
// evaluation and file-level flow tooling.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vfi/config.hpp"
#include "vfi/flo_io.hpp"
#include "vfi/flow_ops.hpp"
#include "vfi/metrics.hpp"
#include "vfi/parallel.hpp"
#include "vfi/pipeline.hpp"
#include "vfi/png_io.hpp"
#include "vfi/synth_bench.hpp"

namespace fs = std::filesystem;

namespace {

// PNG files in dir, lexicographically sorted; optionally only names with the
// given prefix (interpolation inputs are "frame*" so ground-truth images or
// other assets sitting next to them are ignored).
std::vector<std::string> list_pngs(const std::string& dir, const std::string& prefix) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (entry.path().extension() != ".png") continue;
    if (!prefix.empty() && name.rfind(prefix, 0) != 0) continue;
    names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::string frame_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06d.png", index);
  return buf;
}

struct InterpolateArgs {
  std::string in_dir, out_dir, config_path;
  int factor = 2;
};

int run_interpolate(const InterpolateArgs& args) {
  std::vector<std::string> names = list_pngs(args.in_dir, "frame");
  if (names.size() < 2)
    throw std::runtime_error("need at least two frame*.png files in " + args.in_dir);

  vfi::PipelineConfig cfg;
  if (!args.config_path.empty()) {
    vfi::ConfigMap settings = vfi::parse_config_file(args.config_path);
    std::string base_dir = fs::path(args.config_path).parent_path().string();
    cfg = vfi::build_pipeline_config(settings, base_dir, args.in_dir);
  }
  cfg.t_values.clear();
  for (int j = 1; j < args.factor; ++j)
    cfg.t_values.push_back(static_cast<double>(j) / args.factor);

  // Synthetic datasets label their frames -1..2; plain sequences count from 0.
  int base_label = fs::exists(fs::path(args.in_dir) / "manifest.txt") ? -1 : 0;

  std::vector<vfi::Frame> frames;
  frames.reserve(names.size());
  for (const std::string& name : names)
    frames.push_back(vfi::read_png((fs::path(args.in_dir) / name).string()));

  fs::create_directories(args.out_dir);
  int written = 0;
  auto emit = [&](int index, const vfi::Frame& frame) {
    vfi::write_png((fs::path(args.out_dir) / frame_name(index)).string(), frame);
    ++written;
  };

  int n = static_cast<int>(frames.size());
  for (int k = 0; k < n; ++k) emit(k * args.factor, frames[k]);
  for (int k = 0; k + 1 < n; ++k) {
    vfi::FrameQuad quad;
    quad.replicated_front = k == 0;
    quad.replicated_back = k + 2 >= n;
    quad.frames = {frames[quad.replicated_front ? 0 : k - 1], frames[k],
                   frames[k + 1], frames[quad.replicated_back ? n - 1 : k + 2]};
    quad.labels = {base_label + k - 1, base_label + k, base_label + k + 1,
                   base_label + k + 2};
    std::vector<vfi::Frame> out = vfi::interpolate_multi(quad, cfg);
    for (int j = 1; j < args.factor; ++j) emit(k * args.factor + j, out[j - 1]);
  }
  std::cout << "wrote " << written << " frames to " << args.out_dir << "\n";
  return 0;
}

struct EvalArgs {
  std::string pred_dir, gt_dir, report_path;
};

int run_eval(const EvalArgs& args) {
  std::vector<std::string> pred = list_pngs(args.pred_dir, "");
  std::vector<std::string> gt = list_pngs(args.gt_dir, "");
  if (pred.empty()) throw std::runtime_error("no .png files in " + args.pred_dir);
  if (pred.size() != gt.size())
    throw std::runtime_error("directories hold different file counts (" +
                             std::to_string(pred.size()) + " vs " +
                             std::to_string(gt.size()) + ")");
  std::vector<vfi::MetricReport> reports;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    vfi::Frame p = vfi::read_png((fs::path(args.pred_dir) / pred[i]).string());
    vfi::Frame g = vfi::read_png((fs::path(args.gt_dir) / gt[i]).string());
    reports.push_back(vfi::compute_report(p, g));
  }
  vfi::MetricReport agg = vfi::aggregate_reports(reports);
  std::cout << vfi::format_report_table(pred, reports, agg);
  if (!args.report_path.empty())
    vfi::write_keyvalue_report(args.report_path, pred, reports, agg);
  return 0;
}

struct SynthArgs {
  std::string out_dir;
  std::string cls = "quadratic";
  int count = 1;
  unsigned seed = 1;
};

int run_synth(const SynthArgs& args) {
  vfi::gen_dataset(args.out_dir, args.seed,
                   vfi::motion_class_from_name(args.cls), args.count);
  std::cout << "wrote " << args.count << " sequences to " << args.out_dir << "\n";
  return 0;
}

struct FlowEstimateArgs {
  std::string frame_a, frame_b, out_flo;
  vfi::BlockMatchParams params;
};

int run_flow_estimate(const FlowEstimateArgs& args) {
  vfi::Frame a = vfi::read_png(args.frame_a);
  vfi::Frame b = vfi::read_png(args.frame_b);
  vfi::save_flo(args.out_flo, vfi::block_match_flow(a, b, args.params));
  return 0;
}

struct FlowReverseArgs {
  std::string in_flo, out_flo, vis_path;
  bool refine = false;
};

int run_flow_reverse(const FlowReverseArgs& args) {
  vfi::ReversedFlow r = vfi::reverse_flow(vfi::load_flo(args.in_flo));
  if (args.refine) r.flow = vfi::refine_flow(r.flow);
  vfi::save_flo(args.out_flo, r.flow);
  if (!args.vis_path.empty()) vfi::write_png(args.vis_path, r.visibility);
  return 0;
}

struct FlowPredictArgs {
  std::string prev, next, far, out_flo;
  std::string mode = "rectified";
  double t = 0.5;
  vfi::RectifyParams rectify;
};

int run_flow_predict(const FlowPredictArgs& args) {
  auto need = [&](const std::string& path, const char* name) {
    if (path.empty())
      throw std::runtime_error(std::string("mode ") + args.mode + " needs --" + name);
    return vfi::load_flo(path);
  };
  vfi::FlowField out(0, 0);
  if (args.mode == "linear") {
    out = vfi::linear_flow(need(args.next, "next"), args.t);
  } else if (args.mode == "quadratic") {
    vfi::FlowField next = need(args.next, "next");
    out = vfi::flow_at(vfi::quadratic_fit(next, need(args.prev, "prev")), args.t);
  } else {
    vfi::FlowField prev = need(args.prev, "prev");
    vfi::FlowField next = need(args.next, "next");
    out = vfi::flow_at(
        vfi::rectified_fit(prev, next, need(args.far, "far"), args.rectify), args.t);
  }
  vfi::save_flo(args.out_flo, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic video frame interpolation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = hardware default)")
      ->check(CLI::NonNegativeNumber);

  InterpolateArgs interp;
  CLI::App* c_interp = app.add_subcommand(
      "interpolate", "Interpolate between the frame*.png files of a directory");
  c_interp->add_option("in_dir", interp.in_dir, "Input frame directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  c_interp->add_option("out_dir", interp.out_dir, "Output directory (created)")
      ->required();
  c_interp->add_option("--factor", interp.factor, "Frame-rate multiplier")
      ->check(CLI::IsMember({2, 4}));
  c_interp->add_option("--config", interp.config_path, "Pipeline config file")
      ->check(CLI::ExistingFile);

  EvalArgs eval;
  CLI::App* c_eval =
      app.add_subcommand("eval", "Compare the .png files of two directories");
  c_eval->add_option("pred_dir", eval.pred_dir, "Predictions")
      ->required()
      ->check(CLI::ExistingDirectory);
  c_eval->add_option("gt_dir", eval.gt_dir, "Ground truth")
      ->required()
      ->check(CLI::ExistingDirectory);
  c_eval->add_option("--report", eval.report_path, "Write key=value report here");

  SynthArgs synth;
  CLI::App* c_synth =
      app.add_subcommand("synth", "Generate synthetic benchmark sequences");
  c_synth->add_option("out_dir", synth.out_dir, "Dataset directory (created)")
      ->required();
  c_synth->add_option("--class", synth.cls, "Motion class")
      ->check(CLI::IsMember({"linear", "quadratic", "jerk"}));
  c_synth->add_option("--count", synth.count, "Number of sequences")
      ->check(CLI::PositiveNumber);
  c_synth->add_option("--seed", synth.seed, "Base seed");

  CLI::App* c_flow = app.add_subcommand("flow", "Flow-file tools");
  c_flow->require_subcommand(1);

  FlowEstimateArgs fest;
  CLI::App* c_fest = c_flow->add_subcommand(
      "estimate", "Block-matching flow between two frames");
  c_fest->add_option("frame_a", fest.frame_a)->required()->check(CLI::ExistingFile);
  c_fest->add_option("frame_b", fest.frame_b)->required()->check(CLI::ExistingFile);
  c_fest->add_option("out_flo", fest.out_flo)->required();
  c_fest->add_option("--levels", fest.params.levels)->check(CLI::PositiveNumber);
  c_fest->add_option("--radius", fest.params.radius)->check(CLI::PositiveNumber);
  c_fest->add_option("--patch", fest.params.patch)->check(CLI::PositiveNumber);

  FlowReverseArgs frev;
  CLI::App* c_frev = c_flow->add_subcommand(
      "reverse", "Reverse a source-anchored flow by forward projection");
  c_frev->add_option("in_flo", frev.in_flo)->required()->check(CLI::ExistingFile);
  c_frev->add_option("out_flo", frev.out_flo)->required();
  c_frev->add_option("--vis", frev.vis_path, "Also write the visibility mask PNG");
  c_frev->add_flag("--refine", frev.refine, "Median-filter the reversed flow");

  FlowPredictArgs fpred;
  CLI::App* c_fpred = c_flow->add_subcommand(
      "predict", "Predict the flow to time t from neighbour flows");
  c_fpred->add_option("out_flo", fpred.out_flo)->required();
  c_fpred->add_option("--prev", fpred.prev)->check(CLI::ExistingFile);
  c_fpred->add_option("--next", fpred.next)->check(CLI::ExistingFile);
  c_fpred->add_option("--far", fpred.far)->check(CLI::ExistingFile);
  c_fpred->add_option("-t,--time", fpred.t, "Target time in frame intervals");
  c_fpred->add_option("--mode", fpred.mode)
      ->check(CLI::IsMember({"linear", "quadratic", "rectified"}));
  c_fpred->add_option("--steepness", fpred.rectify.steepness);
  c_fpred->add_option("--center", fpred.rectify.center);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  vfi::set_num_threads(threads);
  try {
    if (app.got_subcommand(c_interp)) return run_interpolate(interp);
    if (app.got_subcommand(c_eval)) return run_eval(eval);
    if (app.got_subcommand(c_synth)) return run_synth(synth);
    if (c_flow->got_subcommand(c_fest)) return run_flow_estimate(fest);
    if (c_flow->got_subcommand(c_frev)) return run_flow_reverse(frev);
    if (c_flow->got_subcommand(c_fpred)) return run_flow_predict(fpred);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
