#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vfi/types.hpp"

namespace vfi {

// Peak-signal-to-noise ratio against peak 1.0, capped at 99 dB.
double psnr(const Frame& a, const Frame& b);

// Structural similarity: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
// K2 = 0.03, averaged over channels and all fully covered pixels.
// Requires min(h, w) >= 11.
double ssim(const Frame& a, const Frame& b);

// Mean absolute difference.
double l1_loss(const Frame& a, const Frame& b);

// Band-weighted pyramid loss: sum over levels i = 1..n of 2^(i-1) times the
// mean absolute difference of the i-th pyramid levels. Per-level means keep
// the value resolution-independent.
double lap_loss(const Frame& a, const Frame& b, int levels = 5);

// l1 + 10 * lap, the training-style objective.
double combined_loss(const Frame& a, const Frame& b);

// Mean endpoint error (Euclidean norm of the flow difference).
double epe(const FlowField& a, const FlowField& b);

struct MetricReport {
  double psnr = 0.0;
  double ssim = 0.0;
  double l1 = 0.0;
  double lap = 0.0;
  double combined = 0.0;
  std::optional<double> epe;
};

MetricReport compute_report(const Frame& pred, const Frame& truth);
MetricReport aggregate_reports(const std::vector<MetricReport>& reports);

// Line-oriented table for terminals.
std::string format_report_table(const std::vector<std::string>& names,
                                const std::vector<MetricReport>& reports,
                                const MetricReport& aggregate);

// Machine-readable key=value lines (file.<i>.<metric>=..., mean.<metric>=...).
void write_keyvalue_report(const std::string& path,
                           const std::vector<std::string>& names,
                           const std::vector<MetricReport>& reports,
                           const MetricReport& aggregate);

}  // namespace vfi
