#include "vfi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vfi/errors.hpp"
#include "vfi/image_ops.hpp"

namespace vfi {

namespace {

constexpr double kPsnrCap = 99.0;
constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimK1 = 0.01;
constexpr double kSsimK2 = 0.03;

void require_same_shape(const Frame& a, const Frame& b, const char* who) {
  if (!a.same_shape(b)) throw std::invalid_argument(std::string(who) + ": shape mismatch");
  if (a.empty()) throw std::invalid_argument(std::string(who) + ": empty input");
}

}  // namespace

double psnr(const Frame& a, const Frame& b) {
  require_same_shape(a, b, "psnr");
  double se = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    double d = static_cast<double>(a.data[i]) - b.data[i];
    se += d * d;
  }
  double mse = se / static_cast<double>(a.data.size());
  if (mse <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, -10.0 * std::log10(mse));
}

double ssim(const Frame& a, const Frame& b) {
  require_same_shape(a, b, "ssim");
  if (a.height < kSsimWindow || a.width < kSsimWindow)
    throw std::invalid_argument("ssim: frames smaller than the 11x11 window");

  // Normalised Gaussian window.
  double win[kSsimWindow][kSsimWindow];
  double wsum = 0.0;
  const int half = kSsimWindow / 2;
  for (int y = 0; y < kSsimWindow; ++y)
    for (int x = 0; x < kSsimWindow; ++x) {
      double dy = y - half, dx = x - half;
      win[y][x] = std::exp(-(dx * dx + dy * dy) / (2.0 * kSsimSigma * kSsimSigma));
      wsum += win[y][x];
    }
  for (int y = 0; y < kSsimWindow; ++y)
    for (int x = 0; x < kSsimWindow; ++x) win[y][x] /= wsum;

  const double c1 = (kSsimK1 * kSsimK1);
  const double c2 = (kSsimK2 * kSsimK2);

  // Average over all fully covered window positions and channels.
  double total = 0.0;
  long count = 0;
  for (int c = 0; c < a.channels; ++c) {
    for (int y = half; y < a.height - half; ++y) {
      for (int x = half; x < a.width - half; ++x) {
        double mu_a = 0.0, mu_b = 0.0;
        for (int wy = 0; wy < kSsimWindow; ++wy)
          for (int wx = 0; wx < kSsimWindow; ++wx) {
            mu_a += win[wy][wx] * a.at(y + wy - half, x + wx - half, c);
            mu_b += win[wy][wx] * b.at(y + wy - half, x + wx - half, c);
          }
        double var_a = 0.0, var_b = 0.0, cov = 0.0;
        for (int wy = 0; wy < kSsimWindow; ++wy)
          for (int wx = 0; wx < kSsimWindow; ++wx) {
            double da = a.at(y + wy - half, x + wx - half, c) - mu_a;
            double db = b.at(y + wy - half, x + wx - half, c) - mu_b;
            var_a += win[wy][wx] * da * da;
            var_b += win[wy][wx] * db * db;
            cov += win[wy][wx] * da * db;
          }
        double num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
        double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
        total += num / den;
        ++count;
      }
    }
  }
  return total / static_cast<double>(count);
}

double l1_loss(const Frame& a, const Frame& b) {
  require_same_shape(a, b, "l1_loss");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    sum += std::abs(static_cast<double>(a.data[i]) - b.data[i]);
  return sum / static_cast<double>(a.data.size());
}

double lap_loss(const Frame& a, const Frame& b, int levels) {
  require_same_shape(a, b, "lap_loss");
  Pyramid pa = build_laplacian_pyramid(a, levels);
  Pyramid pb = build_laplacian_pyramid(b, levels);
  double total = 0.0;
  double band_weight = 1.0;  // 2^(i-1) for level i = 1..n
  for (int i = 0; i < levels; ++i, band_weight *= 2.0) {
    const Image& la = pa.levels[i];
    const Image& lb = pb.levels[i];
    double sum = 0.0;
    for (std::size_t k = 0; k < la.data.size(); ++k)
      sum += std::abs(static_cast<double>(la.data[k]) - lb.data[k]);
    total += band_weight * (sum / static_cast<double>(la.data.size()));
  }
  return total;
}

double combined_loss(const Frame& a, const Frame& b) {
  return l1_loss(a, b) + 10.0 * lap_loss(a, b);
}

double epe(const FlowField& a, const FlowField& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("epe: shape mismatch");
  if (a.empty()) throw std::invalid_argument("epe: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.u.size(); ++i) {
    double du = static_cast<double>(a.u[i]) - b.u[i];
    double dv = static_cast<double>(a.v[i]) - b.v[i];
    sum += std::sqrt(du * du + dv * dv);
  }
  return sum / static_cast<double>(a.u.size());
}

MetricReport compute_report(const Frame& pred, const Frame& truth) {
  MetricReport r;
  r.psnr = psnr(pred, truth);
  r.ssim = ssim(pred, truth);
  r.l1 = l1_loss(pred, truth);
  r.lap = lap_loss(pred, truth);
  r.combined = combined_loss(pred, truth);
  return r;
}

MetricReport aggregate_reports(const std::vector<MetricReport>& reports) {
  MetricReport agg;
  if (reports.empty()) return agg;
  double epe_sum = 0.0;
  int epe_count = 0;
  for (const MetricReport& r : reports) {
    agg.psnr += r.psnr;
    agg.ssim += r.ssim;
    agg.l1 += r.l1;
    agg.lap += r.lap;
    agg.combined += r.combined;
    if (r.epe) {
      epe_sum += *r.epe;
      ++epe_count;
    }
  }
  double n = static_cast<double>(reports.size());
  agg.psnr /= n;
  agg.ssim /= n;
  agg.l1 /= n;
  agg.lap /= n;
  agg.combined /= n;
  if (epe_count > 0) agg.epe = epe_sum / epe_count;
  return agg;
}

std::string format_report_table(const std::vector<std::string>& names,
                                const std::vector<MetricReport>& reports,
                                const MetricReport& aggregate) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-28s %9s %8s %9s %9s %9s\n", "frame",
                "psnr", "ssim", "l1", "lap", "combined");
  out << line;
  auto row = [&](const std::string& name, const MetricReport& r) {
    std::snprintf(line, sizeof(line), "%-28s %9.4f %8.5f %9.6f %9.6f %9.6f\n",
                  name.c_str(), r.psnr, r.ssim, r.l1, r.lap, r.combined);
    out << line;
  };
  for (std::size_t i = 0; i < reports.size(); ++i) row(names[i], reports[i]);
  row("mean", aggregate);
  return out.str();
}

void write_keyvalue_report(const std::string& path,
                           const std::vector<std::string>& names,
                           const std::vector<MetricReport>& reports,
                           const MetricReport& aggregate) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open " + path + " for writing");
  char line[256];
  auto emit = [&](const std::string& prefix, const MetricReport& r) {
    std::snprintf(line, sizeof(line),
                  "%s.psnr=%.10g\n%s.ssim=%.10g\n%s.l1=%.10g\n%s.lap=%.10g\n%s.combined=%.10g\n",
                  prefix.c_str(), r.psnr, prefix.c_str(), r.ssim, prefix.c_str(),
                  r.l1, prefix.c_str(), r.lap, prefix.c_str(), r.combined);
    out << line;
    if (r.epe) out << prefix << ".epe=" << *r.epe << "\n";
  };
  for (std::size_t i = 0; i < reports.size(); ++i) {
    std::string prefix = "file." + std::to_string(i);
    out << prefix << ".name=" << names[i] << "\n";
    emit(prefix, reports[i]);
  }
  emit("mean", aggregate);
  if (!out) throw io_error("failed writing " + path);
}

}  // namespace vfi
