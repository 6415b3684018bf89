#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "vfi/metrics.hpp"

using namespace vfi;
using testutil::random_image;

TEST_SUITE("metrics") {

TEST_CASE("psnr of a uniform 0.1 difference is 20 dB") {
  Frame a(64, 64, 1, 0.0f), b(64, 64, 1, 0.1f);
  CHECK(std::abs(psnr(a, b) - 20.0) < 1e-6);
}

TEST_CASE("psnr caps at 99 dB") {
  Frame a(8, 8, 1, 0.5f);
  CHECK(psnr(a, a) == 99.0);
  Frame b = a;
  b.at(0, 0, 0) += 1e-18f;  // rounds away: still identical
  CHECK(psnr(a, b) == 99.0);
  Frame c = a;
  c.at(0, 0, 0) = 0.5f + 3e-4f;  // MSE ~1.4e-9 over 64 px: ~88.5 dB
  CHECK(psnr(a, c) < 99.0);
  CHECK(psnr(a, c) > 80.0);
}

TEST_CASE("ssim of an image with itself is exactly 1") {
  Frame x = random_image(20, 24, 3, 900);
  CHECK(ssim(x, x) == 1.0);
}

TEST_CASE("ssim of two constants matches the closed form") {
  Frame a(16, 16, 1, 0.2f), b(16, 16, 1, 0.4f);
  double ma = static_cast<double>(0.2f), mb = static_cast<double>(0.4f);
  double c1 = 0.01 * 0.01;
  double expected = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
  CHECK(ssim(a, b) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("ssim drops when noise is added") {
  Frame x = random_image(24, 24, 1, 901);
  Frame noisy = x;
  for (std::size_t i = 0; i < noisy.data.size(); i += 3)
    noisy.data[i] = std::min(1.0f, noisy.data[i] + 0.2f);
  double s = ssim(x, noisy);
  CHECK(s < 0.99);
  CHECK(s > 0.0);
}

TEST_CASE("l1 of a uniform difference is exact") {
  Frame a(64, 64, 1, 0.0f), b(64, 64, 1, 0.1f);
  CHECK(l1_loss(a, b) == static_cast<double>(0.1f));
  CHECK(l1_loss(a, a) == 0.0);
}

TEST_CASE("laplacian loss is zero on identical inputs") {
  Frame x = random_image(32, 32, 3, 902);
  CHECK(lap_loss(x, x) == 0.0);
}

TEST_CASE("laplacian loss weights the base level by 2^(n-1)") {
  // Constant difference lives entirely in the coarsest level.
  Frame a(64, 64, 1, 0.0f), b(64, 64, 1, 0.1f);
  CHECK(lap_loss(a, b, 3) == 4.0 * static_cast<double>(0.1f));
  CHECK(lap_loss(a, b, 1) == static_cast<double>(0.1f));
}

TEST_CASE("combined loss is literally l1 + 10 * lap") {
  Frame a = random_image(32, 32, 3, 903);
  Frame b = random_image(32, 32, 3, 904);
  CHECK(combined_loss(a, b) == l1_loss(a, b) + 10.0 * lap_loss(a, b));
}

TEST_CASE("epe is the mean endpoint distance") {
  FlowField a(1, 2), b(1, 2);
  a.u = {3.0f, 0.0f};
  a.v = {4.0f, 1.0f};
  CHECK(epe(a, b) == doctest::Approx(0.5 * (5.0 + 1.0)));
  CHECK(epe(a, a) == 0.0);
}

TEST_CASE("metric reports aggregate by the mean") {
  Frame x = random_image(16, 16, 1, 905);
  Frame y(16, 16, 1, 0.5f);
  MetricReport r1 = compute_report(x, y);
  MetricReport r2 = compute_report(y, y);
  MetricReport agg = aggregate_reports({r1, r2});
  CHECK(agg.psnr == doctest::Approx(0.5 * (r1.psnr + r2.psnr)));
  CHECK(agg.l1 == doctest::Approx(0.5 * (r1.l1 + r2.l1)));
  CHECK(!agg.epe.has_value());
  r1.epe = 2.0;
  agg = aggregate_reports({r1, r2});
  CHECK(agg.epe.has_value());
  CHECK(*agg.epe == 2.0);
}

TEST_CASE("report writers emit every metric") {
  testutil::TempDir tmp("report");
  Frame x(16, 16, 1, 0.25f);
  MetricReport r = compute_report(x, x);
  std::string table = format_report_table({"one.png"}, {r}, r);
  CHECK(table.find("one.png") != std::string::npos);
  CHECK(table.find("mean") != std::string::npos);
  write_keyvalue_report(tmp.file("r.txt"), {"one.png"}, {r}, r);
  std::ifstream in(tmp.file("r.txt"));
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  CHECK(text.find("file.0.name=one.png") != std::string::npos);
  CHECK(text.find("mean.psnr=99") != std::string::npos);
  CHECK(text.find("mean.combined=") != std::string::npos);
}

TEST_CASE("metrics reject shape mismatches") {
  Frame a(16, 16, 1, 0.0f), b(16, 17, 1, 0.0f);
  CHECK_THROWS_AS(psnr(a, b), std::invalid_argument);
  CHECK_THROWS_AS(ssim(a, b), std::invalid_argument);
  CHECK_THROWS_AS(l1_loss(a, b), std::invalid_argument);
  Frame small(8, 8, 1, 0.0f);
  CHECK_THROWS_AS(ssim(small, small), std::invalid_argument);
}

}  // TEST_SUITE
