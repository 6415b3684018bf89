#include <doctest.h>

#include <fstream>
#include <random>

#include "helpers.hpp"
#include "vfi/errors.hpp"
#include "vfi/png_io.hpp"

using namespace vfi;
using testutil::TempDir;
using testutil::bitwise_equal;

namespace {

// An image whose values are exact 8-bit levels survives the roundtrip bitwise.
Frame quantized_image(int h, int w, int c, std::uint32_t seed) {
  Frame img(h, w, c);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(0, 255);
  for (float& v : img.data) v = dist(rng) / 255.0f;
  return img;
}

}  // namespace

TEST_SUITE("png_io") {

TEST_CASE("rgb roundtrip is exact on 8-bit levels") {
  TempDir tmp("png_rgb");
  Frame img = quantized_image(9, 14, 3, 21);
  write_png(tmp.file("a.png"), img);
  CHECK(bitwise_equal(read_png(tmp.file("a.png")), img));
}

TEST_CASE("grayscale roundtrip is exact on 8-bit levels") {
  TempDir tmp("png_gray");
  Frame img = quantized_image(7, 5, 1, 22);
  write_png(tmp.file("g.png"), img);
  Frame back = read_png(tmp.file("g.png"));
  CHECK(back.channels == 1);
  CHECK(bitwise_equal(back, img));
}

TEST_CASE("write clamps values outside [0,1]") {
  TempDir tmp("png_clamp");
  Frame img(1, 2, 1);
  img.at(0, 0, 0) = -0.5f;
  img.at(0, 1, 0) = 1.5f;
  write_png(tmp.file("c.png"), img);
  Frame back = read_png(tmp.file("c.png"));
  CHECK(back.at(0, 0, 0) == 0.0f);
  CHECK(back.at(0, 1, 0) == 1.0f);
}

TEST_CASE("reading a missing file raises an I/O error") {
  CHECK_THROWS_AS(read_png("/nonexistent/nope.png"), io_error);
}

TEST_CASE("reading a non-png file raises") {
  TempDir tmp("png_bad");
  {
    std::ofstream f(tmp.file("bad.png"), std::ios::binary);
    f << "this is not a png";
  }
  CHECK_THROWS(read_png(tmp.file("bad.png")));
}

}  // TEST_SUITE
