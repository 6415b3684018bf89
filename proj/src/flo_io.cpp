#include "vfi/flo_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include "vfi/errors.hpp"

namespace vfi {

namespace {

constexpr float kFloMagic = 202021.25f;
constexpr int kMaxSide = 1 << 20;

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Explicit little-endian (de)serialisation keeps the files portable.
void put_u32(std::vector<std::uint8_t>& buf, std::uint32_t v) {
  buf.push_back(static_cast<std::uint8_t>(v & 0xff));
  buf.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  buf.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  buf.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

FlowField load_flo(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw io_error("cannot open " + path);
  std::fseek(fp.get(), 0, SEEK_END);
  long fsize = std::ftell(fp.get());
  std::fseek(fp.get(), 0, SEEK_SET);
  if (fsize < 12) throw format_error("truncated flow file: " + path);

  std::vector<std::uint8_t> buf(static_cast<std::size_t>(fsize));
  if (std::fread(buf.data(), 1, buf.size(), fp.get()) != buf.size())
    throw io_error("short read on " + path);

  float magic = std::bit_cast<float>(get_u32(buf.data()));
  if (magic != kFloMagic) throw format_error("bad flow magic in " + path);
  std::int32_t w = static_cast<std::int32_t>(get_u32(buf.data() + 4));
  std::int32_t h = static_cast<std::int32_t>(get_u32(buf.data() + 8));
  if (w <= 0 || h <= 0 || w > kMaxSide || h > kMaxSide)
    throw format_error("bad flow dimensions in " + path);
  std::size_t need = 12 + static_cast<std::size_t>(w) * h * 2 * 4;
  if (buf.size() != need) throw format_error("flow payload size mismatch in " + path);

  FlowField flow(h, w);
  const std::uint8_t* p = buf.data() + 12;
  for (std::size_t i = 0; i < flow.u.size(); ++i) {
    flow.u[i] = std::bit_cast<float>(get_u32(p));
    flow.v[i] = std::bit_cast<float>(get_u32(p + 4));
    p += 8;
  }
  return flow;
}

void save_flo(const std::string& path, const FlowField& flow) {
  if (flow.empty()) throw std::invalid_argument("save_flo: empty flow");
  std::vector<std::uint8_t> buf;
  buf.reserve(12 + flow.u.size() * 8);
  put_u32(buf, std::bit_cast<std::uint32_t>(kFloMagic));
  put_u32(buf, static_cast<std::uint32_t>(flow.width));
  put_u32(buf, static_cast<std::uint32_t>(flow.height));
  for (std::size_t i = 0; i < flow.u.size(); ++i) {
    put_u32(buf, std::bit_cast<std::uint32_t>(flow.u[i]));
    put_u32(buf, std::bit_cast<std::uint32_t>(flow.v[i]));
  }
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw io_error("cannot open " + path + " for writing");
  if (std::fwrite(buf.data(), 1, buf.size(), fp.get()) != buf.size())
    throw io_error("short write on " + path);
}

}  // namespace vfi
