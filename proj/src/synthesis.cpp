#include "vfi/synthesis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <stdexcept>

#include "vfi/errors.hpp"
#include "vfi/image_ops.hpp"
#include "vfi/parallel.hpp"

namespace vfi {

namespace {

std::size_t weight_count(const ConvLayer& l) {
  return static_cast<std::size_t>(l.out_channels) * l.in_channels * l.kernel * l.kernel;
}

void check_layer(const ConvLayer& l, const char* who) {
  if (l.out_channels < 1 || l.in_channels < 1 || l.kernel < 1 || l.stride < 1 || l.pad < 0)
    throw std::invalid_argument(std::string(who) + ": bad layer geometry");
  if (l.weights.size() != weight_count(l))
    throw std::invalid_argument(std::string(who) + ": weight count mismatch");
  if (l.bias.size() != static_cast<std::size_t>(l.out_channels))
    throw std::invalid_argument(std::string(who) + ": bias count mismatch");
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void put_u32(std::vector<std::uint8_t>& buf, std::uint32_t v) {
  buf.push_back(static_cast<std::uint8_t>(v & 0xff));
  buf.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  buf.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  buf.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

class ByteReader {
 public:
  ByteReader(std::vector<std::uint8_t> bytes, std::string path)
      : bytes_(std::move(bytes)), path_(std::move(path)) {}
  std::uint32_t u32() {
    if (pos_ + 4 > bytes_.size()) throw format_error("truncated net file: " + path_);
    std::uint32_t v = static_cast<std::uint32_t>(bytes_[pos_]) |
                      (static_cast<std::uint32_t>(bytes_[pos_ + 1]) << 8) |
                      (static_cast<std::uint32_t>(bytes_[pos_ + 2]) << 16) |
                      (static_cast<std::uint32_t>(bytes_[pos_ + 3]) << 24);
    pos_ += 4;
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  float f32() { return std::bit_cast<float>(u32()); }
  bool done() const { return pos_ == bytes_.size(); }
  const std::string& path() const { return path_; }

 private:
  std::vector<std::uint8_t> bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

Image concat_channels(const std::vector<const Image*>& parts) {
  int h = parts[0]->height, w = parts[0]->width;
  int total = 0;
  for (const Image* p : parts) {
    if (p->height != h || p->width != w)
      throw std::invalid_argument("residual_synthesis: input size mismatch");
    total += p->channels;
  }
  Image out(h, w, total);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      int c = 0;
      for (const Image* p : parts)
        for (int pc = 0; pc < p->channels; ++pc) out.at(y, x, c++) = p->at(y, x, pc);
    }
  return out;
}

}  // namespace

Image conv2d(const Image& input, const ConvLayer& layer) {
  check_layer(layer, "conv2d");
  if (input.channels != layer.in_channels)
    throw std::invalid_argument("conv2d: input channel mismatch");
  int oh = (input.height + 2 * layer.pad - layer.kernel) / layer.stride + 1;
  int ow = (input.width + 2 * layer.pad - layer.kernel) / layer.stride + 1;
  if (oh < 1 || ow < 1) throw std::invalid_argument("conv2d: kernel larger than padded input");

  Image out(oh, ow, layer.out_channels);
  const int k = layer.kernel, in_c = layer.in_channels;
  parallel_chunks(oh, [&](int y_begin, int y_end) {
    for (int oy = y_begin; oy < y_end; ++oy) {
      int iy0 = oy * layer.stride - layer.pad;
      for (int ox = 0; ox < ow; ++ox) {
        int ix0 = ox * layer.stride - layer.pad;
        for (int oc = 0; oc < layer.out_channels; ++oc) {
          double acc = layer.bias[oc];
          const float* wbase = layer.weights.data() +
                               static_cast<std::size_t>(oc) * in_c * k * k;
          for (int ic = 0; ic < in_c; ++ic) {
            const float* wc = wbase + static_cast<std::size_t>(ic) * k * k;
            for (int ky = 0; ky < k; ++ky) {
              int iy = iy0 + ky;
              if (iy < 0 || iy >= input.height) continue;  // zero padding
              for (int kx = 0; kx < k; ++kx) {
                int ix = ix0 + kx;
                if (ix < 0 || ix >= input.width) continue;
                acc += static_cast<double>(wc[ky * k + kx]) * input.at(iy, ix, ic);
              }
            }
          }
          float v = static_cast<float>(acc);
          if (layer.act == Activation::Relu && v < 0.0f) v = 0.0f;
          out.at(oy, ox, oc) = v;
        }
      }
    }
  });
  return out;
}

Image run_net(const Image& input, const ConvNet& net) {
  if (net.layers.empty()) throw std::invalid_argument("run_net: empty net");
  Image cur = conv2d(input, net.layers[0]);
  for (std::size_t i = 1; i < net.layers.size(); ++i) cur = conv2d(cur, net.layers[i]);
  return cur;
}

Image extract_features(const Frame& frame, const ConvLayer& stem) {
  if (stem.kernel != 7 || stem.stride != 2 || stem.pad != 3 || stem.out_channels != 64)
    throw std::invalid_argument("extract_features: stem must be 7x7 stride-2 pad-3 with 64 outputs");
  if (stem.in_channels != frame.channels)
    throw std::invalid_argument("extract_features: stem input channels do not match frame");
  Image feat = conv2d(frame, stem);
  return resample_bilinear(feat, frame.height, frame.width);
}

Frame blend_warped(const Frame& i0w, const Frame& i1w, const Image& vis0,
                   const Image& vis1, double t) {
  if (!i0w.same_shape(i1w)) throw std::invalid_argument("blend_warped: frame shape mismatch");
  if (vis0.channels != 1 || vis1.channels != 1 || vis0.height != i0w.height ||
      vis0.width != i0w.width || vis1.height != i0w.height || vis1.width != i0w.width)
    throw std::invalid_argument("blend_warped: visibility shape mismatch");

  Frame out(i0w.height, i0w.width, i0w.channels);
  parallel_chunks(i0w.height, [&](int y_begin, int y_end) {
    for (int y = y_begin; y < y_end; ++y) {
      for (int x = 0; x < i0w.width; ++x) {
        double w0 = (1.0 - t) * vis0.at(y, x, 0);
        double w1 = t * vis1.at(y, x, 0);
        double sum = w0 + w1;
        for (int c = 0; c < i0w.channels; ++c) {
          double a = i0w.at(y, x, c), b = i1w.at(y, x, c);
          out.at(y, x, c) = static_cast<float>(
              sum == 0.0 ? (1.0 - t) * a + t * b : (w0 * a + w1 * b) / sum);
        }
      }
    }
  });
  return out;
}

int synthesis_input_channels(int frame_channels) {
  // blended context: two warped frames, their per-channel gradients (2C
  // each), and two 64-channel stem feature maps.
  return 2 * frame_channels + 4 * frame_channels + 128;
}

Frame residual_synthesis(const Frame& blended, const Frame& i0w,
                         const Frame& i1w, const Image& e0w, const Image& e1w,
                         const Image& f0w, const Image& f1w,
                         const ConvNet& body) {
  if (body.layers.empty()) throw std::invalid_argument("residual_synthesis: empty net");
  if (e0w.channels != 2 * blended.channels || e1w.channels != 2 * blended.channels)
    throw std::invalid_argument("residual_synthesis: gradient channel mismatch");
  if (f0w.channels != 64 || f1w.channels != 64)
    throw std::invalid_argument("residual_synthesis: feature maps must have 64 channels");

  Image net_in = concat_channels({&i0w, &i1w, &e0w, &e1w, &f0w, &f1w});
  if (body.layers.front().in_channels != net_in.channels)
    throw std::invalid_argument("residual_synthesis: net input channels must be " +
                                std::to_string(net_in.channels));
  if (body.layers.back().out_channels != blended.channels)
    throw std::invalid_argument("residual_synthesis: net output channels must match frame");
  for (const ConvLayer& l : body.layers)
    if (l.stride != 1 || 2 * l.pad != l.kernel - 1)
      throw std::invalid_argument("residual_synthesis: body layers must preserve size");

  Image residual = run_net(net_in, body);
  Frame out(blended.height, blended.width, blended.channels);
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = std::clamp(blended.data[i] + residual.data[i], 0.0f, 1.0f);
  return out;
}

void save_net(const std::string& path, const ConvNet& net) {
  if (net.layers.empty()) throw std::invalid_argument("save_net: empty net");
  for (const ConvLayer& l : net.layers) check_layer(l, "save_net");

  std::vector<std::uint8_t> buf;
  put_u32(buf, static_cast<std::uint32_t>(net.layers.size()));
  for (const ConvLayer& l : net.layers) {
    put_u32(buf, static_cast<std::uint32_t>(l.out_channels));
    put_u32(buf, static_cast<std::uint32_t>(l.in_channels));
    put_u32(buf, static_cast<std::uint32_t>(l.kernel));
    put_u32(buf, static_cast<std::uint32_t>(l.stride));
    put_u32(buf, static_cast<std::uint32_t>(l.pad));
    put_u32(buf, l.act == Activation::Relu ? 1u : 0u);
  }
  for (const ConvLayer& l : net.layers) {
    for (float wv : l.weights) put_u32(buf, std::bit_cast<std::uint32_t>(wv));
    for (float bv : l.bias) put_u32(buf, std::bit_cast<std::uint32_t>(bv));
  }

  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw io_error("cannot open " + path + " for writing");
  if (std::fwrite(buf.data(), 1, buf.size(), fp.get()) != buf.size())
    throw io_error("short write on " + path);
}

ConvNet load_net(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw io_error("cannot open " + path);
  std::fseek(fp.get(), 0, SEEK_END);
  long fsize = std::ftell(fp.get());
  std::fseek(fp.get(), 0, SEEK_SET);
  if (fsize < 4) throw format_error("truncated net file: " + path);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(fsize));
  if (std::fread(bytes.data(), 1, bytes.size(), fp.get()) != bytes.size())
    throw io_error("short read on " + path);

  ByteReader r(std::move(bytes), path);
  std::int32_t count = r.i32();
  if (count < 1 || count > 1024) throw format_error("bad layer count in " + path);

  ConvNet net;
  net.layers.resize(count);
  for (ConvLayer& l : net.layers) {
    l.out_channels = r.i32();
    l.in_channels = r.i32();
    l.kernel = r.i32();
    l.stride = r.i32();
    l.pad = r.i32();
    std::int32_t act = r.i32();
    if (act != 0 && act != 1) throw format_error("bad activation code in " + path);
    l.act = act == 1 ? Activation::Relu : Activation::None;
    if (l.out_channels < 1 || l.in_channels < 1 || l.kernel < 1 || l.stride < 1 || l.pad < 0)
      throw format_error("bad layer geometry in " + path);
  }
  for (ConvLayer& l : net.layers) {
    l.weights.resize(weight_count(l));
    for (float& wv : l.weights) wv = r.f32();
    l.bias.resize(l.out_channels);
    for (float& bv : l.bias) bv = r.f32();
  }
  if (!r.done()) throw format_error("trailing bytes in " + path);
  // No chaining check here: the format doubles as a container for the
  // synthesis weights, where the body input is a concatenation rather than
  // the stem output. conv2d validates channels at execution time.
  return net;
}

SynthWeights load_synth_weights(const std::string& path) {
  ConvNet all = load_net(path);
  if (all.layers.size() < 2) throw format_error("net file needs a stem plus body: " + path);
  SynthWeights sw;
  sw.stem = all.layers.front();
  sw.body.layers.assign(all.layers.begin() + 1, all.layers.end());
  if (sw.stem.kernel != 7 || sw.stem.stride != 2 || sw.stem.pad != 3 ||
      sw.stem.out_channels != 64)
    throw format_error("stem layer shape mismatch in " + path);
  int frame_channels = sw.stem.in_channels;
  int expected = synthesis_input_channels(frame_channels);
  if (sw.body.layers.front().in_channels != expected)
    throw format_error("body must take " + std::to_string(expected) +
                       " input channels in " + path);
  if (sw.body.layers.back().out_channels != frame_channels)
    throw format_error("body must emit " + std::to_string(frame_channels) +
                       " channels in " + path);
  return sw;
}

SynthWeights load_synth_weights(const std::string& path, int frame_channels) {
  SynthWeights sw = load_synth_weights(path);
  if (sw.stem.in_channels != frame_channels)
    throw format_error("weights in " + path + " expect " +
                       std::to_string(sw.stem.in_channels) +
                       "-channel frames, not " + std::to_string(frame_channels));
  return sw;
}

void save_synth_weights(const std::string& path, const SynthWeights& weights) {
  ConvNet all;
  all.layers.push_back(weights.stem);
  for (const ConvLayer& l : weights.body.layers) all.layers.push_back(l);
  save_net(path, all);
}

ConvLayer make_seeded_layer(int out_ch, int in_ch, int kernel, int stride,
                            int pad, Activation act, std::uint32_t seed,
                            float magnitude) {
  ConvLayer l;
  l.out_channels = out_ch;
  l.in_channels = in_ch;
  l.kernel = kernel;
  l.stride = stride;
  l.pad = pad;
  l.act = act;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> dist(-magnitude, magnitude);
  l.weights.resize(weight_count(l));
  for (float& w : l.weights) w = dist(rng);
  l.bias.resize(out_ch);
  for (float& b : l.bias) b = dist(rng);
  return l;
}

SynthWeights make_seeded_synth_weights(int frame_channels, std::uint32_t seed,
                                       float magnitude) {
  SynthWeights sw;
  sw.stem = make_seeded_layer(64, frame_channels, 7, 2, 3, Activation::Relu,
                              seed, magnitude);
  int in = synthesis_input_channels(frame_channels);
  sw.body.layers = {
      make_seeded_layer(64, in, 3, 1, 1, Activation::Relu, seed + 1, magnitude),
      make_seeded_layer(32, 64, 3, 1, 1, Activation::Relu, seed + 2, magnitude),
      make_seeded_layer(frame_channels, 32, 3, 1, 1, Activation::None, seed + 3, magnitude),
  };
  return sw;
}

}  // namespace vfi
