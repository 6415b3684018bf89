#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vfi/types.hpp"

namespace vfi {

enum class Activation { None, Relu };

// One 2-D convolution (cross-correlation) layer. Weights are row-major in
// (out_channel, in_channel, ky, kx) order; one bias per output channel.
struct ConvLayer {
  int out_channels = 0;
  int in_channels = 0;
  int kernel = 3;
  int stride = 1;
  int pad = 1;
  Activation act = Activation::None;
  std::vector<float> weights;
  std::vector<float> bias;
};

struct ConvNet {
  std::vector<ConvLayer> layers;
};

// Zero-padded cross-correlation; output side = (in + 2*pad - k)/stride + 1.
// Throws std::invalid_argument on channel or weight-size mismatch.
Image conv2d(const Image& input, const ConvLayer& layer);

// Applies the layers in order, each followed by its activation.
Image run_net(const Image& input, const ConvNet& net);

// Stem features: a 7x7 stride-2 pad-3 64-channel convolution, bilinearly
// upsampled back to the input size so they align with the frame.
Image extract_features(const Frame& frame, const ConvLayer& stem);

// Visibility- and time-weighted mean of the two warped anchors:
//   w0 = (1-t)*vis0, w1 = t*vis1, out = (w0*i0w + w1*i1w)/(w0+w1),
// falling back to (1-t)*i0w + t*i1w where both weights vanish.
Frame blend_warped(const Frame& i0w, const Frame& i1w, const Image& vis0,
                   const Image& vis1, double t);

// Residual correction of the blended frame from warped context: frames,
// per-channel gradients and stem features of both anchors, concatenated in
// that order (2C + 4C + 128 channels). The network output is added to the
// blended frame and the sum clamped to [0, 1]. An all-zero network is an
// exact identity.
Frame residual_synthesis(const Frame& blended, const Frame& i0w,
                         const Frame& i1w, const Image& e0w, const Image& e1w,
                         const Image& f0w, const Image& f1w,
                         const ConvNet& body);

// Stem layer plus residual body, stored together (stem first) in the net
// weight file format.
struct SynthWeights {
  ConvLayer stem;
  ConvNet body;
};

// Binary net format, all little-endian: int32 layer count, per layer six
// int32 fields (out_ch, in_ch, kernel, stride, pad, activation), then per
// layer the float32 weights followed by the float32 biases.
void save_net(const std::string& path, const ConvNet& net);
ConvNet load_net(const std::string& path);

// Validates the stem (7x7, stride 2, pad 3, 64 out, frame_channels in) and
// that the body's input width matches the concatenated synthesis input
// (146 channels for 3-channel frames). Throws format_error on mismatch.
// The one-argument form takes the frame channel count from the stem layer.
SynthWeights load_synth_weights(const std::string& path);
SynthWeights load_synth_weights(const std::string& path, int frame_channels);
void save_synth_weights(const std::string& path, const SynthWeights& weights);

// Number of channels residual_synthesis concatenates for C-channel frames.
int synthesis_input_channels(int frame_channels);

// Deterministic small random weights for tests and demos.
ConvLayer make_seeded_layer(int out_ch, int in_ch, int kernel, int stride,
                            int pad, Activation act, std::uint32_t seed,
                            float magnitude = 0.05f);
SynthWeights make_seeded_synth_weights(int frame_channels, std::uint32_t seed,
                                       float magnitude = 0.05f);

}  // namespace vfi
