#pragma once

#include <vector>

#include "afa/tensor.hpp"
#include "afa/wave.hpp"

namespace afa {

struct AfaConfig {
    double mean_strength = 10.0;  // 1/lambda of the exponential strength draw
    int image_size = 32;          // M; inputs must be square at this size
    bool per_channel = true;      // independent wave and strength per channel
    bool clamp = true;            // clamp the sum back into [0,1]
};

// The three values drawn for one channel, in draw order.
struct ChannelDraw {
    double f = 0.0;
    double omega = 0.0;
    double sigma = 0.0;
};

// Deterministic core of the augmentation: out_c = x_c + sigma * wave for a
// single channel, optionally clamped. The sampling wrappers and the
// fixed-strength corruption share this path.
ImageTensor add_wave(const ImageTensor& x, int channel, const RealGrid& wave, double sigma,
                     bool clamp);

// Per channel: draw (f, omega) via sample_basis, sigma ~ Exp(mean), add the
// unit-norm wave, clamp when configured. Consumes exactly three draws per
// channel in (f, omega, sigma) order; with per_channel unset, one triple is
// drawn and shared. Requires a clamped square input matching cfg.image_size.
ImageTensor afa_augment(const ImageTensor& x, const AfaConfig& cfg, RngState& rng,
                        std::vector<ChannelDraw>* draws = nullptr);

struct VisualAugConfig {
    int crop_padding = 4;
    double hflip_prob = 0.5;
};

// Zero-pad by crop_padding on every side, crop a random window back to the
// original shape, then flip horizontally with probability hflip_prob.
// Consumes three draws per image (offset y, offset x, flip) regardless of
// configuration.
ImageTensor standard_visual_aug(const ImageTensor& x, const VisualAugConfig& cfg, RngState& rng);

}  // namespace afa
