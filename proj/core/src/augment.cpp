#include "afa/augment.hpp"

#include <algorithm>
#include <cmath>

namespace afa {

ImageTensor add_wave(const ImageTensor& x, int channel, const RealGrid& wave, double sigma,
                     bool clamp) {
    if (channel < 0 || channel >= x.channels()) {
        raise(Errc::ShapeMismatch, "channel index out of range");
    }
    if (wave.height != x.height() || wave.width != x.width()) {
        raise(Errc::ShapeMismatch, "wave extent does not match image");
    }
    ImageTensor out = x;
    for (int y = 0; y < x.height(); ++y) {
        for (int u = 0; u < x.width(); ++u) {
            double v = static_cast<double>(x.at(channel, y, u)) + sigma * wave.at(y, u);
            if (clamp) v = std::min(1.0, std::max(0.0, v));
            out.at(channel, y, u) = static_cast<float>(v);
        }
    }
    out.set_clamped(clamp && x.clamped());
    return out;
}

ImageTensor afa_augment(const ImageTensor& x, const AfaConfig& cfg, RngState& rng,
                        std::vector<ChannelDraw>* draws) {
    if (!x.clamped()) {
        raise(Errc::InvalidParam, "augmentation input must be clamped to [0,1]");
    }
    if (x.height() != x.width() || x.height() != cfg.image_size) {
        raise(Errc::ShapeMismatch, "input must be square at the configured image size");
    }
    if (!(cfg.mean_strength > 0.0)) {
        raise(Errc::InvalidParam, "mean_strength must be positive");
    }

    if (draws) draws->clear();
    ImageTensor out = x;
    ChannelDraw d{};
    RealGrid wave;
    for (int c = 0; c < x.channels(); ++c) {
        if (cfg.per_channel || c == 0) {
            auto [f, omega] = sample_basis(rng, cfg.image_size);
            d.f = f;
            d.omega = omega;
            d.sigma = sample_exponential(rng, cfg.mean_strength);
            wave = make_wave(d.f, d.omega, cfg.image_size);
        }
        out = add_wave(out, c, wave, d.sigma, cfg.clamp);
        if (draws) draws->push_back(d);
    }
    out.set_clamped(cfg.clamp);
    return out;
}

ImageTensor standard_visual_aug(const ImageTensor& x, const VisualAugConfig& cfg, RngState& rng) {
    if (!x.clamped()) {
        raise(Errc::InvalidParam, "augmentation input must be clamped to [0,1]");
    }
    if (cfg.crop_padding < 0 || cfg.hflip_prob < 0.0 || cfg.hflip_prob > 1.0) {
        raise(Errc::InvalidParam, "invalid visual augmentation parameters");
    }
    const int pad = cfg.crop_padding;
    const int off_y = static_cast<int>(sample_uniform(rng, 0.0, static_cast<double>(2 * pad + 1)));
    const int off_x = static_cast<int>(sample_uniform(rng, 0.0, static_cast<double>(2 * pad + 1)));
    const bool flip = sample_uniform(rng, 0.0, 1.0) < cfg.hflip_prob;

    ImageTensor out(x.channels(), x.height(), x.width(), true);
    for (int c = 0; c < x.channels(); ++c) {
        for (int y = 0; y < x.height(); ++y) {
            const int src_y = y + off_y - pad;  // position in the padded frame
            for (int u = 0; u < x.width(); ++u) {
                const int col = flip ? x.width() - 1 - u : u;
                const int src_x = col + off_x - pad;
                float v = 0.0f;
                if (src_y >= 0 && src_y < x.height() && src_x >= 0 && src_x < x.width()) {
                    v = x.at(c, src_y, src_x);
                }
                out.at(c, y, u) = v;
            }
        }
    }
    return out;
}

}  // namespace afa
