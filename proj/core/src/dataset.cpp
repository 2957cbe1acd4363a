#include "afa/dataset.hpp"

#include <cmath>

#include "afa/rng.hpp"

namespace afa {

namespace {

// One pattern value in [0.1, 0.9] before noise.
double pattern_value(SynthFamily family, int klass, int num_classes, int u, int v, int size,
                     double phase_u, double phase_v) {
    const double fu = static_cast<double>(u);
    const double fv = static_cast<double>(v);
    const double m = static_cast<double>(size);
    switch (family) {
        case SynthFamily::Checkerboard: {
            const double freq = 1.0 + klass;  // cycles per image
            const double su = std::sin(2.0 * M_PI * freq * (fu + phase_u) / m);
            const double sv = std::sin(2.0 * M_PI * freq * (fv + phase_v) / m);
            return 0.5 + 0.4 * (su * sv >= 0.0 ? 1.0 : -1.0);
        }
        case SynthFamily::OrientedBars: {
            const double theta = M_PI * static_cast<double>(klass) / num_classes;
            const double proj = fu * std::cos(theta) + fv * std::sin(theta);
            return 0.5 + 0.4 * std::sin(2.0 * M_PI * 4.0 * (proj + phase_u) / m);
        }
        case SynthFamily::Rings: {
            const double cx = m / 2.0 + phase_u;
            const double cy = m / 2.0 + phase_v;
            const double r = std::hypot(fu - cx, fv - cy);
            const double freq = 2.0 + klass;
            return 0.5 + 0.4 * std::sin(2.0 * M_PI * freq * r / m);
        }
    }
    return 0.5;
}

ImageTensor make_sample(const SyntheticSpec& spec, int klass, int index) {
    RngState rng = RngState(spec.seed).split(
        fnv1a("sample") ^ (static_cast<std::uint64_t>(klass) << 32 |
                           static_cast<std::uint64_t>(index)));
    const double jitter = spec.family == SynthFamily::Rings
                              ? spec.image_size / 8.0
                              : static_cast<double>(spec.image_size);
    const double phase_u = sample_uniform(rng, 0.0, jitter);
    const double phase_v = sample_uniform(rng, 0.0, jitter);

    ImageTensor img(spec.channels, spec.image_size, spec.image_size, false);
    for (int c = 0; c < spec.channels; ++c) {
        for (int v = 0; v < spec.image_size; ++v) {
            for (int u = 0; u < spec.image_size; ++u) {
                double val = pattern_value(spec.family, klass, spec.num_classes, u, v,
                                           spec.image_size, phase_u, phase_v);
                if (spec.noise > 0.0) {
                    val += spec.noise * sample_gaussian(rng);
                }
                img.at(c, v, u) = static_cast<float>(val);
            }
        }
    }
    return clamp01(img);
}

}  // namespace

std::pair<Dataset, Dataset> synth_dataset(const SyntheticSpec& spec) {
    if (spec.num_classes < 2) {
        raise(Errc::InvalidParam, "dataset needs at least two classes");
    }
    if (spec.image_size < 2 || spec.samples_per_class < 1) {
        raise(Errc::InvalidParam, "dataset extents must be positive");
    }
    if (spec.channels != 1 && spec.channels != 3) {
        raise(Errc::InvalidParam, "dataset channels must be 1 or 3");
    }
    Dataset train{{}, {}, "train"};
    Dataset test{{}, {}, "test"};
    for (int klass = 0; klass < spec.num_classes; ++klass) {
        for (int index = 0; index < spec.samples_per_class; ++index) {
            Dataset& target = (index % 5 == 4) ? test : train;
            target.images.push_back(make_sample(spec, klass, index));
            target.labels.push_back(klass);
        }
    }
    return {std::move(train), std::move(test)};
}

SynthFamily parse_family(const std::string& name) {
    if (name == "checkerboard") return SynthFamily::Checkerboard;
    if (name == "bars") return SynthFamily::OrientedBars;
    if (name == "rings") return SynthFamily::Rings;
    raise(Errc::InvalidConfig, "unknown dataset family: " + name);
}

std::string family_name(SynthFamily family) {
    switch (family) {
        case SynthFamily::Checkerboard: return "checkerboard";
        case SynthFamily::OrientedBars: return "bars";
        case SynthFamily::Rings: return "rings";
    }
    return "checkerboard";
}

}  // namespace afa
