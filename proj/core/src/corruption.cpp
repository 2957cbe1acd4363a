#include "afa/corruption.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <thread>

#include "afa/augment.hpp"
#include "afa/parallel.hpp"

namespace afa {

// ---------------------------------------------------------------------------
// Severity constants. One table per kind, index severity-1, strictly monotone
// in perturbation strength; severity 5 carries roughly 3x the perturbation
// energy of severity 1.
// ---------------------------------------------------------------------------
namespace {
constexpr std::array<double, 5> kGaussianSigma = {0.060, 0.075, 0.090, 0.105, 0.115};
constexpr std::array<double, 5> kShotPhotons = {900.0, 500.0, 350.0, 280.0, 230.0};
constexpr std::array<double, 5> kImpulseProb = {0.030, 0.050, 0.070, 0.090, 0.110};
constexpr std::array<double, 5> kBlurBlend = {0.550, 0.700, 0.800, 0.900, 1.000};
constexpr std::array<double, 5> kBrightnessShift = {0.100, 0.130, 0.150, 0.170, 0.180};
constexpr std::array<double, 5> kContrastGain = {0.700, 0.620, 0.550, 0.500, 0.450};
constexpr std::array<double, 5> kWaveStrength = {1.750, 2.200, 2.600, 3.000, 3.300};

void check_severity(int severity) {
    if (severity < 1 || severity > 5) {
        raise(Errc::InvalidParam, "severity must be in 1..5");
    }
}

ImageTensor gaussian_noise(const ImageTensor& x, double sigma, RngState& rng) {
    ImageTensor out = x;
    for (float& v : out.values()) {
        v = static_cast<float>(v + sigma * sample_gaussian(rng));
    }
    return clamp01(out);
}

ImageTensor shot_noise(const ImageTensor& x, double photons, RngState& rng) {
    // Gaussian approximation of Poisson(v * photons) / photons.
    ImageTensor out = x;
    for (float& v : out.values()) {
        const double lambda = std::max(0.0, static_cast<double>(v));
        v = static_cast<float>(lambda + std::sqrt(lambda / photons) * sample_gaussian(rng));
    }
    return clamp01(out);
}

ImageTensor impulse_noise(const ImageTensor& x, double prob, RngState& rng) {
    ImageTensor out = x;
    for (float& v : out.values()) {
        const double u = rng.next_double();
        if (u < prob * 0.5) {
            v = 0.0f;
        } else if (u < prob) {
            v = 1.0f;
        }
    }
    return clamp01(out);
}

ImageTensor box_blur(const ImageTensor& x, double blend) {
    ImageTensor out = x;
    for (int c = 0; c < x.channels(); ++c) {
        for (int y = 0; y < x.height(); ++y) {
            for (int u = 0; u < x.width(); ++u) {
                double acc = 0.0;
                for (int dy = -1; dy <= 1; ++dy) {
                    const int sy = std::min(x.height() - 1, std::max(0, y + dy));
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int sx = std::min(x.width() - 1, std::max(0, u + dx));
                        acc += x.at(c, sy, sx);
                    }
                }
                const double blurred = acc / 9.0;
                out.at(c, y, u) = static_cast<float>((1.0 - blend) * x.at(c, y, u) +
                                                     blend * blurred);
            }
        }
    }
    return clamp01(out);
}

ImageTensor brightness(const ImageTensor& x, double shift) {
    ImageTensor out = x;
    for (float& v : out.values()) v = static_cast<float>(v + shift);
    return clamp01(out);
}

ImageTensor contrast(const ImageTensor& x, double gain) {
    ImageTensor out = x;
    for (float& v : out.values()) v = static_cast<float>((v - 0.5) * gain + 0.5);
    return clamp01(out);
}

ImageTensor planar_wave(const ImageTensor& x, double sigma, RngState& rng) {
    ImageTensor out = x;
    for (int c = 0; c < x.channels(); ++c) {
        auto [f, omega] = sample_basis(rng, x.width());
        const RealGrid wave = make_wave(f, omega, x.width());
        out = add_wave(out, c, wave, sigma, true);
    }
    return out;
}

std::uint64_t stream_key(CorruptionKind kind, int severity, std::size_t index) {
    return (static_cast<std::uint64_t>(kind) << 40) ^
           (static_cast<std::uint64_t>(severity) << 32) ^ static_cast<std::uint64_t>(index);
}

}  // namespace

std::vector<CorruptionKind> all_corruption_kinds() {
    return {CorruptionKind::GaussianNoise, CorruptionKind::ShotNoise,
            CorruptionKind::ImpulseNoise, CorruptionKind::BoxBlur,
            CorruptionKind::Brightness,   CorruptionKind::Contrast,
            CorruptionKind::PlanarWave};
}

CorruptionKind parse_corruption(const std::string& name) {
    for (CorruptionKind kind : all_corruption_kinds()) {
        if (corruption_name(kind) == name) return kind;
    }
    raise(Errc::UnknownCorruption, "unknown corruption kind: " + name);
}

std::string corruption_name(CorruptionKind kind) {
    switch (kind) {
        case CorruptionKind::GaussianNoise: return "gaussian_noise";
        case CorruptionKind::ShotNoise: return "shot_noise";
        case CorruptionKind::ImpulseNoise: return "impulse_noise";
        case CorruptionKind::BoxBlur: return "box_blur";
        case CorruptionKind::Brightness: return "brightness";
        case CorruptionKind::Contrast: return "contrast";
        case CorruptionKind::PlanarWave: return "planar_wave";
    }
    raise(Errc::UnknownCorruption, "unmapped corruption kind");
}

bool temporally_related(CorruptionKind kind) {
    switch (kind) {
        case CorruptionKind::GaussianNoise:
        case CorruptionKind::ShotNoise:
        case CorruptionKind::ImpulseNoise:
            return false;
        default:
            return true;
    }
}

const std::array<double, 5>& severity_table(CorruptionKind kind) {
    switch (kind) {
        case CorruptionKind::GaussianNoise: return kGaussianSigma;
        case CorruptionKind::ShotNoise: return kShotPhotons;
        case CorruptionKind::ImpulseNoise: return kImpulseProb;
        case CorruptionKind::BoxBlur: return kBlurBlend;
        case CorruptionKind::Brightness: return kBrightnessShift;
        case CorruptionKind::Contrast: return kContrastGain;
        case CorruptionKind::PlanarWave: return kWaveStrength;
    }
    raise(Errc::UnknownCorruption, "unmapped corruption kind");
}

ImageTensor apply_corruption(const ImageTensor& x, CorruptionKind kind, int severity,
                             RngState& rng) {
    check_severity(severity);
    if (!x.clamped()) {
        raise(Errc::InvalidParam, "corruption input must be clamped");
    }
    const double p = severity_table(kind)[static_cast<std::size_t>(severity - 1)];
    switch (kind) {
        case CorruptionKind::GaussianNoise: return gaussian_noise(x, p, rng);
        case CorruptionKind::ShotNoise: return shot_noise(x, p, rng);
        case CorruptionKind::ImpulseNoise: return impulse_noise(x, p, rng);
        case CorruptionKind::BoxBlur: return box_blur(x, p);
        case CorruptionKind::Brightness: return brightness(x, p);
        case CorruptionKind::Contrast: return contrast(x, p);
        case CorruptionKind::PlanarWave: return planar_wave(x, p, rng);
    }
    raise(Errc::UnknownCorruption, "unmapped corruption kind");
}

std::vector<CorruptedSplit> generate_corruptions(const Dataset& dataset,
                                                 const std::vector<CorruptionKind>& kinds,
                                                 const RngState& rng, int threads) {
    if (dataset.images.empty()) {
        raise(Errc::EmptySplit, "cannot corrupt an empty dataset");
    }
    std::vector<CorruptedSplit> out;
    for (CorruptionKind kind : kinds) {
        for (int severity = 1; severity <= 5; ++severity) {
            CorruptedSplit split;
            split.kind = kind;
            split.severity = severity;
            split.images.resize(dataset.images.size());
            parallel_for(dataset.images.size(), threads, [&](std::size_t i) {
                RngState stream = rng.split(stream_key(kind, severity, i));
                split.images[i] = apply_corruption(dataset.images[i], kind, severity, stream);
            });
            out.push_back(std::move(split));
        }
    }
    return out;
}

PerturbationSequence build_perturbation_sequence(const Dataset& dataset, CorruptionKind kind,
                                                 const RngState& rng) {
    if (dataset.images.empty()) {
        raise(Errc::EmptySplit, "cannot build sequences from an empty dataset");
    }
    PerturbationSequence seq;
    seq.kind = kind;
    seq.temporally_related = temporally_related(kind);
    seq.frames.resize(dataset.images.size());
    for (std::size_t i = 0; i < dataset.images.size(); ++i) {
        auto& frames = seq.frames[i];
        frames.reserve(5);
        if (kind == CorruptionKind::PlanarWave) {
            // One wave per sequence; only the strength grows with severity.
            RngState stream = rng.split(stream_key(kind, 0, i));
            const ImageTensor& x = dataset.images[i];
            std::vector<RealGrid> waves;
            for (int c = 0; c < x.channels(); ++c) {
                auto [f, omega] = sample_basis(stream, x.width());
                waves.push_back(make_wave(f, omega, x.width()));
            }
            for (int severity = 1; severity <= 5; ++severity) {
                const double sigma = severity_table(kind)[static_cast<std::size_t>(severity - 1)];
                ImageTensor frame = x;
                for (int c = 0; c < x.channels(); ++c) {
                    frame = add_wave(frame, c, waves[static_cast<std::size_t>(c)], sigma, true);
                }
                frames.push_back(std::move(frame));
            }
        } else {
            for (int severity = 1; severity <= 5; ++severity) {
                RngState stream = rng.split(stream_key(kind, severity, i));
                frames.push_back(apply_corruption(dataset.images[i], kind, severity, stream));
            }
        }
    }
    return seq;
}

}  // namespace afa
