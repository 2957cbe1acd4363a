#pragma once

#include <array>
#include <string>
#include <vector>

#include "afa/dataset.hpp"
#include "afa/rng.hpp"

namespace afa {

enum class CorruptionKind {
    GaussianNoise,
    ShotNoise,
    ImpulseNoise,
    BoxBlur,
    Brightness,
    Contrast,
    PlanarWave,
};

std::vector<CorruptionKind> all_corruption_kinds();
CorruptionKind parse_corruption(const std::string& name);  // UnknownCorruption otherwise
std::string corruption_name(CorruptionKind kind);

// Noise kinds redraw independently per frame; the parametric kinds form a
// temporally coherent family across severities.
bool temporally_related(CorruptionKind kind);

// Severity tables (index severity-1). Exposed so tests can check
// monotonicity against the implementation's own constants.
const std::array<double, 5>& severity_table(CorruptionKind kind);

// Applies one corruption at severity 1..5. Deterministic given the rng
// state; parametric kinds consume no draws.
ImageTensor apply_corruption(const ImageTensor& x, CorruptionKind kind, int severity,
                             RngState& rng);

// One corrupted copy of a dataset split at a fixed (kind, severity).
struct CorruptedSplit {
    CorruptionKind kind = CorruptionKind::GaussianNoise;
    int severity = 1;
    std::vector<ImageTensor> images;
};

// Full |kinds| x 5 family. Each image's stream is split from the passed
// state by (kind, severity, index), so results do not depend on evaluation
// order or on which other kinds are requested.
std::vector<CorruptedSplit> generate_corruptions(const Dataset& dataset,
                                                 const std::vector<CorruptionKind>& kinds,
                                                 const RngState& rng, int threads = 1);

// m sequences (one per image) of n = 5 frames at increasing severity. The
// planar-wave kind keeps one sampled wave per sequence and only grows its
// strength; noise kinds redraw per frame.
struct PerturbationSequence {
    CorruptionKind kind = CorruptionKind::GaussianNoise;
    bool temporally_related = false;
    std::vector<std::vector<ImageTensor>> frames;  // [sequence][frame]
};

PerturbationSequence build_perturbation_sequence(const Dataset& dataset, CorruptionKind kind,
                                                 const RngState& rng);

}  // namespace afa
