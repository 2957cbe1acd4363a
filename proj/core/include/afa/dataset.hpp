#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "afa/tensor.hpp"

namespace afa {

// Procedural class families. Class identity is carried (partly) by spatial
// frequency so frequency-domain augmentation and heatmaps have structure to
// bite on: checkerboard period, ring period and bar orientation all vary by
// class.
enum class SynthFamily { Checkerboard, OrientedBars, Rings };

struct SyntheticSpec {
    int image_size = 32;
    int num_classes = 6;
    int samples_per_class = 80;
    int channels = 3;
    SynthFamily family = SynthFamily::Checkerboard;
    double noise = 0.05;  // per-value gaussian noise floor
    std::uint64_t seed = 0;
};

struct Dataset {
    std::vector<ImageTensor> images;  // clamped
    std::vector<int> labels;
    std::string split;
};

// Deterministic generation: every sample is a pure function of
// (seed, class, index). Samples with index % 5 == 4 go to the test split,
// the rest to train, so splits are disjoint and class-balanced.
std::pair<Dataset, Dataset> synth_dataset(const SyntheticSpec& spec);

SynthFamily parse_family(const std::string& name);
std::string family_name(SynthFamily family);

}  // namespace afa
