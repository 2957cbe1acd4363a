#pragma once

#include "afa/metrics.hpp"
#include "afa/wave.hpp"

namespace afa {

// Error grid over single-frequency perturbations X + r*v*U(i,j). The grid
// covers the upper frequency half-plane: i in [-extent, extent] columns,
// j in [0, extent] rows; the lower half-plane mirrors it by conjugate
// symmetry. r is drawn per image and channel from U[-1, 1].
struct HeatmapSpec {
    int extent = 16;   // must be <= M/2
    double v = 8.0;    // perturbation norm; 0 reproduces the clean error
    int trials = 1;    // fresh r draws per trial, errors averaged
};

struct HeatmapResult {
    int extent = 0;
    RealGrid errors;          // rows j = 0..extent, cols i = -extent..extent
    double clean_error = 0.0;

    double cell(int freq_u, int freq_v) const {
        return errors.at(freq_v, freq_u + extent);
    }
};

HeatmapResult fourier_heatmap(nn::Model& model, const std::vector<ImageTensor>& images,
                              const std::vector<int>& labels, const HeatmapSpec& spec,
                              const RngState& rng, int threads = 1);

}  // namespace afa
