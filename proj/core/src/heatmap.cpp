#include "afa/heatmap.hpp"

#include <cmath>

#include "afa/augment.hpp"
#include "afa/parallel.hpp"

namespace afa {

HeatmapResult fourier_heatmap(nn::Model& model, const std::vector<ImageTensor>& images,
                              const std::vector<int>& labels, const HeatmapSpec& spec,
                              const RngState& rng, int threads) {
    if (images.empty() || images.size() != labels.size()) {
        raise(Errc::EmptySplit, "heatmap needs a labeled dataset");
    }
    if (spec.v < 0.0) {
        raise(Errc::InvalidParam, "heatmap norm must be nonnegative");
    }
    if (spec.trials < 1) {
        raise(Errc::InvalidParam, "heatmap needs at least one trial");
    }
    const int size = images.front().width();
    if (spec.extent < 0 || spec.extent > size / 2) {
        raise(Errc::InvalidBin, "heatmap extent exceeds the frequency half-plane");
    }

    HeatmapResult result;
    result.extent = spec.extent;
    result.errors = RealGrid(spec.extent + 1, 2 * spec.extent + 1);
    result.clean_error = classification_error(model, images, labels);

    const int cols = 2 * spec.extent + 1;
    const std::size_t cells = static_cast<std::size_t>(spec.extent + 1) * cols;

    // Eval-mode forwards only read model state, so cells can share the model;
    // each cell writes its own grid slot from its own derived stream.
    parallel_for(cells, threads, [&](std::size_t cell) {
        const int row = static_cast<int>(cell) / cols;
        const int col = static_cast<int>(cell) % cols;
        const int freq_u = col - spec.extent;
        const int freq_v = row;
        const RealGrid basis = heatmap_basis(freq_u, freq_v, size);

        RngState stream = rng.split(0x48454154ULL ^ cell);
        double error_sum = 0.0;
        for (int trial = 0; trial < spec.trials; ++trial) {
            std::vector<ImageTensor> perturbed;
            perturbed.reserve(images.size());
            for (const ImageTensor& x : images) {
                ImageTensor out = x;
                for (int c = 0; c < x.channels(); ++c) {
                    const double r = sample_uniform(stream, -1.0, 1.0);
                    out = add_wave(out, c, basis, r * spec.v, true);
                }
                perturbed.push_back(std::move(out));
            }
            error_sum += classification_error(model, perturbed, labels);
        }
        result.errors.at(row, col) = error_sum / spec.trials;
    });
    return result;
}

}  // namespace afa
