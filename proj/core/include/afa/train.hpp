#pragma once

#include "afa/augment.hpp"
#include "afa/dataset.hpp"
#include "afa/loss.hpp"
#include "afa/optim.hpp"

namespace afa::nn {

// Baseline: crop+flip through the main branch, plain CE.
// AfaMain:  wave noise on top of crop+flip, still main-only, plain CE.
// AuxAce:   crop+flip through main, wave noise through aux, averaged CE.
// AuxJsd:   clean through main plus two independent wave draws through aux,
//           CE(clean) + jsd_coeff * JSD over the three softmax outputs.
enum class TrainMode { Baseline, AfaMain, AuxAce, AuxJsd };

struct TrainSettings {
    TrainMode mode = TrainMode::AuxAce;
    AfaConfig afa;
    VisualAugConfig visual;
    double jsd_coeff = 10.0;
    int batch_size = 32;
};

struct EpochStats {
    double loss = 0.0;      // mean over samples
    double accuracy = 0.0;  // main-branch training accuracy
};

// One pass over the dataset. Bit-reproducible for a fixed rng state: the
// draw order is (1) one Fisher-Yates shuffle of the sample order, then per
// image in batch order, (2) visual-augmentation draws where the mode uses
// them, (3) wave draws in channel order, one image at a time (two augmented
// copies back to back in AuxJsd mode).
EpochStats train_epoch(Model& model, const Dataset& dataset, const TrainSettings& settings,
                       SgdOptimizer& optim, RngState& rng);

TrainMode parse_train_mode(const std::string& name);
std::string train_mode_name(TrainMode mode);

}  // namespace afa::nn
