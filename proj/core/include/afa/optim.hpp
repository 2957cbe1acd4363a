#pragma once

#include <vector>

#include "afa/nn.hpp"

namespace afa::nn {

struct SgdConfig {
    double lr = 0.05;
    double momentum = 0.9;
    bool nesterov = true;
    double weight_decay = 0.0005;
};

// SGD with (optionally Nesterov) momentum. Weight decay is added to the
// gradient for every parameter except dual-norm affine ones, which are
// exempt by role. Buffers are keyed by parameter order, so the same
// parameter list must be passed on every step.
class SgdOptimizer {
  public:
    explicit SgdOptimizer(SgdConfig cfg) : cfg_(cfg) {}

    const SgdConfig& config() const noexcept { return cfg_; }
    void set_lr(double lr) noexcept { cfg_.lr = lr; }

    void step(std::vector<ParamView>& params);

  private:
    SgdConfig cfg_;
    std::vector<std::vector<double>> momentum_;  // one buffer per parameter
};

void sgd_step(SgdOptimizer& optim, std::vector<ParamView>& params);

}  // namespace afa::nn
