#include "afa/optim.hpp"

namespace afa::nn {

void SgdOptimizer::step(std::vector<ParamView>& params) {
    if (momentum_.empty()) {
        momentum_.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) {
            momentum_[i].assign(params[i].values->size(), 0.0);
        }
    }
    if (momentum_.size() != params.size()) {
        raise(Errc::ShapeMismatch, "optimizer state does not match the parameter list");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        ParamView& p = params[i];
        auto& buf = momentum_[i];
        if (buf.size() != p.values->size() || p.grads->size() != p.values->size()) {
            raise(Errc::ShapeMismatch, "parameter/gradient extent changed between steps");
        }
        const bool decay_exempt = p.role != ParamRole::Weight;
        const double wd = decay_exempt ? 0.0 : cfg_.weight_decay;
        for (std::size_t k = 0; k < buf.size(); ++k) {
            double g = (*p.grads)[k] + wd * static_cast<double>((*p.values)[k]);
            if (cfg_.momentum != 0.0) {
                buf[k] = cfg_.momentum * buf[k] + g;
                g = cfg_.nesterov ? g + cfg_.momentum * buf[k] : buf[k];
            }
            (*p.values)[k] = static_cast<float>(static_cast<double>((*p.values)[k]) -
                                                cfg_.lr * g);
        }
    }
}

void sgd_step(SgdOptimizer& optim, std::vector<ParamView>& params) { optim.step(params); }

}  // namespace afa::nn
