#include "afa/nn.hpp"

#include <cmath>

namespace afa::nn {

namespace {

int conv_out_extent(int in, int kernel, int stride) {
    const int pad = kernel / 2;
    return (in + 2 * pad - kernel) / stride + 1;
}

void conv_forward(const ConvLayer& layer, const Act& in, Act& out) {
    const int pad = layer.kernel / 2;
    for (int n = 0; n < in.n; ++n) {
        for (int oc = 0; oc < layer.out_channels; ++oc) {
            const std::size_t wbase =
                static_cast<std::size_t>(oc) * layer.in_channels * layer.kernel * layer.kernel;
            for (int oy = 0; oy < out.h; ++oy) {
                for (int ox = 0; ox < out.w; ++ox) {
                    double acc = 0.0;
                    for (int ic = 0; ic < layer.in_channels; ++ic) {
                        for (int ky = 0; ky < layer.kernel; ++ky) {
                            const int iy = oy * layer.stride + ky - pad;
                            if (iy < 0 || iy >= in.h) continue;
                            const std::size_t wrow =
                                wbase + (static_cast<std::size_t>(ic) * layer.kernel + ky) *
                                            layer.kernel;
                            const std::size_t irow = in.index(n, ic, iy, 0);
                            for (int kx = 0; kx < layer.kernel; ++kx) {
                                const int ix = ox * layer.stride + kx - pad;
                                if (ix < 0 || ix >= in.w) continue;
                                acc += static_cast<double>(layer.weight[wrow + kx]) *
                                       in.v[irow + ix];
                            }
                        }
                    }
                    out.at(n, oc, oy, ox) = acc;
                }
            }
        }
    }
}

void conv_backward(ConvLayer& layer, const Act& in, const Act& dout, Act& din) {
    const int pad = layer.kernel / 2;
    for (int n = 0; n < in.n; ++n) {
        for (int oc = 0; oc < layer.out_channels; ++oc) {
            const std::size_t wbase =
                static_cast<std::size_t>(oc) * layer.in_channels * layer.kernel * layer.kernel;
            for (int oy = 0; oy < dout.h; ++oy) {
                for (int ox = 0; ox < dout.w; ++ox) {
                    const double g = dout.at(n, oc, oy, ox);
                    if (g == 0.0) continue;
                    for (int ic = 0; ic < layer.in_channels; ++ic) {
                        for (int ky = 0; ky < layer.kernel; ++ky) {
                            const int iy = oy * layer.stride + ky - pad;
                            if (iy < 0 || iy >= in.h) continue;
                            const std::size_t wrow =
                                wbase + (static_cast<std::size_t>(ic) * layer.kernel + ky) *
                                            layer.kernel;
                            const std::size_t irow = in.index(n, ic, iy, 0);
                            for (int kx = 0; kx < layer.kernel; ++kx) {
                                const int ix = ox * layer.stride + kx - pad;
                                if (ix < 0 || ix >= in.w) continue;
                                layer.grad[wrow + kx] += g * in.v[irow + ix];
                                din.v[irow + ix] +=
                                    g * static_cast<double>(layer.weight[wrow + kx]);
                            }
                        }
                    }
                }
            }
        }
    }
}

// Training-mode normalization with batch statistics; per-channel mean and
// biased variance over N*H*W. Updates the tagged branch's running stats
// (unbiased variance for the running estimate).
void norm_forward_train(DualNormLayer& layer, Branch branch, const Act& in, Act& out,
                        NormCache* cache) {
    const std::size_t spatial = static_cast<std::size_t>(in.h) * in.w;
    const double count = static_cast<double>(in.n) * static_cast<double>(spatial);
    auto& gamma = branch == Branch::Main ? layer.gamma_main : layer.gamma_aux;
    auto& beta = branch == Branch::Main ? layer.beta_main : layer.beta_aux;
    auto& run_mean = branch == Branch::Main ? layer.run_mean_main : layer.run_mean_aux;
    auto& run_var = branch == Branch::Main ? layer.run_var_main : layer.run_var_aux;

    if (cache) {
        cache->n = in.n;
        cache->c = in.c;
        cache->h = in.h;
        cache->w = in.w;
        cache->xhat.assign(in.v.size(), 0.0);
        cache->inv_std.assign(static_cast<std::size_t>(in.c), 0.0);
    }

    for (int c = 0; c < in.c; ++c) {
        double mean = 0.0;
        for (int n = 0; n < in.n; ++n) {
            const std::size_t base = in.index(n, c, 0, 0);
            for (std::size_t i = 0; i < spatial; ++i) mean += in.v[base + i];
        }
        mean /= count;
        double var = 0.0;
        for (int n = 0; n < in.n; ++n) {
            const std::size_t base = in.index(n, c, 0, 0);
            for (std::size_t i = 0; i < spatial; ++i) {
                const double d = in.v[base + i] - mean;
                var += d * d;
            }
        }
        var /= count;

        const double inv_std = 1.0 / std::sqrt(var + layer.epsilon);
        const double g = static_cast<double>(gamma[c]);
        const double b = static_cast<double>(beta[c]);
        for (int n = 0; n < in.n; ++n) {
            const std::size_t base = in.index(n, c, 0, 0);
            for (std::size_t i = 0; i < spatial; ++i) {
                const double xhat = (in.v[base + i] - mean) * inv_std;
                out.v[base + i] = g * xhat + b;
                if (cache) cache->xhat[base + i] = xhat;
            }
        }
        if (cache) cache->inv_std[c] = inv_std;

        const double unbiased = count > 1.0 ? var * count / (count - 1.0) : var;
        run_mean[c] = static_cast<float>((1.0 - layer.momentum) * run_mean[c] +
                                         layer.momentum * mean);
        run_var[c] = static_cast<float>((1.0 - layer.momentum) * run_var[c] +
                                        layer.momentum * unbiased);
    }
}

// Evaluation-mode normalization: main running statistics and affine only.
void norm_forward_eval(const DualNormLayer& layer, const Act& in, Act& out) {
    const std::size_t spatial = static_cast<std::size_t>(in.h) * in.w;
    for (int c = 0; c < in.c; ++c) {
        const double inv_std =
            1.0 / std::sqrt(static_cast<double>(layer.run_var_main[c]) + layer.epsilon);
        const double mean = static_cast<double>(layer.run_mean_main[c]);
        const double g = static_cast<double>(layer.gamma_main[c]);
        const double b = static_cast<double>(layer.beta_main[c]);
        for (int n = 0; n < in.n; ++n) {
            const std::size_t base = in.index(n, c, 0, 0);
            for (std::size_t i = 0; i < spatial; ++i) {
                out.v[base + i] = g * (in.v[base + i] - mean) * inv_std + b;
            }
        }
    }
}

void norm_backward(DualNormLayer& layer, Branch branch, const NormCache& cache, const Act& dout,
                   Act& din) {
    const std::size_t spatial = static_cast<std::size_t>(cache.h) * cache.w;
    const double count = static_cast<double>(cache.n) * static_cast<double>(spatial);
    const auto& gamma = branch == Branch::Main ? layer.gamma_main : layer.gamma_aux;
    auto& grad_gamma = branch == Branch::Main ? layer.grad_gamma_main : layer.grad_gamma_aux;
    auto& grad_beta = branch == Branch::Main ? layer.grad_beta_main : layer.grad_beta_aux;

    for (int c = 0; c < cache.c; ++c) {
        double sum_dy = 0.0;
        double sum_dy_xhat = 0.0;
        for (int n = 0; n < cache.n; ++n) {
            const std::size_t base = dout.index(n, c, 0, 0);
            for (std::size_t i = 0; i < spatial; ++i) {
                sum_dy += dout.v[base + i];
                sum_dy_xhat += dout.v[base + i] * cache.xhat[base + i];
            }
        }
        grad_gamma[c] += sum_dy_xhat;
        grad_beta[c] += sum_dy;

        const double g = static_cast<double>(gamma[c]);
        const double inv_std = cache.inv_std[c];
        const double mean_dy = sum_dy / count;
        const double mean_dy_xhat = sum_dy_xhat / count;
        for (int n = 0; n < cache.n; ++n) {
            const std::size_t base = dout.index(n, c, 0, 0);
            for (std::size_t i = 0; i < spatial; ++i) {
                din.v[base + i] = g * inv_std *
                                  (dout.v[base + i] - mean_dy -
                                   cache.xhat[base + i] * mean_dy_xhat);
            }
        }
    }
}

}  // namespace

ModelSpec ModelSpec::small_cnn(int in_channels, int image_size, int num_classes) {
    ModelSpec spec;
    spec.in_channels = in_channels;
    spec.image_size = image_size;
    spec.num_classes = num_classes;
    spec.blocks = {{16, 3, 1}, {32, 3, 2}, {64, 3, 2}};
    return spec;
}

Model::Model(const ModelSpec& spec, std::uint64_t init_seed) : spec_(spec) {
    if (spec.num_classes < 2) {
        raise(Errc::InvalidParam, "model needs at least two classes");
    }
    if (spec.blocks.empty()) {
        raise(Errc::InvalidParam, "model needs at least one conv block");
    }
    RngState rng(init_seed);
    int channels = spec.in_channels;
    int extent = spec.image_size;
    for (const ConvSpec& b : spec.blocks) {
        if (b.kernel % 2 == 0 || b.kernel < 1 || b.stride < 1 || b.out_channels < 1) {
            raise(Errc::InvalidParam, "conv blocks need odd kernel and positive extents");
        }
        ConvLayer conv;
        conv.in_channels = channels;
        conv.out_channels = b.out_channels;
        conv.kernel = b.kernel;
        conv.stride = b.stride;
        const std::size_t count = static_cast<std::size_t>(b.out_channels) * channels *
                                  b.kernel * b.kernel;
        conv.weight.resize(count);
        conv.grad.assign(count, 0.0);
        const double fan_in = static_cast<double>(channels) * b.kernel * b.kernel;
        const double stddev = std::sqrt(2.0 / fan_in);
        for (auto& w : conv.weight) {
            w = static_cast<float>(stddev * sample_gaussian(rng));
        }
        convs_.push_back(std::move(conv));

        DualNormLayer norm;
        norm.channels = b.out_channels;
        norm.gamma_main.assign(b.out_channels, 1.0f);
        norm.beta_main.assign(b.out_channels, 0.0f);
        norm.gamma_aux.assign(b.out_channels, 1.0f);
        norm.beta_aux.assign(b.out_channels, 0.0f);
        norm.run_mean_main.assign(b.out_channels, 0.0f);
        norm.run_var_main.assign(b.out_channels, 1.0f);
        norm.run_mean_aux.assign(b.out_channels, 0.0f);
        norm.run_var_aux.assign(b.out_channels, 1.0f);
        norm.grad_gamma_main.assign(b.out_channels, 0.0);
        norm.grad_beta_main.assign(b.out_channels, 0.0);
        norm.grad_gamma_aux.assign(b.out_channels, 0.0);
        norm.grad_beta_aux.assign(b.out_channels, 0.0);
        norms_.push_back(std::move(norm));

        channels = b.out_channels;
        extent = conv_out_extent(extent, b.kernel, b.stride);
        if (extent < 1) {
            raise(Errc::InvalidParam, "conv stack shrinks the image away");
        }
    }

    linear_.in_features = channels;
    linear_.out_features = spec.num_classes;
    linear_.weight.resize(static_cast<std::size_t>(spec.num_classes) * channels);
    linear_.bias.assign(spec.num_classes, 0.0f);
    linear_.grad_weight.assign(linear_.weight.size(), 0.0);
    linear_.grad_bias.assign(linear_.bias.size(), 0.0);
    const double stddev = std::sqrt(2.0 / static_cast<double>(channels));
    for (auto& w : linear_.weight) {
        w = static_cast<float>(stddev * sample_gaussian(rng));
    }
}

Matrix Model::forward(const std::vector<ImageTensor>& batch, Branch branch, bool training,
                      Tape* tape) {
    std::vector<const ImageTensor*> ptrs;
    ptrs.reserve(batch.size());
    for (const auto& img : batch) ptrs.push_back(&img);
    return forward(ptrs, branch, training, tape);
}

Matrix Model::forward(const std::vector<const ImageTensor*>& batch, Branch branch, bool training,
                      Tape* tape) {
    if (batch.empty()) {
        raise(Errc::InsufficientBatch, "empty batch");
    }
    if (training && batch.size() < 2) {
        raise(Errc::InsufficientBatch, "training batches need at least two samples");
    }
    const int n = static_cast<int>(batch.size());
    for (const ImageTensor* img : batch) {
        if (img->channels() != spec_.in_channels || img->height() != spec_.image_size ||
            img->width() != spec_.image_size) {
            raise(Errc::ShapeMismatch, "batch image does not match the model input shape");
        }
    }

    if (tape) {
        *tape = Tape{};
        tape->recorded = true;
        tape->branch = branch;
    }

    Act act(n, spec_.in_channels, spec_.image_size, spec_.image_size);
    for (int i = 0; i < n; ++i) {
        const auto& vals = batch[i]->values();
        const std::size_t base = act.index(i, 0, 0, 0);
        for (std::size_t k = 0; k < vals.size(); ++k) {
            act.v[base + k] = static_cast<double>(vals[k]);
        }
    }

    for (std::size_t b = 0; b < convs_.size(); ++b) {
        const ConvLayer& conv = convs_[b];
        Act out(n, conv.out_channels, conv_out_extent(act.h, conv.kernel, conv.stride),
                conv_out_extent(act.w, conv.kernel, conv.stride));
        conv_forward(conv, act, out);
        if (tape) tape->conv_in.push_back(std::move(act));
        act = std::move(out);

        Act normed(act.n, act.c, act.h, act.w);
        if (training) {
            NormCache cache;
            norm_forward_train(norms_[b], branch, act, normed, tape ? &cache : nullptr);
            if (tape) tape->norm.push_back(std::move(cache));
        } else {
            norm_forward_eval(norms_[b], act, normed);
        }
        act = std::move(normed);

        if (tape) tape->relu_in.push_back(act);
        for (double& v : act.v) v = v > 0.0 ? v : 0.0;
    }

    // global average pool
    Matrix features(n, act.c);
    const double inv_spatial = 1.0 / (static_cast<double>(act.h) * act.w);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < act.c; ++c) {
            double acc = 0.0;
            const std::size_t base = act.index(i, c, 0, 0);
            for (int k = 0; k < act.h * act.w; ++k) acc += act.v[base + k];
            features.at(i, c) = acc * inv_spatial;
        }
    }
    if (tape) {
        tape->gap_in = std::move(act);
        tape->linear_in = features;
    }

    Matrix logits(n, linear_.out_features);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < linear_.out_features; ++k) {
            double acc = static_cast<double>(linear_.bias[k]);
            const std::size_t wbase = static_cast<std::size_t>(k) * linear_.in_features;
            for (int f = 0; f < linear_.in_features; ++f) {
                acc += static_cast<double>(linear_.weight[wbase + f]) * features.at(i, f);
            }
            logits.at(i, k) = acc;
        }
    }
    return logits;
}

void Model::backward(const Tape& tape, const Matrix& dlogits) {
    if (!tape.recorded) {
        raise(Errc::NoTape, "backward without a recorded forward");
    }
    if (dlogits.rows != tape.linear_in.rows || dlogits.cols != linear_.out_features) {
        raise(Errc::ShapeMismatch, "gradient shape does not match the recorded logits");
    }
    const int n = dlogits.rows;

    // linear head
    Matrix dfeatures(n, linear_.in_features);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < linear_.out_features; ++k) {
            const double g = dlogits.at(i, k);
            if (g == 0.0) continue;
            linear_.grad_bias[k] += g;
            const std::size_t wbase = static_cast<std::size_t>(k) * linear_.in_features;
            for (int f = 0; f < linear_.in_features; ++f) {
                linear_.grad_weight[wbase + f] += g * tape.linear_in.at(i, f);
                dfeatures.at(i, f) += g * static_cast<double>(linear_.weight[wbase + f]);
            }
        }
    }

    // global average pool
    const Act& pooled = tape.gap_in;
    Act dact(pooled.n, pooled.c, pooled.h, pooled.w);
    const double inv_spatial = 1.0 / (static_cast<double>(pooled.h) * pooled.w);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < pooled.c; ++c) {
            const double g = dfeatures.at(i, c) * inv_spatial;
            const std::size_t base = dact.index(i, c, 0, 0);
            for (int k = 0; k < pooled.h * pooled.w; ++k) dact.v[base + k] = g;
        }
    }

    for (int b = static_cast<int>(convs_.size()) - 1; b >= 0; --b) {
        // relu
        const Act& pre = tape.relu_in[b];
        for (std::size_t i = 0; i < dact.v.size(); ++i) {
            if (pre.v[i] <= 0.0) dact.v[i] = 0.0;
        }

        // dual-norm
        Act dnorm_in(pre.n, pre.c, pre.h, pre.w);
        norm_backward(norms_[b], tape.branch, tape.norm[b], dact, dnorm_in);

        // conv
        const Act& conv_in = tape.conv_in[b];
        Act din(conv_in.n, conv_in.c, conv_in.h, conv_in.w);
        conv_backward(convs_[b], conv_in, dnorm_in, din);
        dact = std::move(din);
    }
}

void Model::zero_grad() {
    for (auto& conv : convs_) {
        std::fill(conv.grad.begin(), conv.grad.end(), 0.0);
    }
    for (auto& norm : norms_) {
        std::fill(norm.grad_gamma_main.begin(), norm.grad_gamma_main.end(), 0.0);
        std::fill(norm.grad_beta_main.begin(), norm.grad_beta_main.end(), 0.0);
        std::fill(norm.grad_gamma_aux.begin(), norm.grad_gamma_aux.end(), 0.0);
        std::fill(norm.grad_beta_aux.begin(), norm.grad_beta_aux.end(), 0.0);
    }
    std::fill(linear_.grad_weight.begin(), linear_.grad_weight.end(), 0.0);
    std::fill(linear_.grad_bias.begin(), linear_.grad_bias.end(), 0.0);
}

std::vector<ParamView> Model::parameters() {
    std::vector<ParamView> out;
    for (std::size_t b = 0; b < convs_.size(); ++b) {
        auto& conv = convs_[b];
        out.push_back({"conv" + std::to_string(b) + ".weight",
                       ParamRole::Weight,
                       {static_cast<std::uint32_t>(conv.out_channels),
                        static_cast<std::uint32_t>(conv.in_channels),
                        static_cast<std::uint32_t>(conv.kernel),
                        static_cast<std::uint32_t>(conv.kernel)},
                       &conv.weight,
                       &conv.grad});
        auto& norm = norms_[b];
        const std::vector<std::uint32_t> cdims = {static_cast<std::uint32_t>(norm.channels)};
        const std::string prefix = "norm" + std::to_string(b);
        out.push_back({prefix + ".gamma.main", ParamRole::MainAffine, cdims, &norm.gamma_main,
                       &norm.grad_gamma_main});
        out.push_back({prefix + ".beta.main", ParamRole::MainAffine, cdims, &norm.beta_main,
                       &norm.grad_beta_main});
        out.push_back({prefix + ".gamma.aux", ParamRole::AuxAffine, cdims, &norm.gamma_aux,
                       &norm.grad_gamma_aux});
        out.push_back({prefix + ".beta.aux", ParamRole::AuxAffine, cdims, &norm.beta_aux,
                       &norm.grad_beta_aux});
    }
    out.push_back({"linear.weight",
                   ParamRole::Weight,
                   {static_cast<std::uint32_t>(linear_.out_features),
                    static_cast<std::uint32_t>(linear_.in_features)},
                   &linear_.weight,
                   &linear_.grad_weight});
    out.push_back({"linear.bias",
                   ParamRole::Weight,
                   {static_cast<std::uint32_t>(linear_.out_features)},
                   &linear_.bias,
                   &linear_.grad_bias});
    return out;
}

std::vector<StatView> Model::statistics() {
    std::vector<StatView> out;
    for (std::size_t b = 0; b < norms_.size(); ++b) {
        auto& norm = norms_[b];
        const std::vector<std::uint32_t> cdims = {static_cast<std::uint32_t>(norm.channels)};
        const std::string prefix = "norm" + std::to_string(b);
        out.push_back({prefix + ".mean.main", Branch::Main, cdims, &norm.run_mean_main});
        out.push_back({prefix + ".var.main", Branch::Main, cdims, &norm.run_var_main});
        out.push_back({prefix + ".mean.aux", Branch::Aux, cdims, &norm.run_mean_aux});
        out.push_back({prefix + ".var.aux", Branch::Aux, cdims, &norm.run_var_aux});
    }
    return out;
}

std::uint64_t Model::norm_state_hash(Branch branch) const {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    auto mix = [&hash](const std::vector<float>& v) {
        const std::uint64_t h = fnv1a(v.data(), v.size() * sizeof(float));
        hash = detail::mix64(hash ^ h);
    };
    for (const auto& norm : norms_) {
        if (branch == Branch::Main) {
            mix(norm.gamma_main);
            mix(norm.beta_main);
            mix(norm.run_mean_main);
            mix(norm.run_var_main);
        } else {
            mix(norm.gamma_aux);
            mix(norm.beta_aux);
            mix(norm.run_mean_aux);
            mix(norm.run_var_aux);
        }
    }
    return hash;
}

std::vector<NormDivergence> Model::bn_divergence_report() const {
    std::vector<NormDivergence> out;
    for (std::size_t b = 0; b < norms_.size(); ++b) {
        const auto& norm = norms_[b];
        NormDivergence d;
        d.depth = static_cast<int>(b);
        double wsum = 0.0;
        double bsum = 0.0;
        for (int c = 0; c < norm.channels; ++c) {
            wsum += std::abs(static_cast<double>(norm.gamma_main[c]) - norm.gamma_aux[c]);
            bsum += std::abs(static_cast<double>(norm.beta_main[c]) - norm.beta_aux[c]);
        }
        d.weight_mad = wsum / norm.channels;
        d.bias_mad = bsum / norm.channels;
        out.push_back(d);
    }
    return out;
}

std::vector<ConvWeightNorm> Model::weight_norm_report() const {
    std::vector<ConvWeightNorm> out;
    for (std::size_t b = 0; b < convs_.size(); ++b) {
        out.push_back({static_cast<int>(b), l2_norm(convs_[b].weight)});
    }
    return out;
}

std::vector<int> predict(const Matrix& logits) {
    std::vector<int> out(static_cast<std::size_t>(logits.rows));
    for (int i = 0; i < logits.rows; ++i) {
        int best = 0;
        for (int k = 1; k < logits.cols; ++k) {
            if (logits.at(i, k) > logits.at(i, best)) best = k;
        }
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

}  // namespace afa::nn
