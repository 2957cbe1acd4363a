#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "afa/rng.hpp"
#include "afa/tensor.hpp"

namespace afa::nn {

// Which normalization branch a forward pass feeds. Evaluation always reads
// the main branch's running statistics, whatever tag is passed.
enum class Branch { Main, Aux };

struct ConvSpec {
    int out_channels = 16;
    int kernel = 3;   // odd; padding is kernel/2 so stride 1 preserves extent
    int stride = 1;
};

struct ModelSpec {
    int in_channels = 3;
    int image_size = 32;
    int num_classes = 10;
    std::vector<ConvSpec> blocks;  // conv -> dual-norm -> relu per block

    // 3 blocks, 16/32/64 channels, strides 1/2/2, global pool, linear head.
    static ModelSpec small_cnn(int in_channels, int image_size, int num_classes);
};

// Row-major N x K matrix of doubles (logits, probabilities, gradients).
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), values(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

// N x C x H x W activation block, double precision.
struct Act {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<double> v;

    Act() = default;
    Act(int n_, int c_, int h_, int w_)
        : n(n_), c(c_), h(h_), w(w_),
          v(static_cast<std::size_t>(n_) * c_ * h_ * w_, 0.0) {}

    std::size_t index(int in, int ic, int iy, int ix) const {
        return ((static_cast<std::size_t>(in) * c + ic) * h + iy) * w + ix;
    }
    double& at(int in, int ic, int iy, int ix) { return v[index(in, ic, iy, ix)]; }
    double at(int in, int ic, int iy, int ix) const { return v[index(in, ic, iy, ix)]; }
};

enum class ParamRole { Weight, MainAffine, AuxAffine };

// Mutable view into one named parameter tensor and its gradient buffer.
struct ParamView {
    std::string name;
    ParamRole role;
    std::vector<std::uint32_t> dims;
    std::vector<float>* values;
    std::vector<double>* grads;
};

// View into one running-statistics vector (checkpointing, hashing).
struct StatView {
    std::string name;
    Branch branch;
    std::vector<std::uint32_t> dims;
    std::vector<float>* values;
};

struct ConvLayer {
    int in_channels = 0, out_channels = 0, kernel = 3, stride = 1;
    std::vector<float> weight;   // [oc][ic][ky][kx]
    std::vector<double> grad;
};

// Batch normalization with two independent (statistics, affine) sets. A
// training pass touches only the tagged branch; evaluation uses the main
// running statistics and affine unconditionally.
struct DualNormLayer {
    int channels = 0;
    double momentum = 0.1;  // weight of the new batch statistic
    double epsilon = 1e-5;
    std::vector<float> gamma_main, beta_main, gamma_aux, beta_aux;
    std::vector<float> run_mean_main, run_var_main, run_mean_aux, run_var_aux;
    std::vector<double> grad_gamma_main, grad_beta_main, grad_gamma_aux, grad_beta_aux;
};

struct LinearLayer {
    int in_features = 0, out_features = 0;
    std::vector<float> weight;  // [out][in]
    std::vector<float> bias;
    std::vector<double> grad_weight, grad_bias;
};

struct NormCache {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<double> xhat;
    std::vector<double> inv_std;  // per channel
};

// Everything backward needs from one recorded training forward.
struct Tape {
    bool recorded = false;
    Branch branch = Branch::Main;
    std::vector<Act> conv_in;
    std::vector<NormCache> norm;
    std::vector<Act> relu_in;  // dual-norm output, pre-activation
    Act gap_in;
    Matrix linear_in;
};

struct NormDivergence {
    int depth = 0;
    double weight_mad = 0.0;  // mean |gamma_main - gamma_aux|
    double bias_mad = 0.0;    // mean |beta_main - beta_aux|
};

struct ConvWeightNorm {
    int depth = 0;
    double norm = 0.0;
};

class Model {
  public:
    Model(const ModelSpec& spec, std::uint64_t init_seed);

    const ModelSpec& spec() const noexcept { return spec_; }

    // Training mode computes batch statistics (batch size >= 2, else
    // InsufficientBatch) and updates the tagged branch's running stats.
    // Pass a tape to make the pass differentiable via backward().
    Matrix forward(const std::vector<const ImageTensor*>& batch, Branch branch, bool training,
                   Tape* tape = nullptr);
    Matrix forward(const std::vector<ImageTensor>& batch, Branch branch, bool training,
                   Tape* tape = nullptr);

    // Accumulates parameter gradients for the tape's branch. Throws NoTape
    // when the tape was never recorded.
    void backward(const Tape& tape, const Matrix& dlogits);
    void zero_grad();

    std::vector<ParamView> parameters();
    std::vector<StatView> statistics();

    // Hash over the branch's running statistics and affine parameters.
    std::uint64_t norm_state_hash(Branch branch) const;

    std::vector<NormDivergence> bn_divergence_report() const;
    std::vector<ConvWeightNorm> weight_norm_report() const;

    const std::vector<ConvLayer>& conv_layers() const noexcept { return convs_; }
    const std::vector<DualNormLayer>& norm_layers() const noexcept { return norms_; }
    std::vector<DualNormLayer>& norm_layers() noexcept { return norms_; }
    const LinearLayer& head() const noexcept { return linear_; }

  private:
    ModelSpec spec_;
    std::vector<ConvLayer> convs_;
    std::vector<DualNormLayer> norms_;
    LinearLayer linear_;
};

// Argmax per row, ties to the lower class index.
std::vector<int> predict(const Matrix& logits);

}  // namespace afa::nn
