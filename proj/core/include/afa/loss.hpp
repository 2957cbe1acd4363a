#pragma once

#include <vector>

#include "afa/nn.hpp"

namespace afa::nn {

struct LossValue {
    double value = 0.0;
    Matrix dlogits;  // gradient w.r.t. the logits
};

// Mean over the batch of -log softmax(logits)[label]. Gradient is
// (softmax - onehot) / N. Labels outside [0, K) raise InvalidLabel.
LossValue ce_loss(const Matrix& logits, const std::vector<int>& labels);

struct AceValue {
    double value = 0.0;
    Matrix dlogits_main;
    Matrix dlogits_aux;
};

// Average of the two cross entropies; each logit set receives half of its
// own CE gradient.
AceValue ace_loss(const Matrix& logits_main, const Matrix& logits_aux,
                  const std::vector<int>& labels);

// Row-wise softmax.
Matrix softmax(const Matrix& logits);

// Jensen-Shannon divergence of three row-stochastic matrices, averaged over
// the batch: mean_n (1/3) sum_k KL(p_k || m), m the row mean of the three.
// Rows must be nonnegative and sum to 1 within 1e-6 (NotADistribution).
double jsd_loss(const Matrix& p_clean, const Matrix& p_a1, const Matrix& p_a2);

struct JsdValue {
    double value = 0.0;
    Matrix dp_clean, dp_a1, dp_a2;  // gradients w.r.t. the probability rows
};

JsdValue jsd_loss_grad(const Matrix& p_clean, const Matrix& p_a1, const Matrix& p_a2);

// Chain rule through a softmax: given probabilities and a gradient w.r.t.
// them, returns the gradient w.r.t. the logits.
Matrix softmax_backward(const Matrix& probs, const Matrix& dprobs);

}  // namespace afa::nn
