#include "afa/loss.hpp"

#include <algorithm>
#include <cmath>

namespace afa::nn {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows != b.rows || a.cols != b.cols) {
        raise(Errc::ShapeMismatch, what);
    }
}

void check_distribution(const Matrix& p, const char* what) {
    for (int i = 0; i < p.rows; ++i) {
        double sum = 0.0;
        for (int k = 0; k < p.cols; ++k) {
            const double v = p.at(i, k);
            if (v < 0.0) {
                raise(Errc::NotADistribution, std::string(what) + ": negative entry");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            raise(Errc::NotADistribution, std::string(what) + ": row does not sum to 1");
        }
    }
}

}  // namespace

Matrix softmax(const Matrix& logits) {
    Matrix out(logits.rows, logits.cols);
    for (int i = 0; i < logits.rows; ++i) {
        double max_logit = logits.at(i, 0);
        for (int k = 1; k < logits.cols; ++k) max_logit = std::max(max_logit, logits.at(i, k));
        double denom = 0.0;
        for (int k = 0; k < logits.cols; ++k) {
            const double e = std::exp(logits.at(i, k) - max_logit);
            out.at(i, k) = e;
            denom += e;
        }
        for (int k = 0; k < logits.cols; ++k) out.at(i, k) /= denom;
    }
    return out;
}

LossValue ce_loss(const Matrix& logits, const std::vector<int>& labels) {
    if (static_cast<int>(labels.size()) != logits.rows) {
        raise(Errc::ShapeMismatch, "one label per logits row required");
    }
    for (int y : labels) {
        if (y < 0 || y >= logits.cols) {
            raise(Errc::InvalidLabel, "label out of range");
        }
    }
    LossValue out;
    out.dlogits = Matrix(logits.rows, logits.cols);
    const double inv_n = 1.0 / static_cast<double>(logits.rows);
    double total = 0.0;
    for (int i = 0; i < logits.rows; ++i) {
        double max_logit = logits.at(i, 0);
        for (int k = 1; k < logits.cols; ++k) max_logit = std::max(max_logit, logits.at(i, k));
        double denom = 0.0;
        for (int k = 0; k < logits.cols; ++k) denom += std::exp(logits.at(i, k) - max_logit);
        const double log_denom = std::log(denom);
        total += -(logits.at(i, labels[i]) - max_logit - log_denom);
        for (int k = 0; k < logits.cols; ++k) {
            const double p = std::exp(logits.at(i, k) - max_logit) / denom;
            out.dlogits.at(i, k) = (p - (k == labels[i] ? 1.0 : 0.0)) * inv_n;
        }
    }
    out.value = total * inv_n;
    return out;
}

AceValue ace_loss(const Matrix& logits_main, const Matrix& logits_aux,
                  const std::vector<int>& labels) {
    check_same_shape(logits_main, logits_aux, "main and aux logits must share shape");
    LossValue main = ce_loss(logits_main, labels);
    LossValue aux = ce_loss(logits_aux, labels);
    AceValue out;
    out.value = 0.5 * (main.value + aux.value);
    out.dlogits_main = std::move(main.dlogits);
    out.dlogits_aux = std::move(aux.dlogits);
    for (double& v : out.dlogits_main.values) v *= 0.5;
    for (double& v : out.dlogits_aux.values) v *= 0.5;
    return out;
}

double jsd_loss(const Matrix& p_clean, const Matrix& p_a1, const Matrix& p_a2) {
    check_same_shape(p_clean, p_a1, "probability rows must share shape");
    check_same_shape(p_clean, p_a2, "probability rows must share shape");
    check_distribution(p_clean, "p_clean");
    check_distribution(p_a1, "p_a1");
    check_distribution(p_a2, "p_a2");

    double total = 0.0;
    for (int i = 0; i < p_clean.rows; ++i) {
        double row = 0.0;
        for (int k = 0; k < p_clean.cols; ++k) {
            const double m = (p_clean.at(i, k) + p_a1.at(i, k) + p_a2.at(i, k)) / 3.0;
            for (const Matrix* p : {&p_clean, &p_a1, &p_a2}) {
                const double v = p->at(i, k);
                if (v > 0.0) row += v * (std::log(v) - std::log(m)) / 3.0;
            }
        }
        total += row;
    }
    return total / static_cast<double>(p_clean.rows);
}

JsdValue jsd_loss_grad(const Matrix& p_clean, const Matrix& p_a1, const Matrix& p_a2) {
    JsdValue out;
    out.value = jsd_loss(p_clean, p_a1, p_a2);
    out.dp_clean = Matrix(p_clean.rows, p_clean.cols);
    out.dp_a1 = Matrix(p_clean.rows, p_clean.cols);
    out.dp_a2 = Matrix(p_clean.rows, p_clean.cols);
    // d/dp_k of mean_n (1/3) sum KL(p_k || m) is (1/3N) log(p_k / m); the
    // +1 and -1 terms from the product rule cancel against the mixture.
    const double scale = 1.0 / (3.0 * static_cast<double>(p_clean.rows));
    constexpr double kTiny = 1e-12;
    for (int i = 0; i < p_clean.rows; ++i) {
        for (int k = 0; k < p_clean.cols; ++k) {
            const double m = std::max(
                (p_clean.at(i, k) + p_a1.at(i, k) + p_a2.at(i, k)) / 3.0, kTiny);
            out.dp_clean.at(i, k) =
                scale * std::log(std::max(p_clean.at(i, k), kTiny) / m);
            out.dp_a1.at(i, k) = scale * std::log(std::max(p_a1.at(i, k), kTiny) / m);
            out.dp_a2.at(i, k) = scale * std::log(std::max(p_a2.at(i, k), kTiny) / m);
        }
    }
    return out;
}

Matrix softmax_backward(const Matrix& probs, const Matrix& dprobs) {
    check_same_shape(probs, dprobs, "softmax gradient shape mismatch");
    Matrix out(probs.rows, probs.cols);
    for (int i = 0; i < probs.rows; ++i) {
        double dot = 0.0;
        for (int k = 0; k < probs.cols; ++k) dot += probs.at(i, k) * dprobs.at(i, k);
        for (int k = 0; k < probs.cols; ++k) {
            out.at(i, k) = probs.at(i, k) * (dprobs.at(i, k) - dot);
        }
    }
    return out;
}

}  // namespace afa::nn
