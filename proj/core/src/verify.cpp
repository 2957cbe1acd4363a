#include "afa/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "afa/augment.hpp"
#include "afa/loss.hpp"
#include "afa/metrics.hpp"
#include "afa/wave.hpp"

namespace afa {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b);
    return buf;
}

// --------------------------------------------------------------------------
// fft suite
// --------------------------------------------------------------------------

std::pair<int, int> random_integer_pair(RngState& rng, int size) {
    const int half = size / 2;
    while (true) {
        const int a = static_cast<int>(sample_uniform(rng, 0.0, half + 1.0));
        const int b = static_cast<int>(sample_uniform(rng, 0.0, half + 1.0));
        if (a != 0 || b != 0) return {a, b};
    }
}

ImageTensor random_image(RngState& rng, int channels, int size) {
    ImageTensor img(channels, size, size, false);
    for (float& v : img.values()) {
        v = static_cast<float>(sample_uniform(rng, 0.0, 1.0));
    }
    img.set_clamped(true);
    return img;
}

void fft_unit_norm_checks(std::vector<CheckResult>& out, RngState& rng) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int size = std::array<int, 3>{8, 16, 32}[static_cast<std::size_t>(i % 3)];
        auto [f, omega] = sample_basis(rng, size);
        RealGrid wave = make_wave(f, omega, size);
        double norm = 0.0;
        for (double v : wave.values) norm += v * v;
        worst = std::max(worst, std::abs(std::sqrt(norm) - 1.0));
    }
    out.push_back({"wave_unit_norm_100_random", worst <= 1e-5,
                   fmt("max |l2-1| = %.3g (tol 1e-5)", worst)});
}

void fft_delta_checks(std::vector<CheckResult>& out, RngState& rng) {
    for (int size : {8, 16, 32}) {
        double worst_fraction = 1.0;
        for (int trial = 0; trial < 20; ++trial) {
            auto [a, b] = random_integer_pair(rng, size);
            const double f = std::hypot(static_cast<double>(a), static_cast<double>(b));
            const double omega = std::atan2(static_cast<double>(b), static_cast<double>(a));
            const auto report = spectral_delta_check(f, omega, size, 1.0);
            worst_fraction = std::min(worst_fraction, report.peak_fraction);
        }
        out.push_back({"spectral_delta_two_bin_M" + std::to_string(size),
                       worst_fraction >= 0.999,
                       fmt("min energy fraction in the bin pair = %.6f (need >= 0.999)",
                           worst_fraction)});
    }
}

void fft_linearity_checks(std::vector<CheckResult>& out, RngState& rng) {
    double worst = 0.0;
    for (int size : {8, 16, 32}) {
        for (int trial = 0; trial < 7; ++trial) {
            auto [a, b] = random_integer_pair(rng, size);
            const double f = std::hypot(static_cast<double>(a), static_cast<double>(b));
            const double omega = std::atan2(static_cast<double>(b), static_cast<double>(a));
            const double sigma = sample_exponential(rng, 10.0);
            const ImageTensor x = random_image(rng, 1, size);
            const RealGrid wave = make_wave(f, omega, size);
            const ImageTensor augmented = add_wave(x, 0, wave, sigma, false);

            RealGrid gx(size, size);
            RealGrid ga(size, size);
            for (int y = 0; y < size; ++y) {
                for (int u = 0; u < size; ++u) {
                    gx.at(y, u) = x.at(0, y, u);
                    ga.at(y, u) = augmented.at(0, y, u);
                }
            }
            const ComplexGrid sx = dft2(gx);
            const ComplexGrid sa = dft2(ga);
            const ComplexGrid sw = dft2(wave);
            double residual = 0.0;
            for (std::size_t i = 0; i < sx.values().size(); ++i) {
                residual = std::max(residual,
                                    std::abs(sa.values()[i] - sx.values()[i] -
                                             sigma * sw.values()[i]));
            }
            worst = std::max(worst, residual / std::max(sx.max_abs(), 1e-12));
        }
    }
    out.push_back({"augment_spectrum_linearity", worst <= 1e-5,
                   fmt("max relative residual = %.3g (tol 1e-5)", worst)});
}

// --------------------------------------------------------------------------
// grad suite
// --------------------------------------------------------------------------

struct GradRig {
    nn::Model model;
    std::vector<ImageTensor> batch_a;
    std::vector<ImageTensor> batch_b;
    std::vector<ImageTensor> batch_c;
    std::vector<int> labels;
};

GradRig make_grad_rig(std::uint64_t seed) {
    nn::ModelSpec spec;
    spec.in_channels = 3;
    spec.image_size = 6;
    spec.num_classes = 5;
    spec.blocks = {{4, 3, 1}, {5, 3, 2}};
    GradRig rig{nn::Model(spec, seed), {}, {}, {}, {}};
    RngState rng(seed ^ 0x5EEDULL);
    for (int i = 0; i < 3; ++i) {
        rig.batch_a.push_back(random_image(rng, 3, 6));
        rig.batch_b.push_back(random_image(rng, 3, 6));
        rig.batch_c.push_back(random_image(rng, 3, 6));
        rig.labels.push_back(static_cast<int>(sample_uniform(rng, 0.0, 5.0)));
    }
    return rig;
}

// Loss value plus a hash of the relu sign pattern seen during the forward
// passes. The pattern detects when a +/- perturbation straddles a relu kink,
// where a central difference does not estimate the local derivative.
struct LossProbe {
    double value = 0.0;
    std::uint64_t pattern = 0;
};

std::uint64_t relu_pattern(const nn::Tape& tape) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (const nn::Act& act : tape.relu_in) {
        for (double v : act.v) {
            hash = (hash ^ (v > 0.0 ? 0x9EULL : 0x31ULL)) * 0x100000001B3ULL;
        }
    }
    return hash;
}

// max over parameter tensors of ||fd - analytic||_inf / max(norms, floor)
double grad_check(GradRig& rig, const std::function<LossProbe()>& loss,
                  const std::function<void()>& backprop) {
    rig.model.zero_grad();
    backprop();
    auto params = rig.model.parameters();
    std::vector<std::vector<double>> analytic;
    for (auto& p : params) analytic.push_back(*p.grads);

    double worst = 0.0;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        auto& values = *params[pi].values;
        double max_diff = 0.0;
        double max_mag = 0.0;
        for (std::size_t k = 0; k < values.size(); ++k) {
            const float saved = values[k];
            double fd = 0.0;
            double h = 1e-3;
            for (int attempt = 0; attempt < 5; ++attempt, h /= 8.0) {
                const float plus = static_cast<float>(saved + h);
                const float minus = static_cast<float>(saved - h);
                values[k] = plus;
                const LossProbe lp = loss();
                values[k] = minus;
                const LossProbe lm = loss();
                values[k] = saved;
                fd = (lp.value - lm.value) /
                     (static_cast<double>(plus) - static_cast<double>(minus));
                if (lp.pattern == lm.pattern) break;  // no kink inside the step
            }
            const double an = analytic[pi][k];
            max_diff = std::max(max_diff, std::abs(fd - an));
            max_mag = std::max({max_mag, std::abs(fd), std::abs(an)});
        }
        worst = std::max(worst, max_diff / std::max(max_mag, 1e-12));
    }
    return worst;
}

void grad_checks_for_seed(std::vector<CheckResult>& out, std::uint64_t seed) {
    const std::string tag = "_seed" + std::to_string(seed);

    {
        GradRig rig = make_grad_rig(seed);
        auto loss = [&] {
            nn::Tape tape;
            const nn::Matrix logits = rig.model.forward(rig.batch_a, nn::Branch::Main, true, &tape);
            return LossProbe{nn::ce_loss(logits, rig.labels).value, relu_pattern(tape)};
        };
        auto backprop = [&] {
            nn::Tape tape;
            const nn::Matrix logits = rig.model.forward(rig.batch_a, nn::Branch::Main, true, &tape);
            rig.model.backward(tape, nn::ce_loss(logits, rig.labels).dlogits);
        };
        const double err = grad_check(rig, loss, backprop);
        out.push_back({"grad_ce_main" + tag, err <= 1e-3,
                       fmt("max relative error %.3g (tol 1e-3)", err)});
    }
    {
        GradRig rig = make_grad_rig(seed ^ 0xA1);
        auto loss = [&] {
            nn::Tape tape;
            const nn::Matrix logits = rig.model.forward(rig.batch_b, nn::Branch::Aux, true, &tape);
            return LossProbe{nn::ce_loss(logits, rig.labels).value, relu_pattern(tape)};
        };
        auto backprop = [&] {
            nn::Tape tape;
            const nn::Matrix logits = rig.model.forward(rig.batch_b, nn::Branch::Aux, true, &tape);
            rig.model.backward(tape, nn::ce_loss(logits, rig.labels).dlogits);
        };
        const double err = grad_check(rig, loss, backprop);
        out.push_back({"grad_ce_aux" + tag, err <= 1e-3,
                       fmt("max relative error %.3g (tol 1e-3)", err)});
    }
    {
        GradRig rig = make_grad_rig(seed ^ 0xB2);
        auto loss = [&] {
            nn::Tape tape_main;
            nn::Tape tape_aux;
            const nn::Matrix main = rig.model.forward(rig.batch_a, nn::Branch::Main, true, &tape_main);
            const nn::Matrix aux = rig.model.forward(rig.batch_b, nn::Branch::Aux, true, &tape_aux);
            return LossProbe{nn::ace_loss(main, aux, rig.labels).value,
                             detail::mix64(relu_pattern(tape_main) ^
                                           (relu_pattern(tape_aux) * 0x9E3779B97F4A7C15ULL))};
        };
        auto backprop = [&] {
            nn::Tape tape_main;
            nn::Tape tape_aux;
            const nn::Matrix main = rig.model.forward(rig.batch_a, nn::Branch::Main, true, &tape_main);
            const nn::Matrix aux = rig.model.forward(rig.batch_b, nn::Branch::Aux, true, &tape_aux);
            nn::AceValue ace = nn::ace_loss(main, aux, rig.labels);
            rig.model.backward(tape_main, ace.dlogits_main);
            rig.model.backward(tape_aux, ace.dlogits_aux);
        };
        const double err = grad_check(rig, loss, backprop);
        out.push_back({"grad_ace" + tag, err <= 1e-3,
                       fmt("max relative error %.3g (tol 1e-3)", err)});
    }
    {
        GradRig rig = make_grad_rig(seed ^ 0xC3);
        const double coeff = 10.0;
        auto loss = [&] {
            nn::Tape t1;
            nn::Tape t2;
            nn::Tape t3;
            const nn::Matrix clean = rig.model.forward(rig.batch_a, nn::Branch::Main, true, &t1);
            const nn::Matrix a1 = rig.model.forward(rig.batch_b, nn::Branch::Aux, true, &t2);
            const nn::Matrix a2 = rig.model.forward(rig.batch_c, nn::Branch::Aux, true, &t3);
            const double value =
                nn::ce_loss(clean, rig.labels).value +
                coeff * nn::jsd_loss(nn::softmax(clean), nn::softmax(a1), nn::softmax(a2));
            std::uint64_t pattern = relu_pattern(t1);
            pattern = detail::mix64(pattern ^ (relu_pattern(t2) * 0x9E3779B97F4A7C15ULL));
            pattern = detail::mix64(pattern ^ (relu_pattern(t3) * 0xC2B2AE3D27D4EB4FULL));
            return LossProbe{value, pattern};
        };
        auto backprop = [&] {
            nn::Tape tape_clean;
            nn::Tape tape_a1;
            nn::Tape tape_a2;
            const nn::Matrix clean = rig.model.forward(rig.batch_a, nn::Branch::Main, true, &tape_clean);
            const nn::Matrix a1 = rig.model.forward(rig.batch_b, nn::Branch::Aux, true, &tape_a1);
            const nn::Matrix a2 = rig.model.forward(rig.batch_c, nn::Branch::Aux, true, &tape_a2);
            nn::LossValue ce = nn::ce_loss(clean, rig.labels);
            const nn::Matrix p_clean = nn::softmax(clean);
            const nn::Matrix p_a1 = nn::softmax(a1);
            const nn::Matrix p_a2 = nn::softmax(a2);
            nn::JsdValue jsd = nn::jsd_loss_grad(p_clean, p_a1, p_a2);
            nn::Matrix d_clean = nn::softmax_backward(p_clean, jsd.dp_clean);
            for (std::size_t k = 0; k < d_clean.values.size(); ++k) {
                d_clean.values[k] = ce.dlogits.values[k] + coeff * d_clean.values[k];
            }
            nn::Matrix d_a1 = nn::softmax_backward(p_a1, jsd.dp_a1);
            nn::Matrix d_a2 = nn::softmax_backward(p_a2, jsd.dp_a2);
            for (double& v : d_a1.values) v *= coeff;
            for (double& v : d_a2.values) v *= coeff;
            rig.model.backward(tape_clean, d_clean);
            rig.model.backward(tape_a1, d_a1);
            rig.model.backward(tape_a2, d_a2);
        };
        const double err = grad_check(rig, loss, backprop);
        out.push_back({"grad_ce_jsd" + tag, err <= 1e-3,
                       fmt("max relative error %.3g (tol 1e-3)", err)});
    }
}

// --------------------------------------------------------------------------
// metrics suite
// --------------------------------------------------------------------------

// Literal transcription of the flip-probability double sum.
double flip_prob_literal(const std::vector<std::vector<int>>& preds, bool temporally_related) {
    const std::size_t m = preds.size();
    const std::size_t n = preds.front().size();
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 2; j <= n; ++j) {
            const int current = preds[i][j - 1];
            const int reference = temporally_related ? preds[i][j - 2] : preds[i][0];
            acc += (current != reference) ? 1.0 : 0.0;
        }
    }
    return acc / (static_cast<double>(m) * static_cast<double>(n - 1));
}

// Literal transcription of the top-5 rank-displacement double sum.
int t5d_pair_literal(const std::vector<int>& rank_cur, const std::vector<int>& rank_prev) {
    int d = 0;
    for (int i = 1; i <= 5; ++i) {
        int klass = -1;
        for (std::size_t c = 0; c < rank_cur.size(); ++c) {
            if (rank_cur[c] == i) klass = static_cast<int>(c);
        }
        const int rho = rank_prev[static_cast<std::size_t>(klass)];
        for (int l = std::min(i, rho) + 1; l <= std::max(i, rho); ++l) {
            if (1 <= l - 1 && l - 1 <= 5) ++d;
        }
    }
    return d;
}

std::vector<int> random_ranking(RngState& rng, int k) {
    std::vector<int> order(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int i = k; i > 1; --i) {
        const int j = static_cast<int>(sample_uniform(rng, 0.0, static_cast<double>(i)));
        std::swap(order[static_cast<std::size_t>(i - 1)], order[static_cast<std::size_t>(j)]);
    }
    std::vector<int> rank_of(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) rank_of[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r + 1;
    return rank_of;
}

void metrics_identity_checks(std::vector<CheckResult>& out, RngState& rng) {
    CorruptionErrorTable table;
    for (CorruptionKind kind : all_corruption_kinds()) {
        CorruptionErrorTable::Row row;
        row.kind = kind;
        for (double& e : row.errors) e = sample_uniform(rng, 0.05, 0.95);
        table.rows.push_back(row);
    }
    const double self_mce = mce(table, table);
    out.push_back({"self_mce_identity", self_mce == 100.0,
                   fmt("mCE(table, table) = %.10f (must be exactly 100)", self_mce)});

    std::map<std::string, double> fp;
    std::map<std::string, double> td;
    for (CorruptionKind kind : all_corruption_kinds()) {
        fp[corruption_name(kind)] = sample_uniform(rng, 0.05, 0.9);
        td[corruption_name(kind)] = sample_uniform(rng, 0.2, 4.0);
    }
    const double self_mfr = mfr(fp, fp);
    const double self_mt5d = mt5d(td, td);
    out.push_back({"self_mfr_identity", self_mfr == 1.0,
                   fmt("mFR(fp, fp) = %.10f (must be exactly 1)", self_mfr)});
    out.push_back({"self_mt5d_identity", self_mt5d == 1.0,
                   fmt("mT5D(t, t) = %.10f (must be exactly 1)", self_mt5d)});
}

void metrics_equivalence_checks(std::vector<CheckResult>& out, RngState& rng) {
    int mismatches = 0;
    for (int instance = 0; instance < 50; ++instance) {
        const int m = 1 + static_cast<int>(sample_uniform(rng, 0.0, 4.0));
        const int n = 2 + static_cast<int>(sample_uniform(rng, 0.0, 5.0));
        const int k = 5 + static_cast<int>(sample_uniform(rng, 0.0, 4.0));
        const bool related = rng.next_double() < 0.5;

        std::vector<std::vector<int>> preds(static_cast<std::size_t>(m));
        std::vector<std::vector<std::vector<int>>> rankings(static_cast<std::size_t>(m));
        for (auto& seq : preds) {
            seq.resize(static_cast<std::size_t>(n));
            for (int& p : seq) p = static_cast<int>(sample_uniform(rng, 0.0, k));
        }
        for (auto& seq : rankings) {
            for (int j = 0; j < n; ++j) seq.push_back(random_ranking(rng, k));
        }

        if (flip_prob_from_preds(preds, related) != flip_prob_literal(preds, related)) {
            ++mismatches;
        }
        double literal_total = 0.0;
        for (const auto& seq : rankings) {
            for (int j = 1; j < n; ++j) {
                const auto& ref = related ? seq[static_cast<std::size_t>(j - 1)] : seq[0];
                literal_total += t5d_pair_literal(seq[static_cast<std::size_t>(j)], ref);
            }
        }
        const double literal =
            literal_total / (static_cast<double>(m) * static_cast<double>(n - 1));
        if (t5d_from_rankings(rankings, related) != literal) {
            ++mismatches;
        }
    }
    out.push_back({"flip_t5d_match_literal_double_sum_50_instances", mismatches == 0,
                   fmt("%g mismatching instances (must be 0)", static_cast<double>(mismatches))});
}

}  // namespace

std::vector<CheckResult> verify_fft_suite(std::uint64_t seed) {
    std::vector<CheckResult> out;
    RngState rng(seed);
    fft_unit_norm_checks(out, rng);
    fft_delta_checks(out, rng);
    fft_linearity_checks(out, rng);
    return out;
}

std::vector<CheckResult> verify_grad_suite(std::uint64_t seed) {
    std::vector<CheckResult> out;
    for (std::uint64_t s = 0; s < 5; ++s) {
        grad_checks_for_seed(out, seed + s);
    }
    return out;
}

std::vector<CheckResult> verify_metrics_suite(std::uint64_t seed) {
    std::vector<CheckResult> out;
    RngState rng(seed);
    metrics_identity_checks(out, rng);
    metrics_equivalence_checks(out, rng);
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.passed; });
}

}  // namespace afa
