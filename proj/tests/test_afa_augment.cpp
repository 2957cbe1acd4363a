#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "afa/augment.hpp"
#include "afa/wave.hpp"
#include "support/naive_dft.hpp"
#include "support/test_util.hpp"

using namespace afa;
using testsupport::thrown_code;

namespace {

double grid_norm(const RealGrid& grid) {
    double acc = 0.0;
    for (double v : grid.values) acc += v * v;
    return std::sqrt(acc);
}

// Energy share of the two conjugate bins, computed against the brute-force
// transform rather than the library's.
double oracle_bin_fraction(const RealGrid& wave, int a, int b) {
    const ComplexGrid spectrum = testsupport::naive_dft2(wave);
    const int m = wave.width;
    double captured = std::norm(spectrum.bin(a, b));
    const int ma = (m - a) % m;
    const int mb = (m - b) % m;
    if (ma != a % m || mb != b % m) {
        captured += std::norm(spectrum.bin(ma, mb));
    }
    return captured / spectrum.total_energy();
}

}  // namespace

TEST_CASE("rendered waves have unit l2 norm for random parameters") {
    RngState rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = std::array<int, 3>{8, 16, 32}[static_cast<std::size_t>(trial % 3)];
        auto [f, omega] = sample_basis(rng, m);
        CHECK(grid_norm(make_wave(f, omega, m)) == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("axis-aligned wave concentrates on bins (1,0) and (7,0)") {
    const RealGrid wave = make_wave(1.0, 0.0, 8);
    const ComplexGrid spectrum = testsupport::naive_dft2(wave);
    const double peak = std::abs(spectrum.bin(1, 0));
    CHECK(std::abs(spectrum.bin(7, 0)) == doctest::Approx(peak).epsilon(1e-9));
    for (int p = 0; p < 8; ++p) {
        for (int q = 0; q < 8; ++q) {
            if (p == 0 && (q == 1 || q == 7)) continue;
            CHECK(std::abs(spectrum.at(p, q)) <= 0.05 * peak);
        }
    }
}

TEST_CASE("diagonal wave at integer pair (1,1) peaks at bins (1,1) and (7,7)") {
    const RealGrid wave = make_wave(std::sqrt(2.0), M_PI / 4.0, 8);
    const ComplexGrid spectrum = testsupport::naive_dft2(wave);
    const double peak = std::abs(spectrum.bin(1, 1));
    CHECK(std::abs(spectrum.bin(7, 7)) == doctest::Approx(peak).epsilon(1e-6));
    CHECK(oracle_bin_fraction(wave, 1, 1) >= 0.999);
}

TEST_CASE("wave construction rejects invalid parameters") {
    CHECK(thrown_code([] { make_wave(0.5, 0.0, 8); }) == Errc::InvalidFrequency);
    CHECK(thrown_code([] { make_wave(1.0, -0.1, 8); }) == Errc::InvalidFrequency);
    CHECK(thrown_code([] { make_wave(1.0, M_PI, 8); }) == Errc::InvalidFrequency);
    CHECK(thrown_code([] { make_wave(1.0, 0.0, 1); }) == Errc::InvalidDims);
}

TEST_CASE("basis sampling respects ranges and replays under a fixed seed") {
    RngState rng(51);
    for (int i = 0; i < 100000; ++i) {
        auto [f, omega] = sample_basis(rng, 32);
        CHECK(f >= 1.0);
        CHECK(f < 32.0);
        CHECK(omega >= 0.0);
        CHECK(omega < M_PI);
    }

    RngState a(8);
    RngState b(8);
    CHECK(sample_basis(a, 32) == sample_basis(b, 32));

    RngState mean_rng(52);
    double sum = 0.0;
    for (int i = 0; i < 1000000; ++i) sum += sample_basis(mean_rng, 32).first;
    CHECK(sum / 1e6 == doctest::Approx(16.5).epsilon(0.01));
}

TEST_CASE("zero strength leaves the image unchanged") {
    RngState rng(61);
    const ImageTensor x = testsupport::random_image(rng, 3, 16);
    const RealGrid wave = make_wave(2.0, 1.0, 16);
    const ImageTensor out = add_wave(x, 1, wave, 0.0, true);
    CHECK(out.values() == x.values());
}

TEST_CASE("unclamped augmentation is exactly additive") {
    RngState rng(62);
    const ImageTensor x = testsupport::random_image(rng, 1, 16);
    const RealGrid wave = make_wave(3.0, 0.5, 16);
    const ImageTensor out = add_wave(x, 0, wave, 2.0, false);
    for (int y = 0; y < 16; ++y) {
        for (int u = 0; u < 16; ++u) {
            const double expected = static_cast<double>(x.at(0, y, u)) + 2.0 * wave.at(y, u);
            CHECK(out.at(0, y, u) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    CHECK_FALSE(out.clamped());
}

TEST_CASE("augmented spectrum equals input spectrum plus sigma times wave spectrum") {
    RngState rng(63);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 16;
        const int a = 1 + static_cast<int>(sample_uniform(rng, 0.0, 8.0));
        const int b = static_cast<int>(sample_uniform(rng, 0.0, 8.0));
        const double f = std::hypot(a, b);
        const double omega = std::atan2(static_cast<double>(b), static_cast<double>(a));
        const double sigma = sample_exponential(rng, 10.0);
        const ImageTensor x = testsupport::random_image(rng, 1, m);
        const RealGrid wave = make_wave(f, omega, m);
        const ImageTensor augmented = add_wave(x, 0, wave, sigma, false);

        RealGrid gx(m, m);
        RealGrid ga(m, m);
        for (int y = 0; y < m; ++y) {
            for (int u = 0; u < m; ++u) {
                gx.at(y, u) = x.at(0, y, u);
                ga.at(y, u) = augmented.at(0, y, u);
            }
        }
        const ComplexGrid sx = dft2(gx);
        const ComplexGrid sa = dft2(ga);
        const ComplexGrid sw = dft2(wave);
        double residual = 0.0;
        for (std::size_t i = 0; i < sx.values().size(); ++i) {
            residual = std::max(residual, std::abs(sa.values()[i] - sx.values()[i] -
                                                   sigma * sw.values()[i]));
        }
        CHECK(residual <= 1e-5 * sx.max_abs());
    }
}

TEST_CASE("per-channel draws happen in (f, omega, sigma) order, three per channel") {
    RngState rng(64);
    const ImageTensor x = testsupport::random_image(rng, 3, 16);
    AfaConfig cfg;
    cfg.image_size = 16;
    cfg.mean_strength = 10.0;

    RngState aug_rng(99);
    std::vector<ChannelDraw> draws;
    afa_augment(x, cfg, aug_rng, &draws);
    REQUIRE(draws.size() == 3);

    RngState replay(99);
    for (int c = 0; c < 3; ++c) {
        auto [f, omega] = sample_basis(replay, 16);
        const double sigma = sample_exponential(replay, 10.0);
        CHECK(draws[static_cast<std::size_t>(c)].f == f);
        CHECK(draws[static_cast<std::size_t>(c)].omega == omega);
        CHECK(draws[static_cast<std::size_t>(c)].sigma == sigma);
    }
    CHECK(aug_rng.counter == replay.counter);
}

TEST_CASE("each channel depends only on its own input and draws") {
    RngState rng(65);
    const ImageTensor x = testsupport::random_image(rng, 3, 16);
    AfaConfig cfg;
    cfg.image_size = 16;

    RngState r1(123);
    const ImageTensor out1 = afa_augment(x, cfg, r1);

    ImageTensor scrambled = x;
    for (int y = 0; y < 16; ++y) {
        for (int u = 0; u < 16; ++u) {
            scrambled.at(0, y, u) = 1.0f - scrambled.at(0, y, u);
            scrambled.at(2, y, u) = 0.25f;
        }
    }
    RngState r2(123);
    const ImageTensor out2 = afa_augment(scrambled, cfg, r2);
    for (int y = 0; y < 16; ++y) {
        for (int u = 0; u < 16; ++u) {
            CHECK(out1.at(1, y, u) == out2.at(1, y, u));
        }
    }
}

TEST_CASE("augmentation output carries the clamp flag as configured") {
    RngState rng(66);
    const ImageTensor x = testsupport::random_image(rng, 1, 16);
    AfaConfig cfg;
    cfg.image_size = 16;
    RngState r1(5);
    CHECK(afa_augment(x, cfg, r1).clamped());
    cfg.clamp = false;
    RngState r2(5);
    CHECK_FALSE(afa_augment(x, cfg, r2).clamped());
}

TEST_CASE("augmentation rejects shape mismatches and unclamped input") {
    RngState rng(67);
    AfaConfig cfg;
    cfg.image_size = 16;
    const ImageTensor wrong_size = testsupport::random_image(rng, 1, 8);
    RngState r(1);
    CHECK(thrown_code([&] { afa_augment(wrong_size, cfg, r); }) == Errc::ShapeMismatch);

    ImageTensor unclamped = testsupport::random_image(rng, 1, 16);
    unclamped.set_clamped(false);
    CHECK(thrown_code([&] { afa_augment(unclamped, cfg, r); }) == Errc::InvalidParam);
}

TEST_CASE("visual augmentation: identity, involution, reproducible offsets") {
    RngState rng(71);
    const ImageTensor x = testsupport::random_image(rng, 3, 16);

    VisualAugConfig identity;
    identity.crop_padding = 0;
    identity.hflip_prob = 0.0;
    RngState r1(2);
    CHECK(standard_visual_aug(x, identity, r1).values() == x.values());

    VisualAugConfig flip_only;
    flip_only.crop_padding = 0;
    flip_only.hflip_prob = 1.0;
    RngState r2(3);
    const ImageTensor once = standard_visual_aug(x, flip_only, r2);
    const ImageTensor twice = standard_visual_aug(once, flip_only, r2);
    CHECK(twice.values() == x.values());

    VisualAugConfig crop;
    crop.crop_padding = 4;
    crop.hflip_prob = 0.5;
    RngState r3(4);
    RngState r4(4);
    const ImageTensor a = standard_visual_aug(x, crop, r3);
    const ImageTensor b = standard_visual_aug(x, crop, r4);
    CHECK(a.values() == b.values());
    CHECK(a.clamped());
    CHECK(a.height() == x.height());
    CHECK(a.width() == x.width());
}

TEST_CASE("spectral delta check on the quantized domain") {
    const auto report = spectral_delta_check(2.0, 0.0, 16, 1.0);
    CHECK(report.delta.plus_u == 2);
    CHECK(report.delta.plus_v == 0);
    CHECK(report.delta.minus_u == 14);
    CHECK(report.delta.minus_v == 0);
    CHECK(report.peak_fraction >= 0.999);
    CHECK(report.passed);

    const double f31 = std::hypot(3.0, 1.0);
    const double w31 = std::atan2(1.0, 3.0);
    const auto diag = spectral_delta_check(f31, w31, 16, 2.0);
    CHECK(diag.delta.plus_u == 3);
    CHECK(diag.delta.plus_v == 1);
    CHECK(diag.delta.minus_u == 13);
    CHECK(diag.delta.minus_v == 15);
    CHECK(diag.passed);

    CHECK(thrown_code([] { spectral_delta_check(1.5, 0.0, 16, 1.0); }) == Errc::NotVerifiable);
}

TEST_CASE("self-conjugate bins are handled once") {
    const auto report = spectral_delta_check(8.0, 0.0, 16, 1.0);
    CHECK(report.delta.self_conjugate);
    CHECK(report.delta.plus_u == report.delta.minus_u);
    CHECK(report.passed);
}

TEST_CASE("heatmap basis: unit norm, two-bin spectra, conjugate symmetry") {
    const int m = 16;
    for (int j = 0; j <= m / 2; ++j) {
        for (int i = -m / 2; i <= m / 2; ++i) {
            const RealGrid basis = heatmap_basis(i, j, m);
            CHECK(grid_norm(basis) == doctest::Approx(1.0).epsilon(1e-5));
        }
    }
    // spot-check two-bin concentration with the oracle transform
    CHECK(oracle_bin_fraction(heatmap_basis(3, 2, m), 3, 2) >= 0.999);
    const RealGrid negative = heatmap_basis(-3, 2, m);
    const ComplexGrid spectrum = testsupport::naive_dft2(negative);
    const double captured =
        std::norm(spectrum.bin(-3, 2)) + std::norm(spectrum.bin(3, -2));
    CHECK(captured / spectrum.total_energy() >= 0.999);

    // (i, 0) and (-i, 0) describe the same conjugate family
    CHECK(heatmap_basis(5, 0, m).values == heatmap_basis(-5, 0, m).values);

    // DC basis is the constant grid with unit norm
    const RealGrid dc = heatmap_basis(0, 0, m);
    for (double v : dc.values) CHECK(v == doctest::Approx(1.0 / m).epsilon(1e-12));

    CHECK(thrown_code([&] { heatmap_basis(0, -1, m); }) == Errc::InvalidBin);
    CHECK(thrown_code([&] { heatmap_basis(9, 0, m); }) == Errc::InvalidBin);
}
