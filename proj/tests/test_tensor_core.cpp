#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "afa/fourier.hpp"
#include "afa/rng.hpp"
#include "afa/tensor.hpp"
#include "afa/tensor_io.hpp"
#include "afa/wave.hpp"
#include "support/naive_dft.hpp"
#include "support/test_util.hpp"

using namespace afa;
using testsupport::thrown_code;

namespace {

RealGrid random_grid(RngState& rng, int h, int w) {
    RealGrid grid(h, w);
    for (double& v : grid.values) v = sample_uniform(rng, -1.0, 1.0);
    return grid;
}

}  // namespace

TEST_CASE("dft2 of an all-zero grid is all zeros") {
    const ComplexGrid spectrum = dft2(RealGrid(4, 4));
    for (const auto& v : spectrum.values()) {
        CHECK(std::abs(v) == 0.0);
    }
}

TEST_CASE("dft2 of a constant grid concentrates k*M^2 in the DC bin") {
    const int m = 8;
    const double k = 0.37;
    RealGrid grid(m, m);
    for (double& v : grid.values) v = k;
    const ComplexGrid spectrum = dft2(grid);
    CHECK(std::abs(spectrum.at(0, 0) - std::complex<double>(k * m * m, 0.0)) < 1e-9);
    for (int p = 0; p < m; ++p) {
        for (int q = 0; q < m; ++q) {
            if (p == 0 && q == 0) continue;
            CHECK(std::abs(spectrum.at(p, q)) < 1e-9);
        }
    }
}

TEST_CASE("dft2 of cos(2*pi*u/M) has exactly the (1,0) and (7,0) bins") {
    const int m = 8;
    RealGrid grid(m, m);
    for (int v = 0; v < m; ++v) {
        for (int u = 0; u < m; ++u) {
            grid.at(v, u) = std::cos(2.0 * M_PI * u / m);
        }
    }
    // oracle first: the brute-force sum pins the expected spectrum
    const ComplexGrid oracle = testsupport::naive_dft2(grid);
    const ComplexGrid spectrum = dft2(grid);
    CHECK(testsupport::max_abs_diff(oracle, spectrum) < 1e-9);

    // bins are (horizontal, vertical) pairs; magnitude M*M/2 = 32 frozen
    CHECK(std::abs(spectrum.bin(1, 0)) == doctest::Approx(32.0).epsilon(1e-12));
    CHECK(std::abs(spectrum.bin(7, 0)) == doctest::Approx(32.0).epsilon(1e-12));
    for (int p = 0; p < m; ++p) {
        for (int q = 0; q < m; ++q) {
            if (p == 0 && (q == 1 || q == 7)) continue;
            CHECK(std::abs(spectrum.at(p, q)) < 1e-9);
        }
    }
}

TEST_CASE("dft2 matches the brute-force oracle on random grids, including odd sizes") {
    RngState rng(21);
    for (auto [h, w] : {std::pair{4, 4}, {8, 8}, {6, 6}, {12, 8}, {5, 7}}) {
        const RealGrid grid = random_grid(rng, h, w);
        const ComplexGrid expect = testsupport::naive_dft2(grid);
        const ComplexGrid got = dft2(grid);
        CHECK(testsupport::max_abs_diff(expect, got) < 1e-8 * std::max(1.0, expect.max_abs()));
    }
}

TEST_CASE("dft2 rejects grids smaller than 2x2") {
    CHECK(thrown_code([] { dft2(RealGrid(1, 4)); }) == Errc::InvalidDims);
    CHECK(thrown_code([] { dft2(RealGrid(4, 1)); }) == Errc::InvalidDims);
}

TEST_CASE("dft2 linearity over random grids") {
    RngState rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 8;
        const RealGrid p = random_grid(rng, m, m);
        const RealGrid q = random_grid(rng, m, m);
        const double a = sample_uniform(rng, -3.0, 3.0);
        const double b = sample_uniform(rng, -3.0, 3.0);
        RealGrid combo(m, m);
        for (std::size_t i = 0; i < combo.values.size(); ++i) {
            combo.values[i] = a * p.values[i] + b * q.values[i];
        }
        const ComplexGrid sp = dft2(p);
        const ComplexGrid sq = dft2(q);
        const ComplexGrid sc = dft2(combo);
        double residual = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < sc.values().size(); ++i) {
            residual = std::max(residual,
                                std::abs(sc.values()[i] - a * sp.values()[i] - b * sq.values()[i]));
            scale = std::max(scale, std::abs(a * sp.values()[i]) + std::abs(b * sq.values()[i]));
        }
        CHECK(residual <= 1e-5 * scale);
    }
}

TEST_CASE("Parseval: spectral energy equals M^2 times spatial energy") {
    RngState rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 16;
        const RealGrid grid = random_grid(rng, m, m);
        double spatial = 0.0;
        for (double v : grid.values) spatial += v * v;
        const double spectral = dft2(grid).total_energy();
        CHECK(spectral == doctest::Approx(spatial * m * m).epsilon(1e-5));
    }
}

TEST_CASE("idft2 round trip recovers the input within 1e-6") {
    RngState rng(24);
    const RealGrid grid = random_grid(rng, 8, 8);
    const RealGrid back = idft2(dft2(grid));
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        CHECK(std::abs(back.values[i] - grid.values[i]) < 1e-6);
    }
}

TEST_CASE("idft2 of a zero spectrum is a zero grid") {
    const RealGrid back = idft2(ComplexGrid(4, 4));
    for (double v : back.values) CHECK(v == 0.0);
}

TEST_CASE("idft2 of a lone DC bin of magnitude M^2 is the constant-1 grid") {
    const int m = 8;
    ComplexGrid spectrum(m, m);
    spectrum.at(0, 0) = std::complex<double>(m * m, 0.0);
    const RealGrid back = idft2(spectrum);
    for (double v : back.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("idft2 rejects non-Hermitian spectra") {
    ComplexGrid spectrum(4, 4);
    spectrum.at(1, 2) = {1.0, 1.0};  // mirror bin left at zero
    CHECK(thrown_code([&] { idft2(spectrum); }) == Errc::NotRealSpectrum);
}

TEST_CASE("l2_norm basics") {
    CHECK(l2_norm(Tensor::zeros({4, 4})) == 0.0);
    Tensor one_hot = Tensor::zeros({5});
    one_hot[2] = 3.0f;
    CHECK(l2_norm(one_hot) == 3.0);
    const RealGrid wave = make_wave(3.0, 0.7, 16);
    std::vector<float> values(wave.values.begin(), wave.values.end());
    CHECK(l2_norm(values) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("clamp01 clamps, is idempotent, and flags the result") {
    ImageTensor img(1, 1, 3, {-0.5f, 0.3f, 1.7f}, false);
    const ImageTensor once = clamp01(img);
    CHECK(once.values() == std::vector<float>{0.0f, 0.3f, 1.0f});
    CHECK(once.clamped());
    const ImageTensor twice = clamp01(once);
    CHECK(twice.values() == once.values());
}

TEST_CASE("uniform sampling: range, determinism, mean") {
    RngState a(7);
    RngState b(7);
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_uniform(a, 0.0, 1.0) == sample_uniform(b, 0.0, 1.0));
    }

    RngState rng(123);
    double sum = 0.0;
    for (int i = 0; i < 1000000; ++i) {
        const double v = sample_uniform(rng, 0.0, M_PI);
        CHECK(v >= 0.0);
        CHECK(v < M_PI);
        sum += v;
    }
    CHECK(sum / 1e6 == doctest::Approx(M_PI / 2.0).epsilon(0.01));

    RngState range_rng(5);
    for (int i = 0; i < 10000; ++i) {
        const double v = sample_uniform(range_rng, 1.0, 32.0);
        CHECK(v >= 1.0);
        CHECK(v < 32.0);
    }

    CHECK(thrown_code([&] { sample_uniform(rng, 1.0, 1.0); }) == Errc::InvalidRange);
    CHECK(thrown_code([&] { sample_uniform(rng, 2.0, 1.0); }) == Errc::InvalidRange);
}

TEST_CASE("exponential sampling: inverse CDF, mean, determinism") {
    CHECK(exponential_from_uniform(0.0, 10.0) == 0.0);

    RngState rng(31);
    double sum = 0.0;
    for (int i = 0; i < 1000000; ++i) {
        const double v = sample_exponential(rng, 10.0);
        CHECK(v >= 0.0);
        sum += v;
    }
    CHECK(sum / 1e6 >= 9.8);
    CHECK(sum / 1e6 <= 10.2);

    RngState a(9);
    RngState b(9);
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_exponential(a, 1.0) == sample_exponential(b, 1.0));
    }

    CHECK(thrown_code([&] { sample_exponential(rng, 0.0); }) == Errc::InvalidParam);
    CHECK(thrown_code([&] { sample_exponential(rng, -1.0); }) == Errc::InvalidParam);
}

TEST_CASE("rng replay and split streams are stable") {
    RngState rng(0xDEADBEEF);
    std::vector<std::uint64_t> first;
    for (int i = 0; i < 16; ++i) first.push_back(rng.next_u64());

    RngState replay(0xDEADBEEF);
    for (int i = 0; i < 16; ++i) CHECK(replay.next_u64() == first[static_cast<std::size_t>(i)]);

    // splitting is a pure function of (seed, key), not of the parent counter
    const RngState parent(1);
    RngState advanced(1);
    advanced.next_u64();
    CHECK(parent.split(42).seed == advanced.split(42).seed);
    CHECK(parent.split(42).seed != parent.split(43).seed);
}

TEST_CASE("tensor file round trip is bit exact") {
    testsupport::TempDir dir("afat");
    RngState rng(77);
    ImageTensor img = testsupport::random_image(rng, 3, 32);
    const Tensor t = img.to_tensor();
    write_tensor(dir.path() / "t.afat", t);
    const Tensor back = read_tensor(dir.path() / "t.afat");
    CHECK(back.dims() == t.dims());
    CHECK(std::memcmp(back.values().data(), t.values().data(),
                      t.values().size() * sizeof(float)) == 0);
}

TEST_CASE("tensor file rejects bad magic and truncation") {
    testsupport::TempDir dir("afat-bad");
    {
        std::ofstream out(dir.path() / "bad.afat", std::ios::binary);
        out << "NOPE irrelevant";
    }
    CHECK(thrown_code([&] { read_tensor(dir.path() / "bad.afat"); }) == Errc::NotTensorFile);

    write_tensor(dir.path() / "ok.afat", Tensor::zeros({4, 4}));
    const auto full = std::filesystem::file_size(dir.path() / "ok.afat");
    std::filesystem::resize_file(dir.path() / "ok.afat", full - 5);
    CHECK(thrown_code([&] { read_tensor(dir.path() / "ok.afat"); }) == Errc::CorruptFile);
}

TEST_CASE("rank-0 tensors are rejected at construction") {
    CHECK(thrown_code([] { Tensor({}, {}); }) == Errc::InvalidDims);
    CHECK(thrown_code([] { Tensor({2, 2, 2, 2, 2}, std::vector<float>(32, 0.0f)); }) ==
          Errc::InvalidDims);
}

TEST_CASE("tensors reject non-finite values") {
    CHECK(thrown_code([] {
              Tensor({2}, {1.0f, std::numeric_limits<float>::infinity()});
          }) == Errc::InvalidParam);
}
