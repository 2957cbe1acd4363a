#include "afa/wave.hpp"

#include <cmath>

namespace afa {

namespace {

constexpr double kDegenerateNorm = 1e-12;

RealGrid render_unnormalized(double f, double omega, int size) {
    RealGrid grid(size, size);
    const double cos_w = std::cos(omega);
    const double sin_w = std::sin(omega);
    const double inv = 1.0 / static_cast<double>(size);
    for (int v = 0; v < size; ++v) {
        const double vy = static_cast<double>(v) * inv * sin_w;
        for (int u = 0; u < size; ++u) {
            const double ux = static_cast<double>(u) * inv * cos_w;
            grid.at(v, u) = std::sin(2.0 * M_PI * f * (ux + vy - M_PI / 4.0));
        }
    }
    return grid;
}

double grid_l2(const RealGrid& grid) {
    double acc = 0.0;
    for (double v : grid.values) acc += v * v;
    return std::sqrt(acc);
}

void check_params(double f, double omega, int size) {
    if (!(f >= 1.0)) {
        raise(Errc::InvalidFrequency, "wave frequency must be >= 1");
    }
    if (!(omega >= 0.0 && omega < M_PI)) {
        raise(Errc::InvalidFrequency, "wave direction must lie in [0, pi)");
    }
    if (size < 2) {
        raise(Errc::InvalidDims, "wave size must be >= 2");
    }
}

}  // namespace

PlanarWave solve_wave(double f, double omega, int size) {
    check_params(f, omega, size);
    RealGrid grid = render_unnormalized(f, omega, size);
    const double norm = grid_l2(grid);
    if (norm < kDegenerateNorm) {
        raise(Errc::DegenerateWave, "wave renders to an all-zero grid");
    }
    return PlanarWave{f, omega, size, 1.0 / norm};
}

RealGrid make_wave(const PlanarWave& wave) {
    check_params(wave.f, wave.omega, wave.size);
    RealGrid grid = render_unnormalized(wave.f, wave.omega, wave.size);
    for (double& v : grid.values) v *= wave.amplitude;
    return grid;
}

RealGrid make_wave(double f, double omega, int size) {
    return make_wave(solve_wave(f, omega, size));
}

std::pair<double, double> sample_basis(RngState& rng, int size) {
    if (size < 2) {
        raise(Errc::InvalidDims, "basis sampling needs size >= 2");
    }
    const double f = sample_uniform(rng, 1.0, static_cast<double>(size));
    const double omega = sample_uniform(rng, 0.0, M_PI);
    return {f, omega};
}

SpectralDeltaReport spectral_delta_check(double f, double omega, int size, double sigma) {
    check_params(f, omega, size);
    const double a_real = f * std::cos(omega);
    const double b_real = f * std::sin(omega);
    const double a_round = std::round(a_real);
    const double b_round = std::round(b_real);
    const double half = static_cast<double>(size) / 2.0;
    if (std::abs(a_real - a_round) > 1e-9 || std::abs(b_real - b_round) > 1e-9 ||
        a_round < 0.0 || a_round > half || b_round < 0.0 || b_round > half) {
        raise(Errc::NotVerifiable,
              "frequency pair is not an integer pair in [0, M/2]; leakage is expected");
    }
    const int a = static_cast<int>(a_round);
    const int b = static_cast<int>(b_round);

    SpectralDeltaReport report;
    report.delta.plus_u = a;
    report.delta.plus_v = b;
    report.delta.minus_u = (size - a) % size;
    report.delta.minus_v = (size - b) % size;
    report.delta.self_conjugate =
        (report.delta.plus_u == report.delta.minus_u && report.delta.plus_v == report.delta.minus_v);

    RealGrid grid = make_wave(f, omega, size);
    for (double& v : grid.values) v *= sigma;
    const ComplexGrid spectrum = dft2(grid);

    const double total = spectrum.total_energy();
    double captured = std::norm(spectrum.bin(report.delta.plus_u, report.delta.plus_v));
    if (!report.delta.self_conjugate) {
        captured += std::norm(spectrum.bin(report.delta.minus_u, report.delta.minus_v));
    }
    // Parseval with a unit-norm wave: total spectral energy is sigma^2 * M^2,
    // split across the two bins (or concentrated in one when self-conjugate).
    const double m2 = static_cast<double>(size) * static_cast<double>(size);
    report.delta.expected_magnitude =
        report.delta.self_conjugate ? std::abs(sigma) * std::sqrt(m2)
                                    : std::abs(sigma) * std::sqrt(m2 / 2.0);
    report.peak_fraction = total > 0.0 ? captured / total : 0.0;
    report.passed = report.peak_fraction >= 0.999;
    return report;
}

RealGrid heatmap_basis(int freq_u, int freq_v, int size) {
    const int half = size / 2;
    if (freq_v < 0 || freq_v > half || freq_u < -half || freq_u > half) {
        raise(Errc::InvalidBin, "heatmap bin outside the verified half-plane");
    }
    if (freq_u == 0 && freq_v == 0) {
        // DC basis: constant grid, unit l2 norm, spectrum nonzero only at (0,0).
        RealGrid grid(size, size);
        const double v = 1.0 / static_cast<double>(size);
        for (double& x : grid.values) x = v;
        return grid;
    }
    int a = freq_u;
    int b = freq_v;
    if (b == 0 && a < 0) {
        a = -a;  // (a, 0) and (-a, 0) are the same conjugate family
    }
    // atan2(b, a) lies in [0, pi) because b >= 0 (and b == 0 implies a > 0).
    const double f = std::hypot(static_cast<double>(a), static_cast<double>(b));
    const double omega = std::atan2(static_cast<double>(b), static_cast<double>(a));
    return make_wave(f, omega, size);
}

}  // namespace afa
