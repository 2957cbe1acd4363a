#pragma once

#include <utility>

#include "afa/fourier.hpp"
#include "afa/rng.hpp"

namespace afa {

// Planar sinusoid of frequency f (cycles per image) and direction omega.
// The amplitude R is solved so the rendered M x M grid has unit l2 norm;
// it is never configured directly.
struct PlanarWave {
    double f = 1.0;
    double omega = 0.0;
    int size = 0;      // M, image side in pixels
    double amplitude = 0.0;  // solved R
};

// Renders grid[v][u] = R * sin(2*pi*f*(u' cos w + v' sin w - pi/4)) with
// u' = u/M, v' = v/M, R solved for unit l2 norm. Integer (f cos w, f sin w)
// pairs land exactly on DFT bins. Throws InvalidFrequency for f < 1 or
// omega outside [0, pi); DegenerateWave when the rendering is identically
// zero and cannot be normalized.
RealGrid make_wave(double f, double omega, int size);

// Same rendering, also reporting the solved amplitude.
RealGrid make_wave(const PlanarWave& wave);
PlanarWave solve_wave(double f, double omega, int size);

// Draws f ~ U[1, M) then omega ~ U[0, pi), in that order (two uniforms).
std::pair<double, double> sample_basis(RngState& rng, int size);

// The two conjugate DFT bins carrying a planar wave's energy, in
// (horizontal, vertical) frequency coordinates.
struct SpectralDelta {
    int plus_u = 0, plus_v = 0;
    int minus_u = 0, minus_v = 0;
    double expected_magnitude = 0.0;
    bool self_conjugate = false;  // the two bins coincide (DC / Nyquist axes)
};

struct SpectralDeltaReport {
    SpectralDelta delta;
    double peak_fraction = 0.0;  // share of spectral energy in the two bins
    bool passed = false;         // peak_fraction >= 0.999
};

// Verifies that the wave's spectrum concentrates on the two predicted bins.
// Only defined on the quantized domain where (f cos w, f sin w) are integers
// in [0, M/2] (within 1e-9); anything else leaks by construction and throws
// NotVerifiable. sigma scales the wave before the check.
SpectralDeltaReport spectral_delta_check(double f, double omega, int size, double sigma);

// Unit-norm M x M grid whose spectrum is nonzero only at bin (freq_u, freq_v)
// and its conjugate mirror. (0,0) yields the constant DC basis; everything
// else is a planar wave. Valid domain: |freq_u| <= M/2, 0 <= freq_v <= M/2;
// outside it throws InvalidBin.
RealGrid heatmap_basis(int freq_u, int freq_v, int size);

}  // namespace afa
