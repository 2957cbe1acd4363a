#pragma once

// Brute-force O(H*W*H*W) transcription of the unnormalized 2-D DFT sum,
// kept independent of the library's transform as the test oracle.

#include <complex>
#include <vector>

#include "afa/fourier.hpp"

namespace testsupport {

inline afa::ComplexGrid naive_dft2(const afa::RealGrid& grid) {
    const int h = grid.height;
    const int w = grid.width;
    afa::ComplexGrid out(h, w);
    const double two_pi = 2.0 * M_PI;
    for (int p = 0; p < h; ++p) {
        for (int q = 0; q < w; ++q) {
            std::complex<double> acc(0.0, 0.0);
            for (int v = 0; v < h; ++v) {
                for (int u = 0; u < w; ++u) {
                    const double angle = -two_pi * (static_cast<double>(p) * v / h +
                                                    static_cast<double>(q) * u / w);
                    acc += grid.at(v, u) * std::complex<double>(std::cos(angle), std::sin(angle));
                }
            }
            out.at(p, q) = acc;
        }
    }
    return out;
}

inline double max_abs_diff(const afa::ComplexGrid& a, const afa::ComplexGrid& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    }
    return worst;
}

}  // namespace testsupport
