#pragma once

#include <complex>
#include <vector>

#include "afa/errors.hpp"

namespace afa {

// H x W complex spectrum, DC at (0,0). Bin coordinates used throughout the
// toolkit are (i, j) = (horizontal frequency, vertical frequency); the entry
// for bin (i, j) lives at row j, column i.
class ComplexGrid {
  public:
    ComplexGrid() = default;
    ComplexGrid(int height, int width)
        : height_(height), width_(width),
          values_(static_cast<std::size_t>(height) * width) {}

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }

    std::complex<double>& at(int row, int col) {
        return values_[static_cast<std::size_t>(row) * width_ + col];
    }
    const std::complex<double>& at(int row, int col) const {
        return values_[static_cast<std::size_t>(row) * width_ + col];
    }

    // Bin accessor in (horizontal, vertical) frequency order, indices taken
    // modulo the grid extents so negative frequencies address their alias.
    const std::complex<double>& bin(int freq_u, int freq_v) const {
        const int col = ((freq_u % width_) + width_) % width_;
        const int row = ((freq_v % height_) + height_) % height_;
        return at(row, col);
    }

    const std::vector<std::complex<double>>& values() const noexcept { return values_; }
    std::vector<std::complex<double>>& values() noexcept { return values_; }

    double max_abs() const noexcept;
    double total_energy() const noexcept;  // sum of squared magnitudes

  private:
    int height_ = 0;
    int width_ = 0;
    std::vector<std::complex<double>> values_;
};

// Real H x W grid in double precision, the working type for wave rendering
// and transform round trips.
struct RealGrid {
    int height = 0;
    int width = 0;
    std::vector<double> values;

    RealGrid() = default;
    RealGrid(int h, int w) : height(h), width(w),
                             values(static_cast<std::size_t>(h) * w, 0.0) {}

    double& at(int row, int col) {
        return values[static_cast<std::size_t>(row) * width + col];
    }
    double at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * width + col];
    }
};

// Unnormalized forward 2-D DFT: X[p][q] = sum_v sum_u x[v][u]
// exp(-2*pi*i*(p*v/H + q*u/W)). Row-column decomposition; power-of-two axes
// use radix-2, other lengths fall back to the direct sum. Accumulation is in
// double throughout. Throws InvalidDims when either extent is < 2.
ComplexGrid dft2(const RealGrid& grid);

// Inverse of dft2 including the 1/(H*W) factor. The spectrum must be
// Hermitian-symmetric within 1e-6 relative to its max magnitude (i.e. come
// from a real grid), otherwise NotRealSpectrum is thrown.
RealGrid idft2(const ComplexGrid& spectrum);

}  // namespace afa
