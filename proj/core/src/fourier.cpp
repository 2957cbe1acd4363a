#include "afa/fourier.hpp"

#include <cmath>

namespace afa {

namespace {

bool is_pow2(int n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey; sign = -1 forward, +1 inverse.
void fft_pow2(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = sign * 2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wstep(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> even = a[i + k];
                const std::complex<double> odd = a[i + k + len / 2] * w;
                a[i + k] = even + odd;
                a[i + k + len / 2] = even - odd;
                w *= wstep;
            }
        }
    }
}

// Direct O(n^2) transform for non power-of-two lengths.
void dft_direct(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    std::vector<std::complex<double>> out(n);
    const double base = sign * 2.0 * M_PI / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t m = 0; m < n; ++m) {
            const double angle = base * static_cast<double>((k * m) % n);
            acc += a[m] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        out[k] = acc;
    }
    a = std::move(out);
}

void transform_1d(std::vector<std::complex<double>>& a, int sign) {
    if (is_pow2(static_cast<int>(a.size()))) {
        fft_pow2(a, sign);
    } else {
        dft_direct(a, sign);
    }
}

// Row-column pass over an H x W complex buffer.
void transform_2d(std::vector<std::complex<double>>& data, int height, int width, int sign) {
    std::vector<std::complex<double>> line;
    line.reserve(std::max(height, width));
    for (int r = 0; r < height; ++r) {
        line.assign(data.begin() + static_cast<std::size_t>(r) * width,
                    data.begin() + static_cast<std::size_t>(r + 1) * width);
        transform_1d(line, sign);
        std::copy(line.begin(), line.end(), data.begin() + static_cast<std::size_t>(r) * width);
    }
    for (int c = 0; c < width; ++c) {
        line.resize(height);
        for (int r = 0; r < height; ++r) line[r] = data[static_cast<std::size_t>(r) * width + c];
        transform_1d(line, sign);
        for (int r = 0; r < height; ++r) data[static_cast<std::size_t>(r) * width + c] = line[r];
    }
}

}  // namespace

double ComplexGrid::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

double ComplexGrid::total_energy() const noexcept {
    double acc = 0.0;
    for (const auto& v : values_) acc += std::norm(v);
    return acc;
}

ComplexGrid dft2(const RealGrid& grid) {
    if (grid.height < 2 || grid.width < 2) {
        raise(Errc::InvalidDims, "dft2 requires extents >= 2");
    }
    ComplexGrid out(grid.height, grid.width);
    auto& data = out.values();
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        data[i] = std::complex<double>(grid.values[i], 0.0);
    }
    transform_2d(data, grid.height, grid.width, -1);
    return out;
}

RealGrid idft2(const ComplexGrid& spectrum) {
    const int h = spectrum.height();
    const int w = spectrum.width();
    if (h < 2 || w < 2) {
        raise(Errc::InvalidDims, "idft2 requires extents >= 2");
    }
    const double scale = spectrum.max_abs();
    const double tol = 1e-6 * std::max(1.0, scale);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const auto& v = spectrum.at(r, c);
            const auto& mirror = spectrum.at((h - r) % h, (w - c) % w);
            if (std::abs(v - std::conj(mirror)) > tol) {
                raise(Errc::NotRealSpectrum, "spectrum is not Hermitian-symmetric");
            }
        }
    }

    std::vector<std::complex<double>> data = spectrum.values();
    transform_2d(data, h, w, +1);
    RealGrid out(h, w);
    const double inv = 1.0 / (static_cast<double>(h) * static_cast<double>(w));
    for (std::size_t i = 0; i < data.size(); ++i) {
        out.values[i] = data[i].real() * inv;
    }
    return out;
}

}  // namespace afa
