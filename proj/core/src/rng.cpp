#include "afa/rng.hpp"

#include <cmath>
#include <cstring>

namespace afa {

double sample_uniform(RngState& rng, double lo, double hi) {
    if (!(lo < hi)) {
        raise(Errc::InvalidRange, "uniform bounds require lo < hi");
    }
    double v = lo + rng.next_double() * (hi - lo);
    if (v >= hi) {            // rounding can land exactly on hi
        v = std::nextafter(hi, lo);
    }
    return v;
}

double exponential_from_uniform(double u, double mean) {
    if (!(mean > 0.0)) {
        raise(Errc::InvalidParam, "exponential mean must be positive");
    }
    if (!(u >= 0.0 && u < 1.0)) {
        raise(Errc::InvalidParam, "exponential inverse-CDF input must be in [0,1)");
    }
    return -mean * std::log1p(-u);
}

double sample_exponential(RngState& rng, double mean) {
    if (!(mean > 0.0)) {
        raise(Errc::InvalidParam, "exponential mean must be positive");
    }
    return exponential_from_uniform(rng.next_double(), mean);
}

double sample_gaussian(RngState& rng) {
    const double u1 = rng.next_double();
    const double u2 = rng.next_double();
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));
    return radius * std::cos(2.0 * M_PI * u2);
}

std::uint64_t fnv1a(const void* data, std::size_t size) noexcept {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

std::uint64_t fnv1a(const char* cstr) noexcept {
    return fnv1a(cstr, std::strlen(cstr));
}

}  // namespace afa
