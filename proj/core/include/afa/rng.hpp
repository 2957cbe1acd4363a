#pragma once

#include <cstdint>

#include "afa/errors.hpp"

namespace afa {

namespace detail {
// SplitMix64 finalizer. Pure integer arithmetic, so sequences are identical
// on every platform.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

// Counter-based stream: sample i is mix64(seed + i * gamma). Identical
// (seed, counter) pairs replay identical sequences. Streams are split by
// key instead of shared across threads.
struct RngState {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;

    RngState() = default;
    explicit RngState(std::uint64_t s) : seed(s) {}

    std::uint64_t next_u64() noexcept {
        counter += 1;
        return detail::mix64(seed + counter * 0x9E3779B97F4A7C15ULL);
    }

    // 53-bit mantissa draw in [0, 1).
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Independent child stream; deterministic in (seed, key) and unaffected
    // by this stream's counter.
    RngState split(std::uint64_t key) const noexcept {
        RngState child;
        child.seed = detail::mix64(seed ^ detail::mix64(key + 0x6A09E667F3BCC909ULL));
        child.counter = 0;
        return child;
    }
};

// Value in [lo, hi). Throws InvalidRange when lo >= hi.
double sample_uniform(RngState& rng, double lo, double hi);

// Inverse-CDF map u -> -mean*ln(1-u); exposed so callers can pin u directly.
double exponential_from_uniform(double u, double mean);

// One uniform draw through the inverse CDF. Throws InvalidParam when
// mean <= 0.
double sample_exponential(RngState& rng, double mean);

// Standard normal via Box-Muller; consumes exactly two uniforms.
double sample_gaussian(RngState& rng);

// FNV-1a over bytes; used for stream keys and state hashing.
std::uint64_t fnv1a(const void* data, std::size_t size) noexcept;
std::uint64_t fnv1a(const char* cstr) noexcept;

}  // namespace afa
