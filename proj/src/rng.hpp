#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

// Counter-based random access into the SplitMix64 sequence. Every draw is a
// pure function of (seed, index), so data generation and batch schedules are
// reproducible regardless of evaluation order. Gaussian variates use the
// Box-Muller transform on two consecutive uniforms.
namespace eadam::rng {

inline std::uint64_t sm64_output(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// index-th output of the SplitMix64 stream started at `seed`.
inline std::uint64_t at(std::uint64_t seed, std::uint64_t index) {
    return sm64_output(seed + (index + 1) * 0x9E3779B97F4A7C15ull);
}

// Derives an independent stream for a tagged sub-purpose (data, noise, ...).
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
    return at(seed ^ 0xA0761D6478BD642Full, tag);
}

// Uniform in (0, 1]: the +1 keeps log() finite in Box-Muller.
inline double uniform01(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>((at(seed, index) >> 11) + 1) * 0x1.0p-53;
}

// Uniform in [lo, hi).
inline double uniform(std::uint64_t seed, std::uint64_t index, double lo, double hi) {
    double u = static_cast<double>(at(seed, index) >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

inline double gaussian(std::uint64_t seed, std::uint64_t index) {
    const double u1 = uniform01(seed, 2 * index);
    const double u2 = uniform01(seed, 2 * index + 1);
    const double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

// Fisher-Yates permutation of 0..n-1 driven by the (seed, index) stream.
inline std::vector<std::uint32_t> permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0u);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(at(seed, i) % i);
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

}  // namespace eadam::rng
