#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace drscreen {

// All sampling goes through these helpers instead of std <random>
// distributions: the mt19937_64 output sequence is fixed by the standard,
// so deriving variates by explicit inversion keeps every draw identical
// across standard libraries and platforms.
using Rng = std::mt19937_64;

/// One splitmix64 round; used to derive independent stream seeds from
/// (seed, salt) pairs.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased uniform integer in [0, n); rejection sampling on 64-bit draws.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

/// Fisher-Yates shuffle driven by uniform_below.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

/// Exponential variate with the given mean, by inversion.
inline double exponential_draw(Rng& rng, double mean) {
    return mean <= 0.0 ? 0.0 : -mean * std::log1p(-uniform01(rng));
}

/// Poisson count by Knuth's product-of-uniforms method. Adequate for the
/// rates used here (a few hundred at most).
inline int poisson_draw(Rng& rng, double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    double p = 1.0;
    int k = 0;
    do {
        ++k;
        p *= uniform01(rng);
    } while (p > limit);
    return k - 1;
}

/// Kumaraswamy(a, b) variate on [0, 1], by inversion. Beta-like shape.
inline double kumaraswamy_draw(Rng& rng, double a, double b) {
    const double u = uniform01(rng);
    return std::pow(1.0 - std::pow(1.0 - u, 1.0 / b), 1.0 / a);
}

}  // namespace drscreen
