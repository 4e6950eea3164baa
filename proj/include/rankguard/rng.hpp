#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace rankguard {

// The mt19937_64 engine is pinned by the standard, but the std:: distributions
// are not: two standard libraries may draw different values from the same
// engine state. Every distribution used here is therefore spelled out by hand
// so that a seed means the same bytes on every platform.

namespace detail {

/// splitmix64 step; used both for seed derivation and engine warm-up.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d6a688d9fe5cc3ull;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Derives a child seed from a base seed and a tag path, e.g.
/// derive_seed(seed, {stream, instance_index}). Distinct paths give
/// statistically independent child streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t state = base;
    std::uint64_t out = detail::splitmix64(state);
    for (std::uint64_t tag : tags) {
        state ^= tag + 0x9e3779b97f4a7c15ull + (state << 6) + (state >> 2);
        out = detail::splitmix64(state);
    }
    return out;
}

/// Deterministic random source: a pinned engine plus hand-rolled draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    /// Uniform on [0, 1): top 53 bits of the draw, so every value is an
    /// exactly representable double and the sequence is platform-independent.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). Modulo draw: the bias for n below 2^32 is
    /// under 2^-32, irrelevant next to the statistical tolerances used here.
    std::uint64_t uniform_int(std::uint64_t n) { return engine_() % n; }

    /// Standard normal via Box-Muller. Always consumes exactly two uniforms
    /// (the sine branch is discarded), so stream positions stay easy to
    /// reason about when draws interleave.
    double gaussian() {
        const double u1 = 1.0 - uniform01();  // in (0, 1], keeps log finite
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

    /// Point on the probability simplex of dimension n: normalized unit-rate
    /// exponentials, i.e. a flat Dirichlet draw.
    Eigen::VectorXd simplex(Eigen::Index n) {
        Eigen::VectorXd v(n);
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double u = uniform01();
            while (u == 1.0) u = uniform01();  // keep -log(1-u) finite
            v[i] = -std::log1p(-u);
            total += v[i];
        }
        v /= total;
        return v;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace rankguard
