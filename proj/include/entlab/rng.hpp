#pragma once

// Seeded random streams with a fixed, documented derivation so that every
// published number is reproducible from (master seed, task index) alone.
//
//   stream(seed, task) = std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(task + 1)))
//
// std::mt19937_64 output is fixed by the standard. The distribution helpers
// below are written out instead of using <random> distributions, whose
// algorithms are implementation-defined.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace entlab {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t task) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(task + 1));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t task = 0)
        : engine_(derive_stream_seed(seed, task)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi], modulo bias below 2^-40 for the ranges used here.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    // Standard normal via Box-Muller; the second variate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // Complex standard normal: real and imaginary parts each N(0, 1/2).
    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace entlab
