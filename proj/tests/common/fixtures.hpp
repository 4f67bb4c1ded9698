#pragma once

#include "aries/core/random.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace fixtures {

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    aries::Rng rng(seed);
    std::normal_distribution<double> d(0.0, sd);
    std::vector<double> x(n);
    for (auto& v : x) {
        v = d(rng);
    }
    return x;
}

inline std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
    auto x = white_noise(n, seed);
    for (std::size_t i = 1; i < n; ++i) {
        x[i] += x[i - 1];
    }
    return x;
}

/// A sin(2 pi t / T + phi) + b for t = 0..n-1; phi in degrees.
inline std::vector<double> sinusoid(std::size_t n, double period, double amplitude = 1.0, double phase_deg = 0.0,
                                    double offset = 0.0) {
    std::vector<double> x(n);
    const double phi = phase_deg * std::numbers::pi / 180.0;
    for (std::size_t t = 0; t < n; ++t) {
        x[t] = amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period + phi) + offset;
    }
    return x;
}

/// e_t = sigma_t z_t with sigma_t^2 = omega + alpha e_{t-1}^2.
inline std::vector<double> arch1(std::size_t n, double alpha, std::uint64_t seed, double omega = 1.0) {
    aries::Rng rng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> e(n);
    double prev = 0.0;
    for (std::size_t t = 0; t < n + 100; ++t) {
        const double v = std::sqrt(omega + alpha * prev * prev) * d(rng);
        if (t >= 100) {
            e[t - 100] = v;
        }
        prev = v;
    }
    return e;
}

inline std::vector<double> ar1(std::size_t n, double phi, std::uint64_t seed) {
    auto z = white_noise(n + 200, seed);
    std::vector<double> x(n);
    double prev = 0.0;
    for (std::size_t t = 0; t < n + 200; ++t) {
        prev = phi * prev + z[t];
        if (t >= 200) {
            x[t - 200] = prev;
        }
    }
    return x;
}

} // namespace fixtures
