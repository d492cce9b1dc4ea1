#pragma once

#include <cmath>
#include <random>

#include "nmeur/model.hpp"

namespace nmeur::testing {

// Uniform in the Bloch ball.
inline DensityMatrix2 random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double x = n(rng), y = n(rng), z = n(rng);
    const double r = std::cbrt(u(rng)) / std::sqrt(x * x + y * y + z * z);
    x *= r, y *= r, z *= r;
    return DensityMatrix2::from_entries(0.5 * (1.0 + z), complex(0.5 * x, -0.5 * y));
}

// Log-uniform ratio in [lo, hi].
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

} // namespace nmeur::testing
