// nonmarkov.hpp: trace-distance information backflow for the pair
// {|+><+|, |-><-|}, whose distance is |Gamma(t)|.

#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "nmeur/errors.hpp"
#include "nmeur/model.hpp"
#include "nmeur/propagator.hpp"

namespace nmeur {

struct BackflowInterval {
    double t_start;
    double t_end;
    double d_start;  // |Gamma(t_start)|
    double d_end;    // |Gamma(t_end)|
};

struct NonMarkovResult {
    double n_value{0.0};
    double t_max{0.0};
    double dt{0.0};
    double tail_estimate{0.0};  // bound on what lies beyond t_max: |Gamma(t_max)|
    std::vector<BackflowInterval> intervals;
    // The measure is evaluated for the fixed pair {|+>,|->} only, so it is a
    // lower bound on the value maximized over all initial pairs.
    bool optimal_pair_only{true};
};

// d|Gamma|/dt at a grid point; central differences inside, one-sided at
// the ends.
inline double sigma_rate(const PropagatorCurve& curve, std::size_t index) {
    const std::size_t n = curve.size();
    if (n < 2) throw DomainError("sigma_rate needs at least two samples");
    if (index >= n) throw DomainError("sigma_rate index out of range");
    const double h = curve.grid.step;
    auto d = [&](std::size_t i) { return std::abs(curve.values[i]); };
    if (index == 0) return (d(1) - d(0)) / h;
    if (index == n - 1) return (d(n - 1) - d(n - 2)) / h;
    return (d(index + 1) - d(index - 1)) / (2.0 * h);
}

// Sum of the rises of |Gamma| over the grid, i.e. the integral of the
// positive part of d|Gamma|/dt for a piecewise monotone sampled curve.
// Where Gamma changes sign between two samples, |Gamma| dips to zero in
// between; the crossing (linearly interpolated) is inserted as an extra
// sample so the rise that starts there is counted in full.
inline NonMarkovResult non_markovianity(const PropagatorCurve& curve) {
    NonMarkovResult r;
    r.dt = curve.grid.step;
    r.t_max = curve.grid.back();
    r.tail_estimate = std::abs(curve.values.back());

    bool rising = false;
    BackflowInterval open{};
    auto close = [&](double t, double d) {
        open.t_end = t;
        open.d_end = d;
        r.intervals.push_back(open);
        rising = false;
    };
    // One monotone piece of the |Gamma| polyline starting at (t0, d0).
    auto piece = [&](double t0, double d0, double d1) {
        if (d1 > d0) {
            r.n_value += d1 - d0;
            if (!rising) {
                open = {t0, 0.0, d0, 0.0};
                rising = true;
            }
        } else if (rising) {
            close(t0, d0);
        }
    };

    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const double g0 = curve.values[i], g1 = curve.values[i + 1];
        const double t0 = curve.time(i), t1 = curve.time(i + 1);
        if ((g0 > 0.0 && g1 < 0.0) || (g0 < 0.0 && g1 > 0.0)) {
            const double tz = t0 + (t1 - t0) * g0 / (g0 - g1);
            piece(t0, std::abs(g0), 0.0);
            piece(tz, 0.0, std::abs(g1));
        } else {
            piece(t0, std::abs(g0), std::abs(g1));
        }
    }
    if (rising) close(curve.time(curve.size() - 1), std::abs(curve.values.back()));
    return r;
}

inline constexpr double kDefaultNonMarkovTMax = 100.0;
inline constexpr double kDefaultNonMarkovDt = 1e-3;

inline NonMarkovResult non_markovianity(const ModelParams& params, double t_max = kDefaultNonMarkovTMax,
                                        double dt = kDefaultNonMarkovDt) {
    if (!(dt <= 1e-2)) throw DomainError("non_markovianity needs dt <= 1e-2");
    return non_markovianity(gamma_curve(TimeGrid::stepped(t_max, dt), params));
}

enum class Regime { Markovian, NonMarkovian };

inline Regime classify(const ModelParams& params, double t_max = kDefaultNonMarkovTMax,
                       double dt = kDefaultNonMarkovDt, double tol = 1e-9) {
    return non_markovianity(params, t_max, dt).n_value <= tol ? Regime::Markovian : Regime::NonMarkovian;
}

// Memoryless limit: oscillatory (non-Markovian) above Omega = Theta/4.
inline double critical_coupling(double theta) {
    if (!(theta > 0.0)) throw DomainError("critical_coupling needs Theta > 0");
    return theta / 4.0;
}

} // namespace nmeur
