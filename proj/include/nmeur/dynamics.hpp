// dynamics.hpp: evolved atomic state and joint observable time series.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nmeur/errors.hpp"
#include "nmeur/model.hpp"
#include "nmeur/propagator.hpp"
#include "nmeur/uncertainty.hpp"

namespace nmeur {

// rho_ee -> rho_ee Gamma^2, rho_eg -> rho_eg Gamma.
inline DensityMatrix2 evolve(const DensityMatrix2& rho0, double gamma_value) {
    if (!(std::abs(gamma_value) <= 1.0 + 1e-9))
        throw ComputationError("evolve: |Gamma| = " + std::to_string(std::abs(gamma_value)) + " exceeds 1");
    gamma_value = std::clamp(gamma_value, -1.0, 1.0);
    return DensityMatrix2::from_entries(rho0.ee() * gamma_value * gamma_value, rho0.eg() * gamma_value);
}

// Trace distance of the evolved pair {|+><+|, |-><-|}.
inline double optimal_pair_distance(double gamma_value) {
    if (!(std::abs(gamma_value) <= 1.0 + 1e-9)) throw ComputationError("optimal_pair_distance: |Gamma| exceeds 1");
    return std::min(std::abs(gamma_value), 1.0);
}

struct EvolutionRecord {
    double t{0.0};  // Omega t
    double gamma_value{1.0};
    DensityMatrix2 rho;
    double distance{1.0};  // D = |Gamma|
    double purity{1.0};
    double entropic_sum{0.0};
    EntropicBounds bounds{};
};

inline EvolutionRecord make_record(double t, double gamma_value, const DensityMatrix2& rho0) {
    EvolutionRecord r;
    r.t = t;
    r.gamma_value = gamma_value;
    r.rho = evolve(rho0, gamma_value);
    r.distance = optimal_pair_distance(gamma_value);
    r.purity = purity(r.rho);
    r.entropic_sum = entropic_sum_xz(r.rho);
    r.bounds = pauli_xz_bounds();
    return r;
}

inline std::vector<EvolutionRecord> records_from_curve(const PropagatorCurve& curve, const DensityMatrix2& rho0) {
    std::vector<EvolutionRecord> out;
    out.reserve(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) out.push_back(make_record(curve.time(i), curve.values[i], rho0));
    return out;
}

inline std::vector<EvolutionRecord> time_series(const ModelParams& params, const PureStateAngles& angles,
                                                double t_max, std::size_t n_points) {
    const auto curve = gamma_curve(TimeGrid::span(t_max, n_points), params);
    return records_from_curve(curve, pure_state_from_angles(angles));
}

inline std::vector<EvolutionRecord> time_series(const ModelParams& params, const PureStateAngles& angles,
                                                const TimeGrid& grid) {
    return records_from_curve(gamma_curve(grid, params), pure_state_from_angles(angles));
}

} // namespace nmeur
