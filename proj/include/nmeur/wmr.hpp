// wmr.hpp: null-result weak measurement reversal.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nmeur/dynamics.hpp"
#include "nmeur/errors.hpp"
#include "nmeur/model.hpp"
#include "nmeur/propagator.hpp"
#include "nmeur/uncertainty.hpp"

namespace nmeur {

class WmrStrength {
public:
    explicit WmrStrength(double m) : m_(m) {
        if (!(m >= 0.0 && m <= 1.0)) throw DomainError("measurement strength must lie in [0, 1], got " + std::to_string(m));
    }

    double value() const noexcept { return m_; }

private:
    double m_;
};

// rho_ee -> (1-m) rho_ee / C, rho_eg -> sqrt(1-m) rho_eg / C,
// rho_gg -> rho_gg / C with C = (1-m) rho_ee + rho_gg.
inline DensityMatrix2 apply_wmr(const DensityMatrix2& rho, WmrStrength strength) {
    const double keep = 1.0 - strength.value();
    const double norm = keep * rho.ee() + rho.gg();
    if (!(norm > 1e-15)) throw ComputationError("weak measurement reversal: null-result probability is zero");
    return DensityMatrix2::from_entries(keep * rho.ee() / norm, std::sqrt(keep) * rho.eg() / norm);
}

struct WmrPoint {
    double m;
    double entropic_sum;
};

inline std::vector<WmrPoint> wmr_uncertainty_sweep(const ModelParams& params, const PureStateAngles& angles,
                                                   double omega_t, const std::vector<double>& m_grid) {
    const auto evolved = evolve(pure_state_from_angles(angles), gamma_at(omega_t, params));
    std::vector<WmrPoint> out;
    out.reserve(m_grid.size());
    for (double m : m_grid) out.push_back({m, entropic_sum_xz(apply_wmr(evolved, WmrStrength(m)))});
    return out;
}

} // namespace nmeur
