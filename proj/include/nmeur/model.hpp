// model.hpp: parameters, qubit states, purity, trace distance and the
// Lorentzian reservoir spectrum.
//
// Conventions: basis order is (|e>, |g>). All dynamics is expressed in the
// dimensionless time Omega*t; rates are carried in whatever unit the caller
// chooses and only their ratios to Omega enter the evolution.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <variant>

#include "nmeur/errors.hpp"

namespace nmeur {

using complex = std::complex<double>;

inline constexpr double kPositivityTol = 1e-12;

struct Lorentzian {
    double gamma{1.0};  // spectral width; the correlation time is 1/gamma
};

// The gamma -> infinity limit of the Lorentzian reservoir.
struct Memoryless {};

using Reservoir = std::variant<Lorentzian, Memoryless>;

struct ModelParams {
    double omega{1.0};   // atom-cavity coupling
    double theta{0.0};   // cavity-reservoir coupling
    Reservoir reservoir{Lorentzian{}};
    double center_frequency{0.0};  // only used by spectral_density

    static ModelParams lorentzian(double omega, double theta, double gamma) {
        ModelParams p{omega, theta, Lorentzian{gamma}, 0.0};
        p.validate();
        return p;
    }

    static ModelParams memoryless(double omega, double theta) {
        ModelParams p{omega, theta, Memoryless{}, 0.0};
        p.validate();
        return p;
    }

    bool is_memoryless() const noexcept { return std::holds_alternative<Memoryless>(reservoir); }

    double gamma() const {
        if (const auto* l = std::get_if<Lorentzian>(&reservoir)) return l->gamma;
        throw DomainError("memoryless reservoir has no finite spectral width");
    }

    double correlation_time() const { return is_memoryless() ? 0.0 : 1.0 / gamma(); }

    // Same physics with Omega = 1: theta and gamma become Theta/Omega, gamma/Omega.
    ModelParams scaled() const {
        ModelParams s = *this;
        s.omega = 1.0;
        s.theta = theta / omega;
        s.center_frequency = center_frequency / omega;
        if (auto* l = std::get_if<Lorentzian>(&s.reservoir)) l->gamma /= omega;
        return s;
    }

    void validate() const {
        if (!(std::isfinite(omega) && omega > 0.0))
            throw ConfigError("omega", "must be finite and > 0");
        if (!(std::isfinite(theta) && theta >= 0.0))
            throw ConfigError("theta", "must be finite and >= 0");
        if (const auto* l = std::get_if<Lorentzian>(&reservoir)) {
            if (!(std::isfinite(l->gamma) && l->gamma > 0.0))
                throw ConfigError("reservoir.gamma", "must be finite and > 0");
        }
        if (!std::isfinite(center_frequency))
            throw ConfigError("center_frequency", "must be finite");
    }
};

// Polar angle and phase of cos(theta)|e> + sin(theta) e^{i phi}|g>.
struct PureStateAngles {
    double theta_angle{0.0};
    double phi{0.0};

    bool in_canonical_range() const noexcept {
        return theta_angle >= 0.0 && theta_angle <= std::numbers::pi / 2 && phi >= 0.0 &&
               phi <= std::numbers::pi;
    }

    // theta mod pi (a shift by pi is a global sign) and phi mod 2pi.
    PureStateAngles reduced() const noexcept {
        auto wrap = [](double x, double period) {
            double r = std::fmod(x, period);
            return r < 0.0 ? r + period : r;
        };
        return {wrap(theta_angle, std::numbers::pi), wrap(phi, 2.0 * std::numbers::pi)};
    }
};

// 2x2 qubit density matrix stored as (rho_ee, rho_eg). Hermiticity and unit
// trace hold by construction; positivity is checked on entry.
class DensityMatrix2 {
public:
    DensityMatrix2() = default;

    static DensityMatrix2 from_entries(double ee, complex eg) {
        if (!is_physical(ee, eg)) {
            throw InvalidState("not a density matrix: ee=" + std::to_string(ee) +
                               ", |eg|^2=" + std::to_string(std::norm(eg)));
        }
        return DensityMatrix2(ee, eg);
    }

    static bool is_physical(double ee, complex eg, double tol = kPositivityTol) noexcept {
        if (!std::isfinite(ee) || !std::isfinite(eg.real()) || !std::isfinite(eg.imag()))
            return false;
        if (ee < -tol || ee > 1.0 + tol) return false;
        return std::norm(eg) <= ee * (1.0 - ee) + tol;
    }

    static DensityMatrix2 excited() noexcept { return DensityMatrix2(1.0, 0.0); }
    static DensityMatrix2 ground() noexcept { return DensityMatrix2(0.0, 0.0); }
    static DensityMatrix2 maximally_mixed() noexcept { return DensityMatrix2(0.5, 0.0); }

    double ee() const noexcept { return ee_; }
    double gg() const noexcept { return 1.0 - ee_; }
    complex eg() const noexcept { return eg_; }
    complex ge() const noexcept { return std::conj(eg_); }

    friend bool operator==(const DensityMatrix2&, const DensityMatrix2&) = default;

private:
    DensityMatrix2(double ee, complex eg) noexcept : ee_(ee), eg_(eg) {}

    double ee_{1.0};
    complex eg_{0.0};
};

inline DensityMatrix2 pure_state_from_angles(const PureStateAngles& a) {
    const double c = std::cos(a.theta_angle);
    const double s = std::sin(a.theta_angle);
    return DensityMatrix2::from_entries(c * c, c * s * std::polar(1.0, -a.phi));
}

inline double purity(const DensityMatrix2& rho) noexcept {
    const double ee = rho.ee();
    return ee * ee + rho.gg() * rho.gg() + 2.0 * std::norm(rho.eg());
}

// Half the trace norm of rho1 - rho2; for a traceless Hermitian 2x2
// difference the eigenvalues are +-sqrt(d^2 + |o|^2).
inline double trace_distance(const DensityMatrix2& rho1, const DensityMatrix2& rho2) noexcept {
    const double d = rho1.ee() - rho2.ee();
    return std::hypot(d, std::abs(rho1.eg() - rho2.eg()));
}

// J(w) = (Theta / 2pi) gamma^2 / ((w0 - w)^2 + gamma^2)
inline double spectral_density(double frequency, const ModelParams& params) {
    const double gamma = params.gamma();
    const double detuning = params.center_frequency - frequency;
    if (!std::isfinite(detuning)) return 0.0;
    return params.theta / (2.0 * std::numbers::pi) * gamma * gamma /
           (detuning * detuning + gamma * gamma);
}

} // namespace nmeur
