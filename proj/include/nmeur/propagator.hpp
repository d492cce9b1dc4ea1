// propagator.hpp: the decoherence function Gamma(t).
//
// Three independent routes:
//   * gamma_analytic   residue sum of the rational Laplace image
//                      Upsilon(p) = N(p)/D(p),
//                        N(p) = 2p(p + gamma) + Theta gamma,
//                        D(p) = 2(p^2 + Omega^2)(p + gamma) + p Theta gamma;
//   * gamma_memoryless closed form of the gamma -> infinity limit;
//   * gamma_ode_oracle RK4 integration of the one-excitation amplitudes with
//                      the exponential memory kernel folded into an auxiliary
//                      variable.
//
// Curves are sampled on a uniform grid of dimensionless time Omega*t.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nmeur/errors.hpp"
#include "nmeur/model.hpp"

namespace nmeur {

struct TimeGrid {
    double step{1e-3};
    std::size_t size{2};

    static TimeGrid span(double t_max, std::size_t n_points) {
        if (!(std::isfinite(t_max) && t_max > 0.0)) throw DomainError("t_max must be > 0");
        if (n_points < 2) throw DomainError("a time grid needs at least two points");
        return {t_max / static_cast<double>(n_points - 1), n_points};
    }

    // Grid 0, dt, 2dt, ... covering [0, t_max]; the last point is rounded to
    // the nearest multiple of dt.
    static TimeGrid stepped(double t_max, double dt) {
        if (!(std::isfinite(t_max) && t_max > 0.0)) throw DomainError("t_max must be > 0");
        if (!(std::isfinite(dt) && dt > 0.0 && dt <= t_max)) throw DomainError("dt must be in (0, t_max]");
        const auto intervals = static_cast<std::size_t>(std::llround(t_max / dt));
        return {dt, std::max<std::size_t>(intervals, 1) + 1};
    }

    double at(std::size_t i) const noexcept { return step * static_cast<double>(i); }
    double back() const noexcept { return at(size - 1); }
};

enum class GammaMethod { analytic, memoryless, oracle };

inline std::string to_string(GammaMethod m) {
    switch (m) {
    case GammaMethod::analytic: return "analytic";
    case GammaMethod::memoryless: return "memoryless";
    case GammaMethod::oracle: return "oracle";
    }
    return "unknown";
}

struct PropagatorCurve {
    TimeGrid grid;
    std::vector<double> values;
    GammaMethod method{GammaMethod::analytic};
    bool degenerate_fallback{false};  // analytic requested, oracle used

    double time(std::size_t i) const noexcept { return grid.at(i); }
    std::size_t size() const noexcept { return values.size(); }

    void check_physical(double tol = 1e-9) const {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!(std::abs(values[i]) <= 1.0 + tol)) {
                throw ComputationError("|Gamma| exceeds 1 at t=" + std::to_string(time(i)) + " (" +
                                       to_string(method) + ")");
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Laplace image

struct RationalImage {
    std::array<double, 3> numerator{};    // p^2, p, 1
    std::array<double, 4> denominator{};  // p^3, p^2, p, 1

    static RationalImage from(const ModelParams& params) {
        const double w2 = params.omega * params.omega;
        const double g = params.gamma();
        const double tg = params.theta * g;
        return {{2.0, 2.0 * g, tg}, {2.0, 2.0 * g, 2.0 * w2 + tg, 2.0 * w2 * g}};
    }

    complex N(complex p) const noexcept { return (numerator[0] * p + numerator[1]) * p + numerator[2]; }

    complex D(complex p) const noexcept {
        return ((denominator[0] * p + denominator[1]) * p + denominator[2]) * p + denominator[3];
    }

    complex D_prime(complex p) const noexcept {
        return (3.0 * denominator[0] * p + 2.0 * denominator[1]) * p + denominator[2];
    }

    double coefficient_scale() const noexcept {
        double s = 0.0;
        for (double c : denominator) s = std::max(s, std::abs(c));
        return s;
    }
};

inline complex upsilon(complex p, const ModelParams& params) {
    const auto image = RationalImage::from(params);
    const complex d = image.D(p);
    if (std::abs(d) < 1e-300) throw ComputationError("Upsilon evaluated at a pole");
    return image.N(p) / d;
}

struct RootSet {
    std::array<complex, 3> roots{};
    bool near_degenerate{false};
};

inline constexpr double kDegenerateRootTol = 1e-8;

namespace detail {

// Pair up the roots of a real cubic: the root closest to the real axis is
// made exactly real; the other two become an exact conjugate pair unless
// both are (numerically) real.
inline void symmetrize_real_cubic(std::array<complex, 3>& r) {
    std::sort(r.begin(), r.end(), [](complex a, complex b) { return std::abs(a.imag()) < std::abs(b.imag()); });
    r[0] = {r[0].real(), 0.0};
    const double scale = std::max({std::abs(r[1]), std::abs(r[2]), 1e-300});
    if (std::abs(r[1].imag()) <= 1e-14 * scale && std::abs(r[2].imag()) <= 1e-14 * scale) {
        r[1] = {r[1].real(), 0.0};
        r[2] = {r[2].real(), 0.0};
        return;
    }
    const complex upper = r[1].imag() > 0.0 ? r[1] : r[2];
    const complex lower = r[1].imag() > 0.0 ? r[2] : r[1];
    const complex avg = 0.5 * (upper + std::conj(lower));
    r[1] = avg;
    r[2] = std::conj(avg);
}

} // namespace detail

inline RootSet denominator_roots(const ModelParams& params) {
    const auto image = RationalImage::from(params);
    const auto& d = image.denominator;

    // Companion matrix of the monic cubic p^3 + a2 p^2 + a1 p + a0.
    Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
    companion(0, 0) = -d[1] / d[0];
    companion(0, 1) = -d[2] / d[0];
    companion(0, 2) = -d[3] / d[0];
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;

    Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);
    if (solver.info() != Eigen::Success) throw ComputationError("companion eigenvalue solve failed");

    RootSet set;
    for (int i = 0; i < 3; ++i) {
        complex p = solver.eigenvalues()[i];
        const complex dp = image.D_prime(p);
        if (std::abs(dp) > 0.0) {
            const complex polished = p - image.D(p) / dp;
            if (std::abs(image.D(polished)) <= std::abs(image.D(p))) p = polished;
        }
        set.roots[static_cast<std::size_t>(i)] = p;
    }
    detail::symmetrize_real_cubic(set.roots);

    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            const double scale = std::max({std::abs(set.roots[i]), std::abs(set.roots[j]), 1e-300});
            if (std::abs(set.roots[i] - set.roots[j]) < kDegenerateRootTol * scale) set.near_degenerate = true;
        }
    }
    return set;
}

// ---------------------------------------------------------------------------
// ODE oracle

// Amplitudes of |e,0,0>, |g,1,0> and the memory variable
// z(t) = int_0^t alpha(t,s) c(s) ds.
struct OracleState {
    complex b{1.0};
    complex c{0.0};
    complex z{0.0};
    double t{0.0};

    double norm() const noexcept { return std::norm(b) + std::norm(c); }
};

// Coupling rates in the same (arbitrary) time unit as the grid.
struct AmplitudeRates {
    double omega{1.0};
    double theta{0.0};
    double gamma{1.0};
};

struct OracleOptions {
    double max_step{1e-3};
    double tolerance{1e-9};  // Richardson estimate of the global error
    int max_refinements{6};
};

namespace detail {

struct AmplitudeDerivative {
    complex db, dc, dz;
};

inline AmplitudeDerivative amplitude_rhs(const AmplitudeRates& r, complex b, complex c, complex z) noexcept {
    const complex i{0.0, 1.0};
    return {-i * r.omega * c, -i * r.omega * b - z, -r.gamma * z + 0.5 * r.theta * r.gamma * c};
}

inline void rk4_step(const AmplitudeRates& r, OracleState& s, double h) noexcept {
    const auto k1 = amplitude_rhs(r, s.b, s.c, s.z);
    const auto k2 = amplitude_rhs(r, s.b + 0.5 * h * k1.db, s.c + 0.5 * h * k1.dc, s.z + 0.5 * h * k1.dz);
    const auto k3 = amplitude_rhs(r, s.b + 0.5 * h * k2.db, s.c + 0.5 * h * k2.dc, s.z + 0.5 * h * k2.dz);
    const auto k4 = amplitude_rhs(r, s.b + h * k3.db, s.c + h * k3.dc, s.z + h * k3.dz);
    s.b += h / 6.0 * (k1.db + 2.0 * k2.db + 2.0 * k3.db + k4.db);
    s.c += h / 6.0 * (k1.dc + 2.0 * k2.dc + 2.0 * k3.dc + k4.dc);
    s.z += h / 6.0 * (k1.dz + 2.0 * k2.dz + 2.0 * k3.dz + k4.dz);
    s.t += h;
}

inline std::vector<OracleState> integrate_fixed(const AmplitudeRates& r, const TimeGrid& grid, std::size_t substeps) {
    std::vector<OracleState> out;
    out.reserve(grid.size);
    OracleState s;
    out.push_back(s);
    const double h = grid.step / static_cast<double>(substeps);
    for (std::size_t i = 1; i < grid.size; ++i) {
        for (std::size_t k = 0; k < substeps; ++k) rk4_step(r, s, h);
        s.t = grid.at(i);
        out.push_back(s);
    }
    return out;
}

} // namespace detail

// Integrates b(0)=1, c(0)=z(0)=0 with fixed-step RK4, comparing against a
// half-step run; the step is halved until the two agree within tolerance.
inline std::vector<OracleState> amplitude_oracle(const TimeGrid& grid, const AmplitudeRates& rates,
                                                 const OracleOptions& opts = {}) {
    double h_target = opts.max_step;
    const double fastest = std::max({rates.gamma, rates.theta, rates.omega});
    if (fastest > 0.0) h_target = std::min(h_target, 0.25 / fastest);
    auto substeps = static_cast<std::size_t>(std::ceil(grid.step / h_target - 1e-12));
    substeps = std::max<std::size_t>(substeps, 1);

    auto coarse = detail::integrate_fixed(rates, grid, substeps);
    for (int attempt = 0; attempt <= opts.max_refinements; ++attempt) {
        auto fine = detail::integrate_fixed(rates, grid, 2 * substeps);
        double diff = 0.0;
        for (std::size_t i = 0; i < fine.size(); ++i) diff = std::max(diff, std::abs(fine[i].b - coarse[i].b));
        // RK4: err(h/2) ~ |y(h) - y(h/2)| / 15
        if (std::isfinite(diff) && diff / 15.0 <= opts.tolerance) return fine;
        coarse = std::move(fine);
        substeps *= 2;
    }
    throw ComputationError("ODE oracle: Richardson error estimate did not reach tolerance");
}

inline PropagatorCurve gamma_ode_oracle(const TimeGrid& grid, const ModelParams& params,
                                        const OracleOptions& opts = {}) {
    const auto s = params.scaled();
    const auto states = amplitude_oracle(grid, {1.0, s.theta, s.gamma()}, opts);
    PropagatorCurve curve{grid, {}, GammaMethod::oracle, false};
    curve.values.reserve(states.size());
    for (const auto& st : states) curve.values.push_back(st.b.real());
    return curve;
}

// ---------------------------------------------------------------------------
// Analytic residue sum

namespace detail {

struct Residues {
    std::array<complex, 3> poles;
    std::array<complex, 3> weights;

    // A cluster of k nearly equal roots is resolved by the eigensolver only to
    // ~eps^(1/k), which can sit above the separation threshold; the residues
    // then grow like 1/separation^(k-1) and the sum cancels catastrophically.
    bool ill_conditioned() const noexcept {
        for (const auto& w : weights)
            if (!(std::abs(w) < 1e6)) return true;
        return false;
    }

    complex at(double t) const noexcept {
        complex sum = 0.0;
        for (std::size_t i = 0; i < 3; ++i) sum += weights[i] * std::exp(poles[i] * t);
        return sum;
    }
};

inline Residues residues(const ModelParams& scaled, const RootSet& roots) {
    const auto image = RationalImage::from(scaled);
    Residues r{roots.roots, {}};
    for (std::size_t i = 0; i < 3; ++i) r.weights[i] = image.N(roots.roots[i]) / image.D_prime(roots.roots[i]);
    return r;
}

inline double checked_real(complex v, double t) {
    if (!(std::abs(v.imag()) < 1e-9)) {
        throw ComputationError("residue sum has imaginary part " + std::to_string(v.imag()) +
                               " at t=" + std::to_string(t));
    }
    return v.real();
}

} // namespace detail

inline PropagatorCurve gamma_analytic(const TimeGrid& grid, const ModelParams& params) {
    const auto s = params.scaled();
    const auto roots = denominator_roots(s);
    const auto res = detail::residues(s, roots);
    if (roots.near_degenerate || res.ill_conditioned()) {
        auto curve = gamma_ode_oracle(grid, params);
        curve.degenerate_fallback = true;
        return curve;
    }
    PropagatorCurve curve{grid, {}, GammaMethod::analytic, false};
    curve.values.resize(grid.size);
    // Gamma(0) = 1 holds exactly; the residue sum only reproduces it to rounding.
    for (std::size_t i = 0; i < grid.size; ++i)
        curve.values[i] = grid.at(i) == 0.0 ? 1.0 : detail::checked_real(res.at(grid.at(i)), grid.at(i));
    return curve;
}

// ---------------------------------------------------------------------------
// Memoryless closed form

// Gamma(t) = e^{-Theta t/4} [ (Theta/lambda) sinh(lambda t/4) + cosh(lambda t/4) ],
// lambda = sqrt(Theta^2 - 16 Omega^2), evaluated in complex arithmetic.
inline double gamma_memoryless(double t, double omega, double theta) {
    if (!(t >= 0.0)) throw DomainError("gamma_memoryless needs t >= 0");
    const complex lambda = std::sqrt(complex(theta * theta - 16.0 * omega * omega, 0.0));
    const double decay = theta * t / 4.0;

    if (std::abs(lambda) == 0.0 || std::abs(lambda) < 1e-8 * theta) return std::exp(-decay) * (1.0 + decay);

    const complex x = lambda * t / 4.0;
    complex value;
    if (std::abs(x) < 1e-3) {
        // cosh(x) + decay * sinh(x)/x by series; avoids Theta/lambda blow-up.
        const complex x2 = x * x;
        const complex cosh_x = 1.0 + x2 / 2.0 * (1.0 + x2 / 12.0 * (1.0 + x2 / 30.0));
        const complex sinhc_x = 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0));
        value = std::exp(-decay) * (cosh_x + decay * sinhc_x);
    } else {
        // Re(lambda) <= Theta, so neither exponential can overflow.
        const complex ratio = theta / lambda;
        value = 0.5 * ((1.0 + ratio) * std::exp(x - decay) + (1.0 - ratio) * std::exp(-x - decay));
    }
    if (!(std::abs(value.imag()) < 1e-12)) {
        throw ComputationError("memoryless Gamma has imaginary part " + std::to_string(value.imag()));
    }
    return value.real();
}

inline PropagatorCurve gamma_memoryless_curve(const TimeGrid& grid, const ModelParams& params) {
    const auto s = params.scaled();
    PropagatorCurve curve{grid, {}, GammaMethod::memoryless, false};
    curve.values.resize(grid.size);
    for (std::size_t i = 0; i < grid.size; ++i) curve.values[i] = gamma_memoryless(grid.at(i), 1.0, s.theta);
    return curve;
}

// ---------------------------------------------------------------------------
// Dispatch on the reservoir: residues for Lorentzian, closed form otherwise.

inline PropagatorCurve gamma_curve(const TimeGrid& grid, const ModelParams& params) {
    return params.is_memoryless() ? gamma_memoryless_curve(grid, params) : gamma_analytic(grid, params);
}

inline PropagatorCurve gamma_curve(const TimeGrid& grid, const ModelParams& params, GammaMethod method) {
    switch (method) {
    case GammaMethod::analytic: return gamma_analytic(grid, params);
    case GammaMethod::memoryless: return gamma_memoryless_curve(grid, params);
    case GammaMethod::oracle: return gamma_ode_oracle(grid, params);
    }
    throw DomainError("unknown method");
}

// Gamma at a single dimensionless time Omega*t.
inline double gamma_at(double omega_t, const ModelParams& params) {
    if (!(omega_t >= 0.0)) throw DomainError("time must be >= 0");
    const auto s = params.scaled();
    if (s.is_memoryless()) return gamma_memoryless(omega_t, 1.0, s.theta);
    const auto roots = denominator_roots(s);
    const auto res = detail::residues(s, roots);
    if (roots.near_degenerate || res.ill_conditioned()) {
        if (omega_t == 0.0) return 1.0;
        return gamma_ode_oracle(TimeGrid{omega_t, 2}, params).values.back();
    }
    return omega_t == 0.0 ? 1.0 : detail::checked_real(res.at(omega_t), omega_t);
}

} // namespace nmeur
