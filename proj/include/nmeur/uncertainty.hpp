// uncertainty.hpp: Shannon measurement entropies of a qubit and the
// Robertson, Deutsch, Maassen-Uffink and Coles-Piani lower bounds.
// All logarithms are base 2.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "nmeur/errors.hpp"
#include "nmeur/model.hpp"

namespace nmeur {

using QubitVector = std::array<complex, 2>;  // components on (|e>, |g>)

inline complex inner(const QubitVector& a, const QubitVector& b) noexcept {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

// Orthonormal measurement basis {|psi_1>, |psi_2>}.
class ObservableBasis {
public:
    ObservableBasis(QubitVector first, QubitVector second) : vectors_{first, second} {
        constexpr double tol = 1e-12;
        if (std::abs(std::abs(inner(first, first)) - 1.0) > tol || std::abs(std::abs(inner(second, second)) - 1.0) > tol)
            throw DomainError("basis vectors must have unit norm");
        if (std::abs(inner(first, second)) > tol) throw DomainError("basis vectors must be orthogonal");
    }

    // Eigenbasis of n.sigma for the Bloch direction (polar, azimuth).
    static ObservableBasis bloch(double polar, double azimuth) {
        const double c = std::cos(polar / 2.0);
        const double s = std::sin(polar / 2.0);
        const complex phase = std::polar(1.0, azimuth);
        return {{c, phase * s}, {s, -phase * c}};
    }

    static ObservableBasis pauli_z() { return bloch(0.0, 0.0); }
    static ObservableBasis pauli_x() { return bloch(std::numbers::pi / 2, 0.0); }
    static ObservableBasis pauli_y() { return bloch(std::numbers::pi / 2, std::numbers::pi / 2); }

    const QubitVector& operator[](std::size_t i) const noexcept { return vectors_[i]; }

private:
    std::array<QubitVector, 2> vectors_;
};

// <psi| rho |psi>
inline double expectation(const DensityMatrix2& rho, const QubitVector& psi) noexcept {
    return std::norm(psi[0]) * rho.ee() + std::norm(psi[1]) * rho.gg() +
           2.0 * (std::conj(psi[0]) * rho.eg() * psi[1]).real();
}

// Binary entropy in bits; 0 log 0 = 0, probabilities within 1e-12 of the
// unit interval are clamped.
inline double binary_entropy(double p) {
    constexpr double tol = kPositivityTol;
    if (p < -tol || p > 1.0 + tol || !std::isfinite(p)) throw DomainError("probability outside [0, 1]");
    p = std::clamp(p, 0.0, 1.0);
    auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
    return term(p) + term(1.0 - p);
}

inline double measurement_entropy(const DensityMatrix2& rho, const ObservableBasis& basis) {
    return binary_entropy(expectation(rho, basis[0]));
}

inline double entropy_x(const DensityMatrix2& rho) { return binary_entropy(0.5 + rho.eg().real()); }
inline double entropy_z(const DensityMatrix2& rho) { return binary_entropy(rho.ee()); }

// S(sigma_x) + S(sigma_z)
inline double entropic_sum_xz(const DensityMatrix2& rho) { return entropy_x(rho) + entropy_z(rho); }

struct OverlapConstants {
    double c{0.5};
    double c_tilde{0.5};
};

// c is the largest squared overlap |<psi_i|phi_j>|^2; c_tilde the second
// largest *distinct* value (equal to c when all four overlaps coincide).
inline OverlapConstants overlap_constants(const ObservableBasis& p, const ObservableBasis& q) {
    constexpr double same = 1e-12;
    std::vector<double> overlaps;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) overlaps.push_back(std::norm(inner(p[i], q[j])));
    std::sort(overlaps.begin(), overlaps.end(), std::greater<>());

    OverlapConstants k{overlaps.front(), overlaps.front()};
    for (double v : overlaps) {
        if (k.c - v > same) {
            k.c_tilde = v;
            break;
        }
    }
    return k;
}

namespace detail {

inline void check_c(double c) {
    constexpr double tol = 1e-12;
    if (!(c >= 0.5 - tol && c <= 1.0 + tol)) throw DomainError("overlap constant c must lie in [1/2, 1]");
}

} // namespace detail

inline double bound_deutsch(double c) {
    detail::check_c(c);
    return 2.0 * std::log2(2.0 / (1.0 + std::sqrt(c)));
}

inline double bound_kmu(double c) {
    detail::check_c(c);
    return -std::log2(c);
}

inline double bound_cp(double c, double c_tilde) {
    detail::check_c(c);
    if (!(c_tilde >= 0.0 && c_tilde <= c)) throw DomainError("c_tilde must lie in [0, c]");
    if (c_tilde == 0.0) {
        if (c == 1.0) return bound_kmu(c);
        throw DomainError("c_tilde = 0 requires c = 1");
    }
    return -std::log2(c) + 0.5 * (1.0 - std::sqrt(c)) * std::log2(c / c_tilde);
}

struct EntropicBounds {
    double deutsch;
    double kmu;
    double cp;
};

inline EntropicBounds entropic_bounds(const OverlapConstants& k) {
    return {bound_deutsch(k.c), bound_kmu(k.c), bound_cp(k.c, k.c_tilde)};
}

// Bounds for the (sigma_x, sigma_z) pair, c = c_tilde = 1/2.
inline EntropicBounds pauli_xz_bounds() { return entropic_bounds({0.5, 0.5}); }

// (1/2)|<[sigma_x, sigma_z]>| = |<sigma_y>|
inline double robertson_bound(const DensityMatrix2& rho) noexcept { return std::abs(2.0 * rho.eg().imag()); }

} // namespace nmeur
