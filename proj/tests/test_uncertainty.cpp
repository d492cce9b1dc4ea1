#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nmeur/dynamics.hpp"
#include "nmeur/uncertainty.hpp"
#include "test_support.hpp"

using namespace nmeur;
using nmeur::testing::random_state;
using std::numbers::pi;

// 2 log2(2 / (1 + sqrt(1/2))), 40-digit mpmath evaluation.
constexpr double kDeutschHalf = 0.45689339367277605;

TEST(MeasurementEntropy, ExamplesInFixedBases) {
    const auto e = DensityMatrix2::excited();
    EXPECT_EQ(measurement_entropy(e, ObservableBasis::pauli_z()), 0.0);
    EXPECT_NEAR(measurement_entropy(e, ObservableBasis::pauli_x()), 1.0, 1e-15);
    for (const auto& b : {ObservableBasis::pauli_x(), ObservableBasis::pauli_y(), ObservableBasis::pauli_z(),
                          ObservableBasis::bloch(0.7, 2.1)}) {
        EXPECT_NEAR(measurement_entropy(DensityMatrix2::maximally_mixed(), b), 1.0, 1e-15);
    }
}

TEST(MeasurementEntropy, GenericBasisMatchesPauliShortcut) {
    std::mt19937_64 rng(29);
    for (int k = 0; k < 1000; ++k) {
        const auto rho = random_state(rng);
        EXPECT_NEAR(measurement_entropy(rho, ObservableBasis::pauli_x()), entropy_x(rho), 1e-12);
        EXPECT_NEAR(measurement_entropy(rho, ObservableBasis::pauli_z()), entropy_z(rho), 1e-12);
    }
}

TEST(BinaryEntropy, ClampAndDomain) {
    EXPECT_EQ(binary_entropy(0.0), 0.0);
    EXPECT_EQ(binary_entropy(1.0), 0.0);
    EXPECT_EQ(binary_entropy(1.0 + 1e-13), 0.0);
    EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
    EXPECT_THROW(binary_entropy(1.1), DomainError);
    EXPECT_THROW(binary_entropy(-0.01), DomainError);
}

TEST(EntropicSum, Examples) {
    EXPECT_NEAR(entropic_sum_xz(DensityMatrix2::ground()), 1.0, 1e-15);
    EXPECT_NEAR(entropic_sum_xz(DensityMatrix2::maximally_mixed()), 2.0, 1e-15);
    EXPECT_NEAR(entropic_sum_xz(DensityMatrix2::from_entries(0.5, 0.5)), 1.0, 1e-15);
    EXPECT_NEAR(entropy_x(DensityMatrix2::from_entries(0.5, 0.5)), 0.0, 1e-15);
}

TEST(EntropicSum, NeverBelowColesPianiBound) {
    const double bound = bound_cp(0.5, 0.5);
    std::mt19937_64 rng(31);
    for (int k = 0; k < 10000; ++k) EXPECT_GE(entropic_sum_xz(random_state(rng)), bound - 1e-9);
}

TEST(OverlapConstants, Examples) {
    const auto xz = overlap_constants(ObservableBasis::pauli_x(), ObservableBasis::pauli_z());
    EXPECT_NEAR(xz.c, 0.5, 1e-15);
    EXPECT_NEAR(xz.c_tilde, 0.5, 1e-15);

    const auto same = overlap_constants(ObservableBasis::pauli_z(), ObservableBasis::pauli_z());
    EXPECT_DOUBLE_EQ(same.c, 1.0);
    EXPECT_DOUBLE_EQ(same.c_tilde, 0.0);

    // Bloch directions 60 degrees apart: |<psi|phi>|^2 = cos^2(30 deg).
    const auto tilted = overlap_constants(ObservableBasis::pauli_z(), ObservableBasis::bloch(pi / 3, 0.4));
    EXPECT_NEAR(tilted.c, 0.75, 1e-15);
    EXPECT_NEAR(tilted.c_tilde, 0.25, 1e-15);
}

TEST(OverlapConstants, QubitComplementRule) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> ang(0.0, 2 * pi);
    for (int k = 0; k < 200; ++k) {
        const auto a = ObservableBasis::bloch(ang(rng), ang(rng));
        const auto b = ObservableBasis::bloch(ang(rng), ang(rng));
        const auto oc = overlap_constants(a, b);
        EXPECT_GE(oc.c, 0.5 - 1e-12);
        EXPECT_LE(oc.c, 1.0 + 1e-12);
        EXPECT_GE(oc.c, oc.c_tilde);
        if (std::abs(oc.c - 0.5) > 1e-9) {
            EXPECT_NEAR(oc.c_tilde, 1.0 - oc.c, 1e-12);
        }
    }
}

TEST(ObservableBasis, RejectsNonOrthonormal) {
    EXPECT_THROW(ObservableBasis({1.0, 0.0}, {1.0, 0.0}), DomainError);
    EXPECT_THROW(ObservableBasis({2.0, 0.0}, {0.0, 1.0}), DomainError);
}

TEST(Bounds, AtHalf) {
    EXPECT_EQ(bound_kmu(0.5), 1.0);
    EXPECT_DOUBLE_EQ(bound_cp(0.5, 0.5), 1.0);
    EXPECT_NEAR(bound_deutsch(0.5), kDeutschHalf, 1e-12);
}

TEST(Bounds, CommutingObservables) {
    EXPECT_EQ(bound_kmu(1.0), 0.0);
    EXPECT_EQ(bound_deutsch(1.0), 0.0);
    EXPECT_EQ(bound_cp(1.0, 0.0), 0.0);
}

TEST(Bounds, Ordering) {
    for (int k = 0; k <= 100; ++k) {
        const double c = 0.5 + 0.5 * k / 100.0;
        const double cp = bound_cp(c, 1.0 - c), kmu = bound_kmu(c), d = bound_deutsch(c);
        EXPECT_GE(cp, kmu - 1e-15);
        EXPECT_GE(kmu, d - 1e-15);
    }
}

TEST(Bounds, DomainErrors) {
    EXPECT_THROW(bound_kmu(0.4), DomainError);
    EXPECT_THROW(bound_deutsch(1.2), DomainError);
    EXPECT_THROW(bound_cp(0.7, 0.8), DomainError);
    EXPECT_THROW(bound_cp(0.7, 0.0), DomainError);
}

TEST(Robertson, Examples) {
    EXPECT_EQ(robertson_bound(DensityMatrix2::maximally_mixed()), 0.0);
    EXPECT_EQ(robertson_bound(DensityMatrix2::excited()), 0.0);
    EXPECT_DOUBLE_EQ(robertson_bound(DensityMatrix2::from_entries(0.5, complex(0.0, -0.5))), 1.0);
    EXPECT_DOUBLE_EQ(robertson_bound(DensityMatrix2::from_entries(0.5, complex(0.0, 0.5))), 1.0);
}

TEST(EntropicSum, SymmetricAboutHalfPiPhase) {
    const auto curve = gamma_curve(TimeGrid::span(20.0, 201), ModelParams::memoryless(1.0, 0.15));
    for (int i = 0; i <= 10; ++i) {
        const double theta = (pi / 2) * i / 10.0;
        for (double delta : {0.1, 0.5, 1.2}) {
            const auto a = pure_state_from_angles({theta, pi / 2 + delta});
            const auto b = pure_state_from_angles({theta, pi / 2 - delta});
            for (double g : curve.values)
                EXPECT_NEAR(entropic_sum_xz(evolve(a, g)), entropic_sum_xz(evolve(b, g)), 1e-12);
        }
    }
}
