#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nmeur/dynamics.hpp"
#include "test_support.hpp"

using namespace nmeur;
using nmeur::testing::random_state;
using std::numbers::pi;

TEST(Evolve, IdentityAndFullDecay) {
    const auto rho = pure_state_from_angles({pi / 3, pi / 6});
    EXPECT_EQ(evolve(rho, 1.0), rho);
    const auto decayed = evolve(rho, 0.0);
    EXPECT_EQ(decayed.ee(), 0.0);
    EXPECT_EQ(decayed.eg(), complex(0.0));
}

TEST(Evolve, GroundStateIsFixed) {
    for (double g : {-1.0, -0.4, 0.0, 0.3, 1.0}) EXPECT_EQ(evolve(DensityMatrix2::ground(), g), DensityMatrix2::ground());
}

TEST(Evolve, RejectsUnphysicalGamma) {
    EXPECT_THROW(evolve(DensityMatrix2::excited(), 1.0 + 1e-6), ComputationError);
    EXPECT_NO_THROW(evolve(DensityMatrix2::excited(), 1.0 + 1e-10));
}

TEST(Evolve, PreservesValidityAndPurityFormula) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> g(-1.0, 1.0);
    for (int k = 0; k < 5000; ++k) {
        const auto rho = random_state(rng);
        const double gamma = g(rng);
        const auto out = evolve(rho, gamma);
        EXPECT_TRUE(DensityMatrix2::is_physical(out.ee(), out.eg()));
        const double ee = rho.ee() * gamma * gamma;
        const double coh = std::abs(rho.eg() * gamma);
        EXPECT_NEAR(purity(out), ee * ee + (1 - ee) * (1 - ee) + 2 * coh * coh, 1e-15);
    }
}

TEST(OptimalPair, Values) {
    EXPECT_EQ(optimal_pair_distance(1.0), 1.0);
    EXPECT_EQ(optimal_pair_distance(-0.3), 0.3);
    EXPECT_THROW(optimal_pair_distance(1.5), ComputationError);
}

TEST(OptimalPair, MatchesGenericTraceDistance) {
    const auto plus = DensityMatrix2::from_entries(0.5, 0.5);
    const auto minus = DensityMatrix2::from_entries(0.5, -0.5);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> g(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double gamma = g(rng);
        EXPECT_NEAR(optimal_pair_distance(gamma), trace_distance(evolve(plus, gamma), evolve(minus, gamma)), 1e-12);
    }
}

TEST(TimeSeries, FirstRecordIsInitialState) {
    const PureStateAngles angles{pi / 4, pi / 8};
    const auto series = time_series(ModelParams::lorentzian(1.0, 1.0, 1.0), angles, 10.0, 101);
    ASSERT_EQ(series.size(), 101u);
    const auto& r0 = series.front();
    EXPECT_EQ(r0.t, 0.0);
    EXPECT_NEAR(r0.gamma_value, 1.0, 1e-12);
    EXPECT_NEAR(r0.distance, 1.0, 1e-12);
    EXPECT_NEAR(r0.purity, 1.0, 1e-12);
    EXPECT_NEAR(trace_distance(r0.rho, pure_state_from_angles(angles)), 0.0, 1e-12);
}

TEST(TimeSeries, RecordsAreSelfConsistent) {
    const auto series = time_series(ModelParams::lorentzian(1.0, 5.0, 2.0), {pi / 3, pi / 6}, 30.0, 301);
    for (const auto& r : series) {
        EXPECT_DOUBLE_EQ(r.distance, std::abs(r.gamma_value));
        EXPECT_DOUBLE_EQ(r.purity, purity(r.rho));
        EXPECT_DOUBLE_EQ(r.entropic_sum, entropic_sum_xz(r.rho));
        EXPECT_GE(r.entropic_sum, r.bounds.cp - 1e-9);
        EXPECT_LE(r.distance, 1.0);
    }
}

TEST(TimeSeries, GroundStateSitsOnTheBound) {
    for (auto params : {ModelParams::lorentzian(1.0, 1.0, 1.0), ModelParams::memoryless(1.0, 0.15)}) {
        for (const auto& r : time_series(params, {pi / 2, 0.3}, 40.0, 401)) EXPECT_NEAR(r.entropic_sum, 1.0, 1e-12);
    }
}

TEST(TimeSeries, DistanceOscillatesThenVanishes) {
    // Omega = Theta, gamma = Omega.
    const auto series = time_series(ModelParams::lorentzian(1.0, 1.0, 1.0), {pi / 4, pi / 8}, 200.0, 20001);
    int rises = 0;
    for (std::size_t i = 1; i < series.size(); ++i)
        if (series[i].distance > series[i - 1].distance + 1e-12) ++rises;
    EXPECT_GT(rises, 0);
    EXPECT_LT(series.back().distance, 1e-6);
    EXPECT_NEAR(series.back().entropic_sum, 1.0, 1e-5);
}

TEST(TimeSeries, ParameterChecks) {
    EXPECT_THROW(time_series(ModelParams::memoryless(1.0, 1.0), {0.0, 0.0}, 0.0, 10), DomainError);
    EXPECT_THROW(time_series(ModelParams::memoryless(1.0, 1.0), {0.0, 0.0}, 1.0, 1), DomainError);
}
