#include <gtest/gtest.h>

#include <random>

#include "jpi/coupled_mode.hpp"
#include "jpi/errors.hpp"
#include "jpi/filter_synthesis.hpp"
#include "jpi/units.hpp"
#include "support.hpp"

using namespace jpi;
using namespace jpi::coupled_mode;
using testing_support::rel_diff;
using testing_support::uniform;

namespace {

const FilterSpec kTwoPole{2, 7.3e9, 0.75e9, 0.1, 50.0};

double numeric_d(double beta_c, double beta_p, double a, double phi) {
    const double w0 = hz_to_rad(7.3e9);
    const double g0 = hz_to_rad(0.9e9);
    const auto g = ModeGraph::symmetric(w0, g0, beta_c, beta_p, phi, a * g0);
    const auto s = mode_sparams(g, w0);
    return std::abs(s.forward()) / std::abs(s.reverse());
}

}  // namespace

TEST(ModeGraph, SidebandOrders) {
    EXPECT_EQ(sideband_order(Mode::A1), 0);
    EXPECT_EQ(sideband_order(Mode::B2), 1);
    EXPECT_EQ(sideband_order(Mode::C1), -1);
    const auto g = ModeGraph::symmetric(10.0, 1.0, 0.5, 0.3, 0.2, 0.7);
    EXPECT_DOUBLE_EQ(g.mode_freq(Mode::B1), 10.7);
    EXPECT_DOUBLE_EQ(g.mode_freq(Mode::C2), 9.3);
}

TEST(ModeGraph, RejectsBadParameters) {
    EXPECT_THROW(ModeGraph::symmetric(-1.0, 1.0, 0.5, 0.3, 0.0, 0.1), InvalidParameter);
    EXPECT_THROW(ModeGraph::symmetric(1.0, 0.0, 0.5, 0.3, 0.0, 0.1), InvalidParameter);
    EXPECT_THROW(ModeGraph::symmetric(1.0, 1.0, 0.5, -0.3, 0.0, 0.1), InvalidParameter);
    EXPECT_THROW(ModeGraph::from_filter(FilterSpec{3, 7.3e9, 0.8e9, 0.1, 50}, 0.5, 0.0, 1.0), InvalidParameter);
}

TEST(CouplingMatrix, EntriesFollowTheGraph) {
    const double w0 = 7.0, g0 = 0.5, wp = 0.3, phi = 0.9, bc = 0.6, bp = 0.4;
    const auto g = ModeGraph::symmetric(w0, g0, bc, bp, phi, wp);
    const double w = 7.1;
    const auto m = build_coupling_matrix(g, w);
    const int s[6] = {0, 0, 1, 1, -1, -1};
    for (int k = 0; k < 6; ++k)
        EXPECT_NEAR(std::abs(m(k, k) - Complex(w + s[k] * wp - w0, g0 / 2) / g0), 0.0, 1e-15);
    const Complex e = std::polar(bp, phi);
    EXPECT_EQ(m(0, 1), Complex(bc));
    EXPECT_EQ(m(2, 3), Complex(bc));
    EXPECT_EQ(m(4, 5), Complex(bc));
    EXPECT_EQ(m(0, 2), Complex(bp));
    EXPECT_EQ(m(0, 4), Complex(bp));
    EXPECT_NEAR(std::abs(m(1, 3) - e), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m(3, 1) - std::conj(e)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m(1, 5) - std::conj(e)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m(5, 1) - e), 0.0, 1e-15);
    EXPECT_EQ(m(2, 4), Complex(0.0));
    EXPECT_EQ(m(0, 3), Complex(0.0));
}

TEST(ModeSParams, UnitaryForAnyPump) {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        std::array<double, 6> rates;
        for (auto& r : rates) r = uniform(rng, 0.3, 2.0);
        const ModeGraph g(10.0, rates, uniform(rng, 0.1, 1.5), uniform(rng, 0.0, 1.5), uniform(rng, 0, kTwoPi),
                          uniform(rng, 0.0, 2.0));
        const auto s = mode_sparams(g, uniform(rng, 8.0, 12.0)).S;
        const Eigen::MatrixXcd err = s.adjoint() * s - Eigen::MatrixXcd::Identity(6, 6);
        EXPECT_LT(err.cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(ModeSParams, UnpumpedIsReciprocal) {
    const auto g = ModeGraph::from_filter(kTwoPole, 0.0, 0.0, hz_to_rad(700e6));
    for (double f : {7.0e9, 7.3e9, 7.6e9}) {
        const auto s = mode_sparams(g, hz_to_rad(f));
        EXPECT_NEAR(std::abs(s.forward() - s.reverse()), 0.0, 1e-12);
    }
}

// Two-pole conversion against the prototype: gamma0 = w0 wbar / g1 and
// beta_c = sqrt(g1/g2)/2 for the direct-Z0-coupled design.
TEST(ModeGraph, FromFilterMatchesPrototype) {
    const auto g = ModeGraph::from_filter(kTwoPole, 0.5, kPi / 2, hz_to_rad(700e6));
    const auto proto = filter_synthesis::chebyshev_prototype(2, 0.1);
    const auto k = filter_synthesis::knee_frequencies(kTwoPole);
    const double wbar = (k.omega2 - k.omega1) / std::sqrt(k.omega1 * k.omega2);
    EXPECT_LT(rel_diff(g.gamma0(), hz_to_rad(7.3e9) * wbar / proto[1]), 1e-9);
    EXPECT_LT(rel_diff(g.beta_c(), 0.5 * std::sqrt(proto[1] / proto[2])), 1e-9);
    EXPECT_NEAR(rad_to_hz(g.gamma0()) / 1e9, 0.8896, 5e-4);
    EXPECT_NEAR(g.beta_c(), 0.5821, 5e-4);
}

TEST(ModeSParams, PumpedTwoPoleFigures) {
    const auto g = ModeGraph::from_filter(kTwoPole, 0.5, kPi / 2, hz_to_rad(700e6));
    const auto s = mode_sparams(g, hz_to_rad(7.3e9));
    EXPECT_NEAR(to_db(s.forward()), -2.0, 1.0);
    EXPECT_NEAR(to_db(s.forward()) - to_db(s.reverse()), 15.0, 3.0);
    EXPECT_LT(to_db(s.reflection()), -10.0);
}

TEST(ClosedForm, IdentitiesOverRandomDraws) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 1000; ++k) {
        const double bc = uniform(rng, 0.1, 1.5), bp = uniform(rng, 0.0, 1.2), a = uniform(rng, 0.05, 2.0);
        const double phi = uniform(rng, -kPi, kPi);
        const int n = static_cast<int>(uniform(rng, -4, 4));
        EXPECT_NEAR(directionality_closed_form(bc, bp, a, n * kPi).D, 1.0, 1e-9);
        const auto p = directionality_closed_form(bc, bp, a, phi);
        const auto m = directionality_closed_form(bc, bp, a, -phi);
        if (p.complete_suppression || m.complete_suppression) continue;
        EXPECT_NEAR(p.D * m.D, 1.0, 1e-9);
    }
}

TEST(ClosedForm, MatchesSixModeInversion) {
    std::mt19937_64 rng(5);
    int compared = 0;
    for (int k = 0; k < 300; ++k) {
        const double bc = uniform(rng, 0.1, 1.5), bp = uniform(rng, 0.0, 1.0), a = uniform(rng, 0.05, 2.0);
        const double phi = uniform(rng, 0.0, kTwoPi);
        const auto t = directionality_closed_form(bc, bp, a, phi);
        if (t.denominator < 1e-6 * std::abs(t.M_a)) continue;
        EXPECT_LT(rel_diff(t.D, numeric_d(bc, bp, a, phi)), 1e-9) << bc << " " << bp << " " << a << " " << phi;
        ++compared;
    }
    EXPECT_GT(compared, 250);
}

TEST(ClosedForm, SuppressionPointIsADenominatorZero) {
    const auto g = ModeGraph::from_filter(kTwoPole, 0.5, kPi / 2, hz_to_rad(700e6));
    const double a = g.pump_freq() / g.gamma0();
    const auto bp = suppression_beta_p(g.beta_c(), a);
    ASSERT_TRUE(bp.has_value());
    EXPECT_NEAR(*bp, 0.62, 0.05);
    const auto t = directionality_closed_form(g.beta_c(), *bp, a, kPi / 2);
    EXPECT_LT(t.denominator, 1e-12);
    EXPECT_TRUE(t.complete_suppression);
    EXPECT_EQ(directionality_db(t.D), kDirectionalityCapDb);
    EXPECT_FALSE(suppression_beta_p(g.beta_c(), 0.0).has_value());
}

TEST(ClosedForm, RejectsNonPositiveCoupling) {
    EXPECT_THROW(directionality_closed_form(0.0, 0.5, 0.5, 1.0), InvalidParameter);
    EXPECT_THROW(directionality_db(std::nan("")), NumericalError);
}

TEST(PumpWindow, BoundsAndInfeasibility) {
    const auto w = pump_window({hz_to_rad(7.3e9), hz_to_rad(400e6), hz_to_rad(800e6)});
    EXPECT_DOUBLE_EQ(w.min_pump, hz_to_rad(400e6));
    EXPECT_DOUBLE_EQ(w.max_pump, hz_to_rad(800e6));
    EXPECT_THROW(pump_window({hz_to_rad(7.3e9), hz_to_rad(900e6), hz_to_rad(800e6)}), Infeasible);
}

TEST(SidebandFreqs, EdgesShiftedByThePump) {
    const auto s = sideband_freqs(7.3e9, 600e6, 700e6);
    EXPECT_NEAR(s.b_plus, 8.3e9, 1.0);
    EXPECT_NEAR(s.c_plus, 6.9e9, 1.0);
    EXPECT_NEAR(s.b_minus, 7.7e9, 1.0);
    EXPECT_NEAR(s.c_minus, 6.3e9, 1.0);
}

TEST(ForwardTransmission, ApproxFormula) {
    EXPECT_DOUBLE_EQ(forward_transmission_approx(0.0, 2.0), 1.0);
    EXPECT_NEAR(forward_transmission_approx(0.5, 2.0), 1.25 / 1.5, 1e-15);
    EXPECT_THROW(forward_transmission_approx(0.5, 1.0), InvalidParameter);
}
