#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "jpi/errors.hpp"
#include "jpi/squid.hpp"
#include "jpi/units.hpp"
#include "support.hpp"

using namespace jpi;
using namespace jpi::squid;

namespace {

// Fourier coefficient c_k of f over one period, f(theta) sampled uniformly.
template <class F>
Complex fourier(F f, int k, int samples = 4096) {
    Complex acc = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double th = kTwoPi * s / samples;
        acc += f(th) * std::polar(1.0, -k * th);
    }
    return acc / static_cast<double>(samples);
}

}  // namespace

TEST(SquidInductance, MatchesJosephsonFormula) {
    const double ic0 = 5e-6;
    const double l = squid_inductance(ic0, 0.3 * kPi);
    const double expected = 2.067833848e-15 / (4.0 * kPi * ic0 * std::cos(0.3 * kPi));
    EXPECT_NEAR(l / expected, 1.0, 1e-12);
    EXPECT_NEAR(squid_inductance(ic0, 0.0), 32.91e-12, 0.01e-12);
}

TEST(SquidInductance, EvenInFluxAndDivergesAtHalfPi) {
    EXPECT_DOUBLE_EQ(squid_inductance(2e-6, 0.4), squid_inductance(2e-6, -0.4));
    EXPECT_THROW(squid_inductance(2e-6, kPi / 2), DivergentInductance);
    EXPECT_THROW(squid_inductance(0.0, 0.1), InvalidParameter);
}

TEST(SquidInductance, CriticalCurrentInverse) {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 50; ++k) {
        const double l0 = testing_support::uniform(rng, 5e-12, 500e-12);
        const double beta = testing_support::uniform(rng, -1.4, 1.4);
        EXPECT_NEAR(squid_inductance(ic0_for_inductance(l0, beta), beta) / l0, 1.0, 1e-12);
    }
}

TEST(SquidValidate, RejectsNonPhysicalParameters) {
    SquidParams p;
    p.beta = kPi / 2;
    EXPECT_THROW(validate(p), DivergentInductance);
    p.beta = 0.1;
    p.ic0 = -1.0;
    EXPECT_THROW(validate(p), InvalidParameter);
    p.ic0 = 1e-6;
    p.alpha = -0.1;
    EXPECT_THROW(validate(p), InvalidParameter);
    p.alpha = 0.6;
    EXPECT_EQ(validate(p).size(), 1u);
    p.alpha = 0.1;
    EXPECT_TRUE(validate(p).empty());
}

TEST(MixingCoeffs, FourWavePointHasNoThreeWaveTerms) {
    SquidParams p{5e-6, 0.0, 0.1 * kPi, hz_to_rad(500e6), 0.3};
    const auto m = mixing_coeffs(p);
    EXPECT_EQ(std::abs(m.kappa_plus), 0.0);
    EXPECT_EQ(std::abs(m.kappa_minus), 0.0);
    EXPECT_GT(std::abs(m.eta_plus), 0.0);
    EXPECT_GT(std::abs(m.eta_minus), 0.0);
}

TEST(MixingCoeffs, UnpumpedIsStatic) {
    SquidParams p{5e-6, 0.3 * kPi, 0.0, 0.0, 0.0};
    const auto m = mixing_coeffs(p);
    EXPECT_DOUBLE_EQ(m.gamma, 1.0);
    EXPECT_EQ(std::abs(m.kappa_plus) + std::abs(m.eta_plus), 0.0);
}

TEST(MixingCoeffs, PumpPhaseRotation) {
    SquidParams p{5e-6, 0.3 * kPi, 0.1 * kPi, hz_to_rad(500e6), 0.2};
    const auto m0 = mixing_coeffs(p);
    const double d = 0.7;
    p.pump_phase += d;
    const auto m1 = mixing_coeffs(p);
    EXPECT_NEAR(std::abs(m1.kappa_plus - m0.kappa_plus * std::polar(1.0, d)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m1.kappa_minus - m0.kappa_minus * std::polar(1.0, -d)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m1.eta_plus - m0.eta_plus * std::polar(1.0, 2 * d)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m1.eta_minus - m0.eta_minus * std::polar(1.0, -2 * d)), 0.0, 1e-15);
}

// The coefficients against a numerical Fourier series of the expansion form
// L0 [1 + tan(b) a cos + a^2 cos^2 / 2]. gamma and kappa are its exact
// harmonics; eta is twice the true second harmonic (a^2/4 versus a^2/8).
TEST(MixingCoeffs, AgainstFourierSeriesOfExpansion) {
    SquidParams p{5e-6, 0.3 * kPi, 0.1 * kPi, hz_to_rad(500e6), 0.4};
    const auto m = mixing_coeffs(p);
    auto f = [&](double th) {
        const double c = std::cos(th + p.pump_phase);
        return 1.0 + std::tan(p.beta) * p.alpha * c + p.alpha * p.alpha * c * c / 2.0;
    };
    EXPECT_NEAR(std::abs(fourier(f, 0) - m.gamma), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(fourier(f, 1) - m.kappa_plus), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(fourier(f, -1) - m.kappa_minus), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(2.0 * fourier(f, 2) - m.eta_plus), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(2.0 * fourier(f, -2) - m.eta_minus), 0.0, 1e-12);
}

TEST(TimeInductance, ModelsAgreeAtFourWavePoint) {
    SquidParams p{5e-6, 0.0, 0.1 * kPi, hz_to_rad(500e6), 0.0};
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double t = k / 200.0 / 500e6;
        const auto l = time_inductance(p, t);
        worst = std::max(worst, std::abs(l.exact - l.expansion) / l.exact);
    }
    EXPECT_LT(worst, 0.01);
}

// At beta = 0.3 pi the expansion omits the tan^2(b) a^2 cos^2 term of sec
// (about a fifth of L0 at the peak); higher orders bring the peak gap to ~0.42 L0.
TEST(TimeInductance, ExpansionErrorAtThreeWavePoint) {
    SquidParams p{5e-6, 0.3 * kPi, 0.1 * kPi, hz_to_rad(500e6), 0.0};
    const auto l = time_inductance(p, 0.0);
    const double l0 = squid_inductance(p.ic0, p.beta);
    EXPECT_NEAR(l.exact, squid_inductance(p.ic0, p.beta + p.alpha), 1e-24);
    const double tb = std::tan(p.beta), a = p.alpha;
    const double second_order = 1.0 + tb * a + (0.5 + tb * tb) * a * a;
    EXPECT_NEAR(second_order - l.expansion / l0, tb * tb * a * a, 1e-12);
    EXPECT_NEAR(tb * tb * a * a, 0.187, 1e-3);
    const double err = (l.exact - l.expansion) / l0;
    EXPECT_NEAR(err, 1.0 / std::cos(0.4 * kPi) / (1.0 / std::cos(0.3 * kPi)) - l.expansion / l0, 1e-12);
    EXPECT_NEAR(err, 0.420, 1e-3);
}

TEST(TimeInductance, ExactDivergesWhenFluxReachesHalfPi) {
    SquidParams p{5e-6, 0.45 * kPi, 0.1 * kPi, hz_to_rad(500e6), 0.0};
    EXPECT_THROW(time_inductance(p, 0.0, InductanceModel::Exact), DivergentInductance);
    EXPECT_NO_THROW(time_inductance(p, 0.0, InductanceModel::Expansion));
}

TEST(SpectralImpedance, EntriesAndBandStructure) {
    SquidParams p{5e-6, 0.3 * kPi, 0.1 * kPi, hz_to_rad(500e6), 0.4};
    const double w = hz_to_rad(7e9);
    const int N = 3;
    const auto z = spectral_impedance(p, w, N);
    const auto m = mixing_coeffs(p);
    ASSERT_EQ(z.dim(), 7);
    for (int n = -N; n <= N; ++n) {
        const double wn = w + n * p.pump_freq;
        for (int q = -N; q <= N; ++q) {
            Complex c = 0.0;
            switch (n - q) {
                case 0: c = m.gamma; break;
                case 1: c = m.kappa_plus; break;
                case -1: c = m.kappa_minus; break;
                case 2: c = m.eta_plus; break;
                case -2: c = m.eta_minus; break;
                default: break;
            }
            const Complex expected = Complex(0.0, 1.0) * m.l0 * wn * c;
            EXPECT_NEAR(std::abs(z.at(n, q) - expected), 0.0, 1e-12 * std::abs(m.l0 * w)) << n << "," << q;
        }
    }
}

TEST(SpectralImpedance, UnpumpedIsDiagonalInductor) {
    SquidParams p{3e-6, 0.2 * kPi, 0.0, hz_to_rad(700e6), 0.0};
    const auto z = spectral_impedance(p, hz_to_rad(7e9), 2);
    const double l0 = squid_inductance(p.ic0, p.beta);
    for (int n = -2; n <= 2; ++n)
        for (int q = -2; q <= 2; ++q) {
            const Complex expected = n == q ? Complex(0.0, l0 * (hz_to_rad(7e9) + n * p.pump_freq)) : 0.0;
            EXPECT_NEAR(std::abs(z.at(n, q) - expected), 0.0, 1e-15);
        }
}

TEST(SpectralImpedance, SignedFrequenciesBelowZero) {
    // Pump above the signal: the n = -1 row sits at a negative frequency and
    // keeps its sign.
    SquidParams p{5e-6, 0.3 * kPi, 0.099 * kPi, hz_to_rad(14.69e9), 0.0};
    const auto z = spectral_impedance(p, hz_to_rad(7.25e9), 1);
    EXPECT_LT(z.at(-1, -1).imag(), 0.0);
    EXPECT_GT(z.at(0, 0).imag(), 0.0);
}
