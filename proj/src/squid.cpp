#include "jpi/squid.hpp"

#include <cmath>

#include "jpi/errors.hpp"
#include "jpi/units.hpp"

namespace jpi::squid {

std::vector<std::string> validate(const SquidParams& p) {
    require_finite(p.ic0, "ic0");
    require_finite(p.beta, "beta");
    require_finite(p.alpha, "alpha");
    require_finite(p.pump_freq, "pump_freq");
    require_finite(p.pump_phase, "pump_phase");
    if (p.ic0 <= 0.0) throw InvalidParameter("ic0 must be positive");
    if (std::abs(p.beta) >= kPi / 2)
        throw DivergentInductance("DC flux phase must satisfy |beta| < pi/2");
    if (p.alpha < 0.0) throw InvalidParameter("alpha must be non-negative");
    if (p.pump_freq < 0.0) throw InvalidParameter("pump_freq must be non-negative");
    std::vector<std::string> warnings;
    if (p.alpha > kAlphaWarnThreshold)
        warnings.push_back("alpha exceeds " + std::to_string(kAlphaWarnThreshold) +
                           " rad; the second-order expansion is unreliable");
    return warnings;
}

double squid_inductance(double ic0, double applied_flux_phase) {
    require_finite(ic0, "ic0");
    require_finite(applied_flux_phase, "applied_flux_phase");
    if (ic0 <= 0.0) throw InvalidParameter("ic0 must be positive");
    const double c = std::cos(applied_flux_phase);
    if (c <= 1e-12) throw DivergentInductance("flux phase at or beyond +/- pi/2");
    return kFluxQuantum / (kTwoPi * 2.0 * ic0 * c);
}

double ic0_for_inductance(double l0, double beta) {
    if (!(l0 > 0.0)) throw InvalidParameter("inductance must be positive");
    const double c = std::cos(beta);
    if (c <= 1e-12) throw DivergentInductance("flux phase at or beyond +/- pi/2");
    return kFluxQuantum / (4.0 * kPi * l0 * c);
}

MixingCoeffs mixing_coeffs(const SquidParams& p) {
    validate(p);
    MixingCoeffs m{};
    m.l0 = squid_inductance(p.ic0, p.beta);
    m.gamma = 1.0 + p.alpha * p.alpha / 4.0;
    m.eta_plus = p.alpha * p.alpha / 4.0 * std::polar(1.0, 2.0 * p.pump_phase);
    m.eta_minus = std::conj(m.eta_plus);
    m.kappa_plus = std::tan(p.beta) * p.alpha / 2.0 * std::polar(1.0, p.pump_phase);
    m.kappa_minus = std::conj(m.kappa_plus);
    return m;
}

TimeInductance time_inductance(const SquidParams& p, double t) {
    return {time_inductance(p, t, InductanceModel::Exact),
            time_inductance(p, t, InductanceModel::Expansion)};
}

double time_inductance(const SquidParams& p, double t, InductanceModel model) {
    const double theta = p.pump_freq * t + p.pump_phase;
    const double c = std::cos(theta);
    if (model == InductanceModel::Exact) return squid_inductance(p.ic0, p.beta + p.alpha * c);
    const double l0 = squid_inductance(p.ic0, p.beta);
    return l0 * (1.0 + std::tan(p.beta) * p.alpha * c + p.alpha * p.alpha * c * c / 2.0);
}

SpectralMatrix spectral_impedance(const SquidParams& p, double omega, int n_sidebands) {
    require_finite(omega, "omega");
    if (n_sidebands < 0) throw InvalidParameter("n_sidebands must be non-negative");
    const MixingCoeffs m = mixing_coeffs(p);
    const Complex coeff[5] = {m.eta_minus, m.kappa_minus, m.gamma, m.kappa_plus, m.eta_plus};
    SpectralMatrix z(n_sidebands);
    for (int n = -n_sidebands; n <= n_sidebands; ++n) {
        const double wn = omega + n * p.pump_freq;
        for (int q = std::max(-n_sidebands, n - 2); q <= std::min(n_sidebands, n + 2); ++q)
            z.at(n, q) = Complex(0.0, m.l0 * wn) * coeff[n - q + 2];
    }
    return z;
}

}  // namespace jpi::squid
