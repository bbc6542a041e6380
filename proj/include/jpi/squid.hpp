#pragma once

#include <string>
#include <vector>

#include "jpi/spectral_matrix.hpp"

namespace jpi::squid {

/// Physical state of a flux-pumped DC-SQUID. Flux phase is
/// pi * Phi_A / Phi_0 = beta + alpha * cos(pump_freq * t + pump_phase).
struct SquidParams {
    double ic0 = 5e-6;        // single-junction critical current [A]
    double beta = 0.0;        // DC flux phase [rad]
    double alpha = 0.0;       // RF flux amplitude [rad]
    double pump_freq = 0.0;   // omega_m [rad/s]
    double pump_phase = 0.0;  // [rad]
};

/// Validation result; throws on hard violations, returns soft warnings.
std::vector<std::string> validate(const SquidParams& p);

/// Above this amplitude the second-order expansion is flagged.
inline constexpr double kAlphaWarnThreshold = 0.5;

/// Phi0 / (2 pi * 2 Ic0 * cos(phase)).
double squid_inductance(double ic0, double applied_flux_phase);

/// Junction critical current that gives static inductance `l0` at DC bias `beta`.
double ic0_for_inductance(double l0, double beta);

struct MixingCoeffs {
    double l0;            // static inductance at the DC bias [H]
    double gamma;         // 1 + alpha^2/4
    Complex eta_plus;     // alpha^2 e^{+2i phi} / 4
    Complex eta_minus;
    Complex kappa_plus;   // tan(beta) alpha e^{+i phi} / 2
    Complex kappa_minus;
};

MixingCoeffs mixing_coeffs(const SquidParams& p);

enum class InductanceModel {
    Exact,      // L(Phi_A(t)) evaluated directly
    Expansion,  // small-pump form L0 [1 + tan(b) a cos + a^2 cos^2 / 2]
};

struct TimeInductance {
    double exact;
    double expansion;
};

/// Both forms at time t. The exact form throws DivergentInductance when the
/// instantaneous flux phase reaches +/- pi/2.
TimeInductance time_inductance(const SquidParams& p, double t);

double time_inductance(const SquidParams& p, double t, InductanceModel model);

/// (2N+1)x(2N+1) spectral impedance: entry (n, p) = i L0 omega_n c_{n-p},
/// with c_0 = gamma, c_{+1} = kappa+, c_{-1} = kappa-, c_{+2} = eta+, c_{-2} = eta-.
SpectralMatrix spectral_impedance(const SquidParams& p, double omega, int n_sidebands);

}  // namespace jpi::squid
