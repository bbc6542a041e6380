#pragma once

#include <array>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "jpi/spectral_matrix.hpp"

namespace jpi {
struct FilterSpec;
}

namespace jpi::coupled_mode {

/// Mode ordering used throughout: A1, A2, B1, B2, C1, C2.
enum class Mode : int { A1 = 0, A2 = 1, B1 = 2, B2 = 3, C1 = 4, C2 = 5 };
inline constexpr int kModeCount = 6;

/// Sideband order of each mode: A = 0, B = +1 (upper), C = -1 (lower).
int sideband_order(Mode m);

/// Six-mode graph of a pumped two-pole filter.
///
/// Both filter poles resonate at `resonance`; the B and C modes are the same
/// poles seen at the upper and lower sidebands of the signal, so a signal at
/// omega excites mode X at omega + s_X * pump_freq and the detuning entering
/// the coupling matrix is measured from the pole resonance.
class ModeGraph {
public:
    ModeGraph(double resonance, std::array<double, kModeCount> port_rates, double beta_c,
              double beta_p, double phi, double pump_freq);

    /// gamma_i = gamma_o = gamma0 on every mode.
    static ModeGraph symmetric(double resonance, double gamma0, double beta_c, double beta_p,
                               double phi, double pump_freq);

    /// Two-pole filter converted to its coupled-mode equivalent: port rate
    /// gamma = w0 * J_end^2 * Z0 * Z_r and passive coupling
    /// beta_c = w0 * J12 * sqrt(Zr1 * Zr2) / (2 * gamma0).
    static ModeGraph from_filter(const FilterSpec& filter, double beta_p, double phi,
                                 double pump_freq);

    double resonance() const { return resonance_; }
    /// Nominal frequency of mode X: resonance + s_X * pump_freq.
    double mode_freq(Mode m) const;
    const std::array<double, kModeCount>& port_rates() const { return rates_; }
    double gamma0() const { return gamma0_; }
    double beta_c() const { return beta_c_; }
    double beta_p() const { return beta_p_; }
    double phi() const { return phi_; }
    double pump_freq() const { return pump_freq_; }

    ModeGraph with_pump(double beta_p, double phi, double pump_freq) const;

private:
    double resonance_;
    std::array<double, kModeCount> rates_;
    double gamma0_;
    double beta_c_;
    double beta_p_;
    double phi_;
    double pump_freq_;
};

Eigen::Matrix<Complex, 6, 6> build_coupling_matrix(const ModeGraph& graph, double signal_freq);

struct DirectionalityTerms {
    double M_a;
    double zeta;
    double eta;
    double numerator;    // |M_a + zeta cos(phi) - eta sin(phi)|
    double denominator;  // |M_a + zeta cos(phi) + eta sin(phi)|
    double D;            // linear; +inf when the denominator vanishes
    bool complete_suppression;
};

/// Closed-form directionality of the symmetric graph at the pole resonance.
/// `a` is pump_freq / gamma0.
DirectionalityTerms directionality_closed_form(double beta_c, double beta_p, double a, double phi);

/// Directionality in dB, capped at +/- 200 dB.
double directionality_db(double D);
inline constexpr double kDirectionalityCapDb = 200.0;

/// Scattering amplitudes between all six port channels.
struct ModeSParams {
    Eigen::Matrix<Complex, 6, 6> S;
    Complex forward() const { return S(1, 0); }   // S_{A2 A1}
    Complex reverse() const { return S(0, 1); }   // S_{A1 A2}
    Complex reflection() const { return S(0, 0); }
};

ModeSParams mode_sparams(const ModeGraph& graph, double signal_freq);

/// (1 + beta_p^2) / (1 + b beta_p^2); requires b > 1.
double forward_transmission_approx(double beta_p, double b);

struct IsolationBand {
    double center;    // rad/s
    double iso_bw;    // rad/s
    double filter_bw; // rad/s
};

struct PumpWindow {
    double min_pump;
    double max_pump;
};

PumpWindow pump_window(const IsolationBand& band);

struct SidebandFreqs {
    double b_plus, c_plus, b_minus, c_minus;
};

/// Sidebands generated at the two isolation-band edges for pump omega_p.
SidebandFreqs sideband_freqs(double omega_a, double iso_bw, double omega_p);

/// Pump amplitude at which the phi = pi/2 denominator vanishes, if any.
std::optional<double> suppression_beta_p(double beta_c, double a);

}  // namespace jpi::coupled_mode
