#include "jpi/coupled_mode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jpi/errors.hpp"
#include "jpi/filter_synthesis.hpp"
#include "jpi/units.hpp"

namespace jpi::coupled_mode {

int sideband_order(Mode m) {
    switch (m) {
        case Mode::A1:
        case Mode::A2: return 0;
        case Mode::B1:
        case Mode::B2: return 1;
        case Mode::C1:
        case Mode::C2: return -1;
    }
    return 0;
}

ModeGraph::ModeGraph(double resonance, std::array<double, kModeCount> port_rates, double beta_c,
                     double beta_p, double phi, double pump_freq)
    : resonance_(resonance), rates_(port_rates), beta_c_(beta_c), beta_p_(beta_p), phi_(phi),
      pump_freq_(pump_freq) {
    require_finite(resonance, "resonance");
    require_finite(beta_c, "beta_c");
    require_finite(beta_p, "beta_p");
    require_finite(phi, "phi");
    require_finite(pump_freq, "pump_freq");
    if (resonance <= 0.0) throw InvalidParameter("resonance must be positive");
    if (beta_c < 0.0) throw InvalidParameter("beta_c must be non-negative");
    if (beta_p < 0.0) throw InvalidParameter("beta_p must be non-negative");
    if (pump_freq < 0.0) throw InvalidParameter("pump_freq must be non-negative");
    double log_sum = 0.0;
    for (double r : rates_) {
        require_finite(r, "port rate");
        if (r <= 0.0) throw InvalidParameter("port rates must be positive");
        log_sum += std::log(r);
    }
    gamma0_ = std::exp(log_sum / kModeCount);
    phi_ = std::fmod(phi_, kTwoPi);
    if (phi_ < 0.0) phi_ += kTwoPi;
}

ModeGraph ModeGraph::symmetric(double resonance, double gamma0, double beta_c, double beta_p,
                               double phi, double pump_freq) {
    std::array<double, kModeCount> rates;
    rates.fill(gamma0);
    return ModeGraph(resonance, rates, beta_c, beta_p, phi, pump_freq);
}

ModeGraph ModeGraph::from_filter(const FilterSpec& filter, double beta_p, double phi,
                                 double pump_freq) {
    if (filter.order != 2) throw InvalidParameter("coupled-mode conversion needs a two-pole filter");
    const auto syn = filter_synthesis::synthesize(filter);
    const double w0 = hz_to_rad(filter.center_freq);
    const auto& z = syn.pole_impedances;
    const auto& j = syn.inverters;
    const double g_in = w0 * j[0] * j[0] * filter.z0 * z[0];
    const double g_out = w0 * j[2] * j[2] * filter.z0 * z[1];
    const std::array<double, kModeCount> rates{g_in, g_out, g_in, g_out, g_in, g_out};
    const double gamma0 = std::sqrt(g_in * g_out);
    const double beta_c = w0 * j[1] * std::sqrt(z[0] * z[1]) / (2.0 * gamma0);
    return ModeGraph(w0, rates, beta_c, beta_p, phi, pump_freq);
}

double ModeGraph::mode_freq(Mode m) const { return resonance_ + sideband_order(m) * pump_freq_; }

ModeGraph ModeGraph::with_pump(double beta_p, double phi, double pump_freq) const {
    return ModeGraph(resonance_, rates_, beta_c_, beta_p, phi, pump_freq);
}

Eigen::Matrix<Complex, 6, 6> build_coupling_matrix(const ModeGraph& g, double signal_freq) {
    require_finite(signal_freq, "signal_freq");
    if (signal_freq <= 0.0) throw InvalidParameter("signal frequency must be positive");
    Eigen::Matrix<Complex, 6, 6> m = Eigen::Matrix<Complex, 6, 6>::Zero();
    const double g0 = g.gamma0();
    for (int k = 0; k < kModeCount; ++k) {
        const Mode mode = static_cast<Mode>(k);
        const double detune = signal_freq + sideband_order(mode) * g.pump_freq() - g.resonance();
        m(k, k) = Complex(detune, g.port_rates()[k] / 2.0) / g0;
    }
    const double bc = g.beta_c();
    const double bp = g.beta_p();
    const Complex ep = std::polar(bp, g.phi());
    const Complex em = std::conj(ep);
    auto link = [&](Mode r, Mode c, Complex v) { m(int(r), int(c)) = v; };
    link(Mode::A1, Mode::A2, bc);
    link(Mode::A2, Mode::A1, bc);
    link(Mode::B1, Mode::B2, bc);
    link(Mode::B2, Mode::B1, bc);
    link(Mode::C1, Mode::C2, bc);
    link(Mode::C2, Mode::C1, bc);
    link(Mode::A1, Mode::B1, bp);
    link(Mode::B1, Mode::A1, bp);
    link(Mode::A1, Mode::C1, bp);
    link(Mode::C1, Mode::A1, bp);
    link(Mode::A2, Mode::B2, ep);
    link(Mode::B2, Mode::A2, em);
    link(Mode::A2, Mode::C2, em);
    link(Mode::C2, Mode::A2, ep);
    return m;
}

DirectionalityTerms directionality_closed_form(double beta_c, double beta_p, double a, double phi) {
    require_finite(beta_c, "beta_c");
    require_finite(beta_p, "beta_p");
    require_finite(a, "a");
    require_finite(phi, "phi");
    if (beta_c <= 0.0) throw InvalidParameter("beta_c must be positive");
    const double b = beta_c;
    const double b2 = b * b, b3 = b2 * b, b5 = b3 * b2;
    const double a2 = a * a, a4 = a2 * a2;
    const double p2 = beta_p * beta_p;
    DirectionalityTerms t{};
    t.M_a = -b / 16.0 - b3 / 2.0 - b5 - b * a2 / 2.0 + 2.0 * b3 * a2 - b * a4;
    t.zeta = 0.5 * b * p2 + 2.0 * b3 * p2 - 2.0 * b * p2 * a2;
    t.eta = 2.0 * b * p2 * a;
    const double base = t.M_a + t.zeta * std::cos(phi);
    const double s = t.eta * std::sin(phi);
    t.numerator = std::abs(base - s);
    t.denominator = std::abs(base + s);
    const double scale = std::abs(t.M_a) + std::abs(t.zeta) + std::abs(t.eta);
    if (t.denominator <= 1e-15 * scale) {
        t.D = std::numeric_limits<double>::infinity();
        t.complete_suppression = true;
    } else {
        t.D = t.numerator / t.denominator;
        t.complete_suppression = false;
    }
    return t;
}

double directionality_db(double D) {
    if (std::isnan(D)) throw NumericalError("directionality is NaN");
    if (D <= 0.0) return -kDirectionalityCapDb;
    const double db = 20.0 * std::log10(D);
    return std::clamp(db, -kDirectionalityCapDb, kDirectionalityCapDb);
}

ModeSParams mode_sparams(const ModeGraph& graph, double signal_freq) {
    const auto m = build_coupling_matrix(graph, signal_freq);
    Eigen::MatrixXcd dyn = m;
    const Eigen::MatrixXcd minv = checked_inverse(dyn, "coupling matrix", signal_freq);
    Eigen::Matrix<Complex, 6, 1> k;
    for (int i = 0; i < kModeCount; ++i) k(i) = std::sqrt(graph.port_rates()[i]);
    ModeSParams out;
    const Complex i1(0.0, 1.0);
    for (int r = 0; r < kModeCount; ++r)
        for (int c = 0; c < kModeCount; ++c)
            out.S(r, c) = (r == c ? 1.0 : 0.0) - i1 * k(r) * minv(r, c) * k(c) / graph.gamma0();
    return out;
}

double forward_transmission_approx(double beta_p, double b) {
    require_finite(beta_p, "beta_p");
    require_finite(b, "b");
    if (b <= 1.0) throw InvalidParameter("numerical factor b must exceed 1");
    if (beta_p < 0.0) throw InvalidParameter("beta_p must be non-negative");
    const double p2 = beta_p * beta_p;
    return (1.0 + p2) / (1.0 + b * p2);
}

PumpWindow pump_window(const IsolationBand& band) {
    require_finite(band.center, "band.center");
    require_finite(band.iso_bw, "band.iso_bw");
    require_finite(band.filter_bw, "band.filter_bw");
    if (band.center <= 0.0 || band.iso_bw <= 0.0 || band.filter_bw <= 0.0)
        throw InvalidParameter("band frequencies must be positive");
    if (band.iso_bw > band.filter_bw)
        throw Infeasible("isolation bandwidth exceeds the filter bandwidth; no pump window");
    return {band.iso_bw, band.filter_bw};
}

SidebandFreqs sideband_freqs(double omega_a, double iso_bw, double omega_p) {
    require_finite(omega_a, "omega_a");
    require_finite(iso_bw, "iso_bw");
    require_finite(omega_p, "omega_p");
    const double hi = omega_a + iso_bw / 2.0;
    const double lo = omega_a - iso_bw / 2.0;
    return {hi + omega_p, hi - omega_p, lo + omega_p, lo - omega_p};
}

std::optional<double> suppression_beta_p(double beta_c, double a) {
    // At phi = pi/2 the denominator is M_a + eta, with eta = 2 beta_c beta_p^2 a.
    const auto t = directionality_closed_form(beta_c, 0.0, a, kPi / 2);
    if (a <= 0.0) return std::nullopt;
    const double p2 = -t.M_a / (2.0 * beta_c * a);
    if (p2 <= 0.0) return std::nullopt;
    return std::sqrt(p2);
}

}  // namespace jpi::coupled_mode
