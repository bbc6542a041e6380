#include "jpi/td_oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "jpi/errors.hpp"
#include "jpi/units.hpp"

namespace jpi::td_oracle {

namespace sn = spectral_network;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double TransientRun::max_frequency_hz() const {
    const double fd = rad_to_hz(drive.omega);
    return netlist.pumped() ? fd + 2.0 * rad_to_hz(netlist.pump_freq()) : fd;
}

void TransientRun::auto_timing(double pump_periods) {
    step = 1.0 / (64.0 * max_frequency_hz());
    const double f_ref = netlist.pumped() ? rad_to_hz(netlist.pump_freq()) : rad_to_hz(drive.omega);
    duration = pump_periods / f_ref;
}

void TransientRun::validate() const {
    netlist.validate();
    if (drive.port != 1 && drive.port != 2) throw InvalidParameter("drive port must be 1 or 2");
    if (!(drive.omega > 0.0) || !std::isfinite(drive.omega))
        throw InvalidParameter("drive frequency must be positive");
    if (!(drive.amplitude > 0.0) || !std::isfinite(drive.amplitude))
        throw InvalidParameter("drive amplitude must be positive");
    if (!(step > 0.0) || !(duration > 0.0)) throw InvalidParameter("step and duration must be positive");
    if (step > 1.0 / (50.0 * max_frequency_hz()) * (1.0 + 1e-9))
        throw InvalidParameter("step must not exceed 1/(50 f_max); refine the step");
    if (netlist.pumped() && duration * rad_to_hz(netlist.pump_freq()) < 200.0 * (1.0 - 1e-9))
        throw InvalidParameter("duration must cover at least 200 pump periods");
    if (!(discard_fraction >= 0.0 && discard_fraction < 0.9))
        throw InvalidParameter("discard fraction must lie in [0, 0.9)");
}

namespace {

struct Branch {
    int a;           // node the current leaves
    int b;           // node it enters; -1 is ground
    double l_fixed;  // series geometric inductance
    int squid;       // -1 when plain inductor
};

/// Lumped circuit in descriptor form: Cm dv/dt = -G v - B i + s(t).
struct Circuit {
    int nodes = 0;
    MatrixXd cm;
    MatrixXd g;
    std::vector<Branch> branches;
    int port1 = 0;
    int port2 = 0;
};

Circuit build_circuit(const sn::IsolatorNetlist& net) {
    struct Stamp {
        std::vector<std::tuple<int, int, double>> cap, cond;
    } st;
    Circuit c;
    int cur = 0;
    int count = 1;
    for (std::size_t k = 0; k < net.elements.size(); ++k) {
        const auto& e = net.elements[k];
        if (auto* p = std::get_if<sn::ShuntCapacitor>(&e)) {
            st.cap.emplace_back(cur, -1, p->c);
        } else if (auto* p = std::get_if<sn::ShuntInductor>(&e)) {
            c.branches.push_back({cur, -1, p->l, -1});
        } else if (auto* p = std::get_if<sn::ShuntResistor>(&e)) {
            st.cond.emplace_back(cur, -1, 1.0 / p->r);
        } else if (auto* p = std::get_if<sn::ShuntPole>(&e)) {
            if (p->c_g > 0.0) st.cap.emplace_back(cur, -1, p->c_g);
            c.branches.push_back({cur, -1, p->l_g, p->squid});
        } else if (auto* p = std::get_if<sn::SeriesCapacitor>(&e)) {
            st.cap.emplace_back(cur, count, p->c);
            cur = count++;
        } else if (auto* p = std::get_if<sn::SeriesInductor>(&e)) {
            c.branches.push_back({cur, count, p->l, -1});
            cur = count++;
        } else if (auto* p = std::get_if<sn::SeriesResistor>(&e)) {
            if (p->r <= 0.0) throw InvalidParameter("series resistor must be positive in the time domain");
            st.cond.emplace_back(cur, count, 1.0 / p->r);
            cur = count++;
        } else {
            throw InvalidParameter("element " + std::to_string(k) + " (" + sn::element_name(e) +
                                   ") has no lumped time-domain model");
        }
    }
    c.nodes = count;
    c.port2 = cur;
    c.cm = MatrixXd::Zero(count, count);
    c.g = MatrixXd::Zero(count, count);
    auto stamp = [](MatrixXd& m, int a, int b, double v) {
        m(a, a) += v;
        if (b >= 0) {
            m(b, b) += v;
            m(a, b) -= v;
            m(b, a) -= v;
        }
    };
    for (auto [a, b, v] : st.cap) stamp(c.cm, a, b, v);
    for (auto [a, b, v] : st.cond) stamp(c.g, a, b, v);
    c.g(c.port1, c.port1) += 1.0 / net.z0;
    c.g(c.port2, c.port2) += 1.0 / net.z0;
    return c;
}

/// Integrates the circuit with fixed-step RK4. Node voltages are split into
/// dynamic coordinates (nonzero capacitance eigenvalues) and algebraic ones
/// solved from KCL at every stage.
class Integrator {
public:
    Integrator(const TransientRun& run, const Circuit& c) : run_(run), c_(c) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(c.cm);
        const double cmax = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-30);
        std::vector<int> dyn, alg;
        for (int k = 0; k < c.nodes; ++k)
            (es.eigenvalues()(k) > 1e-9 * cmax ? dyn : alg).push_back(k);
        const int nd = static_cast<int>(dyn.size());
        const int na = static_cast<int>(alg.size());
        ud_ = MatrixXd(c.nodes, nd);
        u0_ = MatrixXd(c.nodes, na);
        inv_lambda_ = VectorXd(nd);
        for (int k = 0; k < nd; ++k) {
            ud_.col(k) = es.eigenvectors().col(dyn[k]);
            inv_lambda_(k) = 1.0 / es.eigenvalues()(dyn[k]);
        }
        for (int k = 0; k < na; ++k) u0_.col(k) = es.eigenvectors().col(alg[k]);
        if (na > 0) {
            const MatrixXd g00 = u0_.transpose() * c.g * u0_;
            Eigen::FullPivLU<MatrixXd> lu(g00);
            if (!lu.isInvertible())
                throw InvalidParameter("circuit has a node with neither capacitance nor resistive path");
            const MatrixXd g00_inv = lu.inverse();
            // x0 = K (rhs0) - K U0^T G Ud xd, with rhs0 = U0^T (s - B i).
            k_ = g00_inv * u0_.transpose();
            kg_ = g00_inv * u0_.transpose() * c.g * ud_;
        }
        nd_ = nd;
        nb_ = static_cast<int>(c.branches.size());
        state_ = VectorXd::Zero(nd_ + nb_);
        inj_ = VectorXd::Zero(c.nodes);
        v_ = VectorXd::Zero(c.nodes);
        i_ = VectorXd::Zero(nb_);
        l_ = VectorXd::Zero(nb_);
        driven_ = run.drive.port == 1 ? c.port1 : c.port2;
        ramp_ = 0.05 * run.duration;
    }

    double source(double t) const {
        const double env = t < ramp_ ? 0.5 * (1.0 - std::cos(kPi * t / ramp_)) : 1.0;
        return env * run_.drive.amplitude * std::cos(run_.drive.omega * t);
    }

    void inductances(double t) {
        for (int k = 0; k < nb_; ++k) {
            const auto& br = c_.branches[k];
            double l = br.l_fixed;
            if (br.squid >= 0)
                l += squid::time_inductance(run_.netlist.squids[br.squid], t, run_.inductance);
            l_(k) = l;
        }
    }

    /// Node voltages and branch currents for state y at time t.
    void resolve(const VectorXd& y, double t) {
        inductances(t);
        for (int k = 0; k < nb_; ++k)
            i_(k) = run_.relation == VoltageRelation::Flux ? y(nd_ + k) / l_(k) : y(nd_ + k);
        inj_.setZero();
        inj_(driven_) += source(t) / run_.netlist.z0;
        for (int k = 0; k < nb_; ++k) {
            const auto& br = c_.branches[k];
            inj_(br.a) -= i_(k);
            if (br.b >= 0) inj_(br.b) += i_(k);
        }
        const auto xd = y.head(nd_);
        v_ = ud_ * xd;
        if (u0_.cols() > 0) v_ += u0_ * (k_ * inj_ - kg_ * xd);
    }

    void rhs(const VectorXd& y, double t, VectorXd& dy) {
        resolve(y, t);
        dy.resize(y.size());
        dy.head(nd_) = inv_lambda_.cwiseProduct(ud_.transpose() * (inj_ - c_.g * v_));
        for (int k = 0; k < nb_; ++k) {
            const auto& br = c_.branches[k];
            const double vb = v_(br.a) - (br.b >= 0 ? v_(br.b) : 0.0);
            dy(nd_ + k) = run_.relation == VoltageRelation::Flux ? vb : vb / l_(k);
        }
    }

    Traces run() {
        Traces tr;
        tr.dt = run_.step;
        tr.driven_port = run_.drive.port;
        tr.drive_omega = run_.drive.omega;
        tr.drive_amplitude = run_.drive.amplitude;
        tr.z0 = run_.netlist.z0;
        const auto steps = static_cast<std::size_t>(std::ceil(run_.duration / run_.step));
        tr.v_port1.resize(steps);
        tr.v_port2.resize(steps);
        tr.source.resize(steps);
        tr.discard = static_cast<std::size_t>(run_.discard_fraction * steps);
        VectorXd k1, k2, k3, k4, tmp;
        const double h = run_.step;
        const double limit = 1e6 * run_.drive.amplitude;
        for (std::size_t n = 0; n < steps; ++n) {
            const double t = n * h;
            resolve(state_, t);
            tr.v_port1[n] = v_(c_.port1);
            tr.v_port2[n] = v_(c_.port2);
            tr.source[n] = source(t);
            if (!std::isfinite(v_(c_.port1)) || std::abs(v_(c_.port1)) > limit ||
                std::abs(v_(c_.port2)) > limit)
                throw NumericalError("time-domain integration diverged at t = " + std::to_string(t) +
                                     " s; refine the step or check for parametric instability");
            rhs(state_, t, k1);
            tmp = state_ + 0.5 * h * k1;
            rhs(tmp, t + 0.5 * h, k2);
            tmp = state_ + 0.5 * h * k2;
            rhs(tmp, t + 0.5 * h, k3);
            tmp = state_ + h * k3;
            rhs(tmp, t + h, k4);
            state_ += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return tr;
    }

private:
    const TransientRun& run_;
    const Circuit& c_;
    MatrixXd ud_, u0_, k_, kg_;
    VectorXd inv_lambda_;
    int nd_ = 0, nb_ = 0;
    VectorXd state_, inj_, v_, i_, l_;
    int driven_ = 0;
    double ramp_ = 0.0;
};

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

std::vector<double> Traces::outgoing_wave(int port) const {
    if (port != 1 && port != 2) throw InvalidParameter("port must be 1 or 2");
    std::vector<double> out = port == 1 ? v_port1 : v_port2;
    if (port == driven_port)
        for (std::size_t k = 0; k < out.size(); ++k) out[k] -= 0.5 * source[k];
    return out;
}

Traces simulate(const TransientRun& run) {
    run.validate();
    const Circuit c = build_circuit(run.netlist);
    Integrator integ(run, c);
    return integ.run();
}

std::vector<double> window_coefficients(Window w, std::size_t n) {
    std::vector<double> c(n, 1.0);
    if (w == Window::Hann && n > 1)
        for (std::size_t k = 0; k < n; ++k) c[k] = 0.5 - 0.5 * std::cos(kTwoPi * k / (n - 1));
    return c;
}

Complex tone_amplitude(std::span<const double> trace, double dt, double omega, Window w, double t0) {
    if (trace.empty()) throw NumericalError("empty trace");
    const auto win = window_coefficients(w, trace.size());
    Complex acc = 0.0;
    double wsum = 0.0;
    // Phasor recurrence keeps the sum cheap; renormalized periodically.
    const Complex rot = std::polar(1.0, -omega * dt);
    Complex ph = std::polar(1.0, -omega * t0);
    for (std::size_t k = 0; k < trace.size(); ++k) {
        acc += win[k] * trace[k] * ph;
        wsum += win[k];
        ph *= rot;
        if ((k & 1023) == 1023) ph = std::polar(1.0, -omega * (t0 + (k + 1) * dt));
    }
    return 2.0 * acc / wsum;
}

PowerSpectrum power_spectrum(std::span<const double> trace, double dt, double ref_amplitude,
                             Window w, std::size_t min_samples) {
    const std::size_t n = trace.size();
    if (n < min_samples)
        throw NumericalError("trace has " + std::to_string(n) + " samples; at least " +
                             std::to_string(min_samples) + " needed for the requested resolution");
    if (!(ref_amplitude > 0.0)) throw InvalidParameter("reference amplitude must be positive");
    const auto win = window_coefficients(w, n);
    std::vector<double> in(n);
    double wsum = 0.0, e_time = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        in[k] = trace[k] * win[k];
        wsum += win[k];
        e_time += in[k] * in[k];
    }
    const std::size_t nbins = n / 2 + 1;
    std::vector<fftw_complex> out(nbins);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    PowerSpectrum ps;
    ps.resolution_bw = 1.0 / (n * dt);
    ps.freqs.resize(nbins);
    ps.power.resize(nbins);
    ps.power_db.resize(nbins);
    double e_freq = 0.0;
    for (std::size_t k = 0; k < nbins; ++k) {
        const double mag2 = out[k][0] * out[k][0] + out[k][1] * out[k][1];
        const bool edge = k == 0 || (n % 2 == 0 && k == nbins - 1);
        e_freq += (edge ? 1.0 : 2.0) * mag2;
        ps.freqs[k] = k * ps.resolution_bw;
        const double amp = (edge ? 1.0 : 2.0) * std::sqrt(mag2) / wsum;
        ps.power[k] = amp * amp / (ref_amplitude * ref_amplitude);
        ps.power_db[k] = 10.0 * std::log10(std::max(ps.power[k], 1e-300));
    }
    e_freq /= static_cast<double>(n);
    ps.parseval_error = e_time > 0.0 ? std::abs(e_freq - e_time) / e_time : 0.0;
    return ps;
}

double band_power(const PowerSpectrum& ps, double center_hz, double half_width_hz) {
    double inside = 0.0, total = 0.0;
    for (std::size_t k = 0; k < ps.freqs.size(); ++k) {
        total += ps.power[k];
        if (std::abs(ps.freqs[k] - center_hz) <= half_width_hz) inside += ps.power[k];
    }
    return total > 0.0 ? inside / total : 0.0;
}

namespace {

struct ToneFit {
    Complex full;
    double half_mismatch;
};

ToneFit fit_tone(const std::vector<double>& wave, const Traces& tr, double omega, double floor) {
    const std::size_t start = tr.discard;
    const std::size_t len = wave.size() - start;
    const std::size_t half = len / 2;
    std::span<const double> all(wave.data() + start, len);
    std::span<const double> first(wave.data() + start, half);
    std::span<const double> second(wave.data() + start + half, len - half);
    const double t0 = start * tr.dt;
    ToneFit f;
    f.full = tone_amplitude(all, tr.dt, omega, Window::Hann, t0);
    const Complex a = tone_amplitude(first, tr.dt, omega, Window::Hann, t0);
    const Complex b = tone_amplitude(second, tr.dt, omega, Window::Hann, t0 + half * tr.dt);
    f.half_mismatch = std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
    return f;
}

}  // namespace

SidebandEstimate extract_sideband_sparams(const Traces& fwd, const Traces& rev, double omega_m,
                                          int n_sidebands, double steady_tol) {
    if (fwd.driven_port != 1 || rev.driven_port != 2)
        throw InvalidParameter("expected a port-1 forward run and a port-2 reverse run");
    if (fwd.drive_omega != rev.drive_omega)
        throw InvalidParameter("forward and reverse runs must share the drive frequency");
    if (fwd.v_port1.size() - fwd.discard < 1024 || rev.v_port1.size() - rev.discard < 1024)
        throw NumericalError("retained record too short for tone extraction");
    SidebandEstimate est;
    est.n_sidebands = n_sidebands;
    est.omega = fwd.drive_omega;
    est.omega_m = omega_m;
    const auto f1 = fwd.outgoing_wave(1), f2 = fwd.outgoing_wave(2);
    const auto r1 = rev.outgoing_wave(1), r2 = rev.outgoing_wave(2);
    const double a_fwd = 0.5 * fwd.drive_amplitude;
    const double a_rev = 0.5 * rev.drive_amplitude;
    double worst = 0.0;
    for (int n = -n_sidebands; n <= n_sidebands; ++n) {
        const double w = est.omega + n * omega_m;
        const auto s21 = fit_tone(f2, fwd, w, 1e-3 * a_fwd);
        const auto s11 = fit_tone(f1, fwd, w, 1e-3 * a_fwd);
        const auto s12 = fit_tone(r1, rev, w, 1e-3 * a_rev);
        const auto s22 = fit_tone(r2, rev, w, 1e-3 * a_rev);
        est.s21.push_back(s21.full / a_fwd);
        est.s11.push_back(s11.full / a_fwd);
        est.s12.push_back(s12.full / a_rev);
        est.s22.push_back(s22.full / a_rev);
        if (n == 0) worst = std::max({s21.half_mismatch, s11.half_mismatch, s12.half_mismatch,
                                      s22.half_mismatch});
    }
    if (worst > steady_tol)
        throw NumericalError("trace not steady: center tone differs by " + std::to_string(worst) +
                             " between halves of the retained window");
    return est;
}

PowerBalance power_balance(const Traces& tr) {
    const auto refl = tr.outgoing_wave(tr.driven_port);
    const auto& other = tr.driven_port == 1 ? tr.v_port2 : tr.v_port1;
    const std::size_t start = tr.discard;
    const auto win = window_coefficients(Window::Hann, refl.size() - start);
    double wsum = 0.0, pr = 0.0, pt = 0.0, pin = 0.0;
    for (std::size_t k = start; k < refl.size(); ++k) {
        const double w = win[k - start];
        wsum += w;
        pr += w * refl[k] * refl[k];
        pt += w * other[k] * other[k];
        pin += w * 0.25 * tr.source[k] * tr.source[k];
    }
    return {pin / wsum / tr.z0, pr / wsum / tr.z0, pt / wsum / tr.z0};
}

}  // namespace jpi::td_oracle
