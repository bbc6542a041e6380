#include "jpi/spectral_network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jpi/coupled_mode.hpp"
#include "jpi/errors.hpp"
#include "parallel.hpp"

namespace jpi::spectral_network {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

const Complex kI(0.0, 1.0);

SpectralMatrix diag_of(int n, const VectorXcd& d) { return SpectralMatrix(n, d.asDiagonal().toDenseMatrix()); }

SpectralMatrix zeros(int n) { return SpectralMatrix(n); }

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidParameter(std::string(what) + " must be positive");
}

void require_non_negative(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw InvalidParameter(std::string(what) + " must be non-negative");
}

double safe_db(Complex z) {
    const double a = std::abs(z);
    if (a <= 0.0) return -coupled_mode::kDirectionalityCapDb;
    return to_db(a);
}

}  // namespace

SpectralABCD SpectralABCD::identity(int n_sidebands, double omega) {
    return {SpectralMatrix::identity(n_sidebands), zeros(n_sidebands), zeros(n_sidebands),
            SpectralMatrix::identity(n_sidebands), omega};
}

SpectralABCD operator*(const SpectralABCD& l, const SpectralABCD& r) {
    if (l.sidebands() != r.sidebands())
        throw DimensionMismatch("cannot cascade ABCD blocks with different sideband counts");
    const int n = l.sidebands();
    const auto& la = l.a.matrix();
    const auto& lb = l.b.matrix();
    const auto& lc = l.c.matrix();
    const auto& ld = l.d.matrix();
    const auto& ra = r.a.matrix();
    const auto& rb = r.b.matrix();
    const auto& rc = r.c.matrix();
    const auto& rd = r.d.matrix();
    return {SpectralMatrix(n, la * ra + lb * rc), SpectralMatrix(n, la * rb + lb * rd),
            SpectralMatrix(n, lc * ra + ld * rc), SpectralMatrix(n, lc * rb + ld * rd), l.omega};
}

double SpectralSParams::max_abs() const {
    return std::max({s11.max_abs(), s21.max_abs(), s12.max_abs(), s22.max_abs()});
}

std::string element_name(const Element& e) {
    struct Visitor {
        std::string operator()(const SeriesCapacitor&) const { return "series_capacitor"; }
        std::string operator()(const SeriesInductor&) const { return "series_inductor"; }
        std::string operator()(const SeriesResistor&) const { return "series_resistor"; }
        std::string operator()(const ShuntCapacitor&) const { return "shunt_capacitor"; }
        std::string operator()(const ShuntInductor&) const { return "shunt_inductor"; }
        std::string operator()(const ShuntResistor&) const { return "shunt_resistor"; }
        std::string operator()(const TransmissionLine&) const { return "transmission_line"; }
        std::string operator()(const IdealInverter&) const { return "ideal_inverter"; }
        std::string operator()(const ShuntPole&) const { return "shunt_pole"; }
    };
    return std::visit(Visitor{}, e);
}

void IsolatorNetlist::validate() const {
    if (elements.empty()) throw InvalidParameter("netlist has no elements");
    require_positive(z0, "z0");
    if (n_sidebands < 0) throw InvalidParameter("n_sidebands must be non-negative");
    for (const auto& s : squids) squid::validate(s);
    for (std::size_t k = 0; k < elements.size(); ++k) {
        const auto& e = elements[k];
        const std::string where = "element " + std::to_string(k) + " (" + element_name(e) + ")";
        if (auto* p = std::get_if<ShuntPole>(&e)) {
            require_non_negative(p->c_g, "pole capacitance");
            require_non_negative(p->l_g, "pole inductance");
            if (p->squid >= static_cast<int>(squids.size()))
                throw InvalidParameter(where + " refers to missing SQUID " + std::to_string(p->squid));
            if (p->squid < 0 && p->l_g <= 0.0)
                throw InvalidParameter(where + " has neither SQUID nor inductance");
        } else if (auto* t = std::get_if<TransmissionLine>(&e)) {
            require_positive(t->z_line, "line impedance");
            require_non_negative(t->electrical_length, "electrical length");
            require_positive(t->ref_omega, "line reference frequency");
        } else if (auto* j = std::get_if<IdealInverter>(&e)) {
            require_positive(j->j, "inverter admittance");
        } else if (auto* c = std::get_if<SeriesCapacitor>(&e)) {
            require_positive(c->c, "capacitance");
        } else if (auto* l = std::get_if<SeriesInductor>(&e)) {
            require_positive(l->l, "inductance");
        } else if (auto* r = std::get_if<SeriesResistor>(&e)) {
            require_non_negative(r->r, "resistance");
        } else if (auto* c2 = std::get_if<ShuntCapacitor>(&e)) {
            require_positive(c2->c, "capacitance");
        } else if (auto* l2 = std::get_if<ShuntInductor>(&e)) {
            require_positive(l2->l, "inductance");
        } else if (auto* r2 = std::get_if<ShuntResistor>(&e)) {
            require_positive(r2->r, "resistance");
        }
    }
    double f = 0.0;
    for (const auto& s : squids) {
        if (s.alpha <= 0.0) continue;
        if (f == 0.0) {
            f = s.pump_freq;
        } else if (std::abs(s.pump_freq - f) > 1e-9 * f) {
            throw InvalidParameter("modulated SQUIDs must share one pump frequency");
        }
    }
    if (pumped() && f <= 0.0) throw InvalidParameter("modulated SQUID needs a positive pump frequency");
}

double IsolatorNetlist::pump_freq() const {
    double any = 0.0;
    for (const auto& s : squids) {
        if (s.alpha > 0.0) return s.pump_freq;
        any = std::max(any, s.pump_freq);
    }
    return any;
}

bool IsolatorNetlist::pumped() const {
    return std::any_of(squids.begin(), squids.end(), [](const auto& s) { return s.alpha > 0.0; });
}

SpectralABCD shunt_abcd(const SpectralMatrix& z, double omega) {
    const int n = z.sidebands();
    const MatrixXcd y = checked_inverse(z.matrix(), "shunt impedance", omega);
    return {SpectralMatrix::identity(n), zeros(n), SpectralMatrix(n, y), SpectralMatrix::identity(n),
            omega};
}

SpectralMatrix pole_admittance(const ShuntPole& pole, std::span<const squid::SquidParams> squids,
                               double omega, double omega_m, int n_sidebands) {
    const Eigen::VectorXd wn = sideband_frequencies(omega, omega_m, n_sidebands);
    const int d = 2 * n_sidebands + 1;
    MatrixXcd z = MatrixXcd::Zero(d, d);
    if (pole.squid >= 0) {
        if (pole.squid >= static_cast<int>(squids.size()))
            throw InvalidParameter("pole refers to a missing SQUID");
        squid::SquidParams s = squids[pole.squid];
        s.pump_freq = omega_m;
        z = squid::spectral_impedance(s, omega, n_sidebands).matrix();
    }
    for (int k = 0; k < d; ++k) z(k, k) += kI * wn(k) * pole.l_g;
    MatrixXcd y = checked_inverse(z, "pole inductive branch", omega);
    for (int k = 0; k < d; ++k) y(k, k) += kI * wn(k) * pole.c_g;
    return SpectralMatrix(n_sidebands, std::move(y));
}

SpectralABCD element_abcd(const Element& e, std::span<const squid::SquidParams> squids,
                          double omega, double omega_m, int n) {
    const Eigen::VectorXd wn = sideband_frequencies(omega, omega_m, n);
    const int d = 2 * n + 1;
    SpectralABCD out = SpectralABCD::identity(n, omega);
    auto reactance_guard = [&](double w) {
        if (w == 0.0) throw SingularNetwork("capacitor at zero sideband frequency", omega, "capacitor");
    };
    if (auto* c = std::get_if<SeriesCapacitor>(&e)) {
        VectorXcd v(d);
        for (int k = 0; k < d; ++k) {
            reactance_guard(wn(k));
            v(k) = 1.0 / (kI * wn(k) * c->c);
        }
        out.b = diag_of(n, v);
    } else if (auto* l = std::get_if<SeriesInductor>(&e)) {
        out.b = diag_of(n, (kI * l->l * wn.cast<Complex>()).eval());
    } else if (auto* r = std::get_if<SeriesResistor>(&e)) {
        out.b = diag_of(n, VectorXcd::Constant(d, r->r));
    } else if (auto* sc = std::get_if<ShuntCapacitor>(&e)) {
        out.c = diag_of(n, (kI * sc->c * wn.cast<Complex>()).eval());
    } else if (auto* sl = std::get_if<ShuntInductor>(&e)) {
        VectorXcd v(d);
        for (int k = 0; k < d; ++k) {
            if (wn(k) == 0.0) throw SingularNetwork("shunt inductor at zero frequency", omega, "inductor");
            v(k) = 1.0 / (kI * wn(k) * sl->l);
        }
        out.c = diag_of(n, v);
    } else if (auto* sr = std::get_if<ShuntResistor>(&e)) {
        out.c = diag_of(n, VectorXcd::Constant(d, 1.0 / sr->r));
    } else if (auto* t = std::get_if<TransmissionLine>(&e)) {
        VectorXcd a(d), b(d), c2(d);
        for (int k = 0; k < d; ++k) {
            const double theta = t->electrical_length * wn(k) / t->ref_omega;
            a(k) = std::cos(theta);
            b(k) = kI * t->z_line * std::sin(theta);
            c2(k) = kI * std::sin(theta) / t->z_line;
        }
        out.a = diag_of(n, a);
        out.b = diag_of(n, b);
        out.c = diag_of(n, c2);
        out.d = diag_of(n, a);
    } else if (auto* j = std::get_if<IdealInverter>(&e)) {
        out.a = zeros(n);
        out.d = zeros(n);
        out.b = SpectralMatrix(n, MatrixXcd::Identity(d, d) * (kI / j->j));
        out.c = SpectralMatrix(n, MatrixXcd::Identity(d, d) * (kI * j->j));
    } else if (auto* p = std::get_if<ShuntPole>(&e)) {
        out.c = pole_admittance(*p, squids, omega, omega_m, n);
    }
    return out;
}

SpectralABCD cascade(std::span<const SpectralABCD> chain) {
    if (chain.empty()) throw InvalidParameter("cannot cascade an empty chain");
    SpectralABCD acc = chain[0];
    for (std::size_t k = 1; k < chain.size(); ++k) acc = acc * chain[k];
    return acc;
}

SpectralSParams to_sparams(const SpectralABCD& t, double z0) {
    require_positive(z0, "z0");
    const int n = t.sidebands();
    const int d = 2 * n + 1;
    const MatrixXcd id = MatrixXcd::Identity(d, d);
    const auto& a = t.a.matrix();
    const auto& b = t.b.matrix();
    const auto& c = t.c.matrix();
    const auto& dd = t.d.matrix();
    const MatrixXcd p = a * z0 + b;
    const MatrixXcd q = c * (z0 * z0) + dd * z0;
    const MatrixXcd pq_inv = checked_inverse(p + q, "P+Q", t.omega);
    const MatrixXcd zin2 = checked_solve(a + z0 * c, b + z0 * dd, "A+Z0*C", t.omega);
    const MatrixXcd x = checked_inverse(zin2 + z0 * id, "Zin2+Z0", t.omega);
    SpectralSParams s;
    s.z0 = z0;
    s.omega = t.omega;
    s.s11 = SpectralMatrix(n, (p - q) * pq_inv);
    s.s21 = SpectralMatrix(n, 2.0 * z0 * pq_inv);
    s.s22 = SpectralMatrix(n, (zin2 - z0 * id) * x);
    s.s12 = SpectralMatrix(n, 2.0 * (a * zin2 - b) * x);
    return s;
}

Directionality directionality(const SpectralSParams& sp) {
    const double fwd = std::abs(sp.s21.at(0, 0));
    const double rev = std::abs(sp.s12.at(0, 0));
    if (rev == 0.0) {
        return {std::numeric_limits<double>::infinity(), coupled_mode::kDirectionalityCapDb, true};
    }
    const double lin = fwd / rev;
    return {lin, coupled_mode::directionality_db(lin), false};
}

SpectralABCD network_abcd(const IsolatorNetlist& net, double omega) {
    require_finite(omega, "omega");
    const double wm = net.pump_freq();
    SpectralABCD acc = SpectralABCD::identity(net.n_sidebands, omega);
    for (const auto& e : net.elements) acc = acc * element_abcd(e, net.squids, omega, wm, net.n_sidebands);
    acc.omega = omega;
    return acc;
}

SpectralSParams network_sparams(const IsolatorNetlist& net, double omega) {
    return to_sparams(network_abcd(net, omega), net.z0);
}

std::vector<SpectralSParams> isolator_sparams(const IsolatorNetlist& net,
                                              std::span<const double> omegas) {
    net.validate();
    std::vector<SpectralSParams> out(omegas.size());
    detail::parallel_for(omegas.size(), [&](std::size_t i) { out[i] = network_sparams(net, omegas[i]); });
    return out;
}

SpectralSParams two_squid_circuit(const squid::SquidParams& s1, const squid::SquidParams& s2,
                                  double coupling_c, double omega, double z0, int n_sidebands) {
    IsolatorNetlist net;
    net.squids = {s1, s2};
    net.z0 = z0;
    net.n_sidebands = n_sidebands;
    net.elements = {ShuntPole{0.0, 0.0, 0}, SeriesCapacitor{coupling_c}, ShuntPole{0.0, 0.0, 1}};
    net.validate();
    return network_sparams(net, omega);
}

SpectralSParams ideal_diplexer(int n_sidebands, double z0, double omega) {
    SpectralSParams s;
    s.z0 = z0;
    s.omega = omega;
    s.s11 = zeros(n_sidebands);
    s.s22 = zeros(n_sidebands);
    s.s21 = zeros(n_sidebands);
    s.s21.at(0, 0) = 1.0;
    s.s12 = s.s21;
    return s;
}

SpectralSParams connect(const SpectralSParams& a, const SpectralSParams& b) {
    if (a.sidebands() != b.sidebands())
        throw DimensionMismatch("cannot connect networks with different sideband counts");
    const int n = a.sidebands();
    const int d = 2 * n + 1;
    const MatrixXcd id = MatrixXcd::Identity(d, d);
    const auto& a11 = a.s11.matrix();
    const auto& a12 = a.s12.matrix();
    const auto& a21 = a.s21.matrix();
    const auto& a22 = a.s22.matrix();
    const auto& b11 = b.s11.matrix();
    const auto& b12 = b.s12.matrix();
    const auto& b21 = b.s21.matrix();
    const auto& b22 = b.s22.matrix();
    const MatrixXcd l = checked_inverse(id - a22 * b11, "interstage loop", a.omega);
    const MatrixXcd r = checked_inverse(id - b11 * a22, "interstage loop", a.omega);
    SpectralSParams s;
    s.z0 = a.z0;
    s.omega = a.omega;
    s.s11 = SpectralMatrix(n, a11 + a12 * b11 * l * a21);
    s.s21 = SpectralMatrix(n, b21 * l * a21);
    s.s12 = SpectralMatrix(n, a12 * r * b12);
    s.s22 = SpectralMatrix(n, b22 + b21 * l * a22 * b12);
    return s;
}

SpectralSParams cascade_with_diplexer(const SpectralSParams& a, const SpectralSParams& b,
                                      bool same_grid) {
    if (same_grid && a.sidebands() == b.sidebands()) {
        return connect(connect(a, ideal_diplexer(a.sidebands(), a.z0, a.omega)), b);
    }
    auto center = [](const SpectralSParams& s) {
        SpectralSParams c;
        c.z0 = s.z0;
        c.omega = s.omega;
        c.s11 = s.s11.truncated(0);
        c.s21 = s.s21.truncated(0);
        c.s12 = s.s12.truncated(0);
        c.s22 = s.s22.truncated(0);
        return c;
    };
    return connect(center(a), center(b));
}

std::vector<SpectralSParams> cascade_isolators(const IsolatorNetlist& net_a,
                                               const IsolatorNetlist& net_b,
                                               std::span<const double> omegas) {
    net_a.validate();
    net_b.validate();
    if (std::abs(net_a.z0 - net_b.z0) > 1e-12 * net_a.z0)
        throw InvalidParameter("cascaded stages must share the port impedance");
    const double fa = net_a.pump_freq();
    const double fb = net_b.pump_freq();
    const bool same_grid = net_a.n_sidebands == net_b.n_sidebands &&
                           std::abs(fa - fb) <= 1e-9 * std::max(fa, fb);
    std::vector<SpectralSParams> out(omegas.size());
    detail::parallel_for(omegas.size(), [&](std::size_t i) {
        out[i] = cascade_with_diplexer(network_sparams(net_a, omegas[i]),
                                       network_sparams(net_b, omegas[i]), same_grid);
    });
    return out;
}

PointMetrics point_metrics(const SpectralSParams& sp) {
    PointMetrics m{};
    m.s21_db = safe_db(sp.s21.at(0, 0));
    m.s12_db = safe_db(sp.s12.at(0, 0));
    m.s11_db = safe_db(sp.s11.at(0, 0));
    m.s22_db = safe_db(sp.s22.at(0, 0));
    m.d_db = directionality(sp).db;
    m.il_db = -m.s21_db;
    m.rl_db = -std::max(m.s11_db, m.s22_db);
    return m;
}

std::vector<double> linspace(double start, double stop, int points) {
    if (points < 1) throw InvalidParameter("grid needs at least one point");
    std::vector<double> v(points);
    if (points == 1) {
        v[0] = start;
        return v;
    }
    for (int k = 0; k < points; ++k) v[k] = start + (stop - start) * k / (points - 1);
    return v;
}

}  // namespace jpi::spectral_network
