#include "jpi/filter_synthesis.hpp"

#include <cmath>

#include "jpi/errors.hpp"
#include "jpi/units.hpp"

namespace jpi {

void validate(const FilterSpec& spec) {
    require_finite(spec.center_freq, "filter.center_freq_hz");
    require_finite(spec.bandwidth, "filter.bandwidth_hz");
    require_finite(spec.ripple_db, "filter.ripple_db");
    require_finite(spec.z0, "filter.z0_ohm");
    if (spec.order < 2) throw InvalidParameter("filter order must be at least 2");
    if (spec.center_freq <= 0.0) throw InvalidParameter("center frequency must be positive");
    if (spec.bandwidth <= 0.0 || spec.bandwidth >= 2.0 * spec.center_freq)
        throw InvalidParameter("bandwidth must lie in (0, 2 * center frequency)");
    if (spec.ripple_db <= 0.0) throw InvalidParameter("ripple must be positive");
    if (spec.z0 <= 0.0) throw InvalidParameter("port impedance must be positive");
}

}  // namespace jpi

namespace jpi::filter_synthesis {

std::vector<double> chebyshev_prototype(int order, double ripple_db) {
    if (order < 1) throw InvalidParameter("prototype order must be at least 1");
    if (!(ripple_db > 0.0) || !std::isfinite(ripple_db))
        throw InvalidParameter("ripple must be positive");
    const int n = order;
    const double beta = std::log(1.0 / std::tanh(ripple_db * std::log(10.0) / 40.0));
    const double gam = std::sinh(beta / (2.0 * n));
    std::vector<double> a(n + 1), b(n + 1), g(n + 2);
    for (int k = 1; k <= n; ++k) {
        a[k] = std::sin((2.0 * k - 1.0) * kPi / (2.0 * n));
        const double s = std::sin(k * kPi / n);
        b[k] = gam * gam + s * s;
    }
    g[0] = 1.0;
    g[1] = 2.0 * a[1] / gam;
    for (int k = 2; k <= n; ++k) g[k] = 4.0 * a[k - 1] * a[k] / (b[k - 1] * g[k - 1]);
    if (n % 2 == 1) {
        g[n + 1] = 1.0;
    } else {
        const double c = 1.0 / std::tanh(beta / 4.0);
        g[n + 1] = c * c;
    }
    return g;
}

double fractional_bw(double omega1, double omega2) {
    require_finite(omega1, "omega1");
    require_finite(omega2, "omega2");
    if (omega1 <= 0.0 || omega2 < omega1)
        throw InvalidParameter("knee frequencies must satisfy 0 < omega1 <= omega2");
    return (omega2 - omega1) / std::sqrt(omega1 * omega2);
}

KneeFrequencies knee_frequencies(const FilterSpec& spec) {
    validate(spec);
    const double w0 = hz_to_rad(spec.center_freq);
    const double d = hz_to_rad(spec.bandwidth);
    const double w1 = (-d + std::sqrt(d * d + 4.0 * w0 * w0)) / 2.0;
    return {w1, w1 + d};
}

namespace {

double spec_w_bar(const FilterSpec& spec) {
    const auto k = knee_frequencies(spec);
    return fractional_bw(k.omega1, k.omega2);
}

}  // namespace

std::vector<double> pole_impedances(const FilterSpec& spec) {
    const auto g = chebyshev_prototype(spec.order, spec.ripple_db);
    const double wb = spec_w_bar(spec);
    std::vector<double> z(spec.order);
    z[0] = wb * spec.z0 / (g[0] * g[1]);
    for (int k = 1; k < spec.order; ++k)
        z[k] = spec.z0 * spec.z0 * wb * wb / (g[k] * g[k + 1] * z[k - 1]);
    return z;
}

std::vector<double> inverter_values(const FilterSpec& spec, const std::vector<double>& pole_z) {
    validate(spec);
    const int n = spec.order;
    if (static_cast<int>(pole_z.size()) != n)
        throw DimensionMismatch("expected " + std::to_string(n) + " pole impedances, got " +
                                std::to_string(pole_z.size()));
    for (double z : pole_z)
        if (!(z > 0.0) || !std::isfinite(z)) throw InvalidParameter("pole impedances must be positive");
    const auto g = chebyshev_prototype(n, spec.ripple_db);
    const double wb = spec_w_bar(spec);
    std::vector<double> j(n + 1);
    j[0] = std::sqrt(wb / (g[0] * g[1] * spec.z0 * pole_z[0]));
    for (int k = 1; k < n; ++k) j[k] = wb / std::sqrt(g[k] * g[k + 1] * pole_z[k - 1] * pole_z[k]);
    j[n] = std::sqrt(wb / (g[n] * g[n + 1] * spec.z0 * pole_z[n - 1]));
    return j;
}

SynthesizedFilter synthesize(const FilterSpec& spec, const std::vector<double>& pole_z) {
    validate(spec);
    SynthesizedFilter f;
    f.g = chebyshev_prototype(spec.order, spec.ripple_db);
    f.w_bar = spec_w_bar(spec);
    f.pole_impedances = pole_z.empty() ? pole_impedances(spec) : pole_z;
    f.inverters = inverter_values(spec, f.pole_impedances);
    return f;
}

Complex tl_input_impedance(double z0_line, Complex z_load, double electrical_length) {
    if (!(z0_line > 0.0)) throw InvalidParameter("line impedance must be positive");
    const double c = std::cos(electrical_length);
    const double s = std::sin(electrical_length);
    const Complex i(0.0, 1.0);
    // Multiplied through by cos so the quarter-wave point needs no special case.
    return z0_line * (z_load * c + i * z0_line * s) / (z0_line * c + i * z_load * s);
}

Complex tl_input_admittance(double y0_line, Complex y_load, double electrical_length) {
    return tl_input_impedance(y0_line, y_load, electrical_length);
}

PoleRealization realize_pole(double z_r, double center_freq_hz, const squid::SquidParams& squid,
                             double squid_fraction) {
    require_finite(z_r, "pole impedance");
    require_finite(center_freq_hz, "center frequency");
    require_finite(squid_fraction, "squid_fraction");
    if (!(z_r > 0.0)) throw InvalidParameter("pole impedance must be positive");
    if (!(center_freq_hz > 0.0)) throw InvalidParameter("center frequency must be positive");
    if (!(squid_fraction > 0.0) || squid_fraction > 1.0)
        throw Infeasible("squid_fraction must lie in (0, 1]");
    const double w0 = hz_to_rad(center_freq_hz);
    PoleRealization r{};
    r.l_total = z_r / w0;
    r.c_g = 1.0 / (z_r * w0);
    r.l_g = (1.0 - squid_fraction) * r.l_total;
    r.l_squid = squid_fraction * r.l_total;
    r.squid = squid;
    r.squid.ic0 = squid::ic0_for_inductance(r.l_squid, squid.beta);
    return r;
}

}  // namespace jpi::filter_synthesis
