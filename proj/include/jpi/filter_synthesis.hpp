#pragma once

#include <vector>

#include "jpi/squid.hpp"

namespace jpi {

/// Linear band-pass prescription. Frequencies in Hz, impedances in ohms.
struct FilterSpec {
    int order = 3;
    double center_freq = 7.3e9;
    double bandwidth = 0.8e9;
    double ripple_db = 0.125;
    double z0 = 50.0;
};

void validate(const FilterSpec& spec);

struct SynthesizedFilter {
    std::vector<double> g;                // g0 .. g_{n+1}
    double w_bar = 0.0;                   // fractional bandwidth
    std::vector<double> pole_impedances;  // Z_r,1 .. Z_r,n
    std::vector<double> inverters;        // J01 .. J_{n,n+1}
};

}  // namespace jpi

namespace jpi::filter_synthesis {

/// Chebyshev low-pass prototype g0..g_{n+1} (g0 = 1).
std::vector<double> chebyshev_prototype(int order, double ripple_db);

/// (w2 - w1) / sqrt(w1 w2).
double fractional_bw(double omega1, double omega2);

struct KneeFrequencies {
    double omega1;
    double omega2;
};

/// Geometric band edges: w1 w2 = w0^2 and w2 - w1 = 2 pi BW.
KneeFrequencies knee_frequencies(const FilterSpec& spec);

/// Pole impedances that make every inverter equal 1/Z0.
std::vector<double> pole_impedances(const FilterSpec& spec);

/// Inverter admittances J01..J_{n,n+1} for the given pole impedances.
std::vector<double> inverter_values(const FilterSpec& spec, const std::vector<double>& pole_z);

/// Full synthesis; `pole_z` empty selects the direct-Z0-coupled recursion.
SynthesizedFilter synthesize(const FilterSpec& spec, const std::vector<double>& pole_z = {});

/// Z0 (ZL + i Z0 tan t) / (Z0 + i ZL tan t); quarter-wave closed form at t = pi/2.
Complex tl_input_impedance(double z0_line, Complex z_load, double electrical_length);
Complex tl_input_admittance(double y0_line, Complex y_load, double electrical_length);

struct PoleRealization {
    double l_total;      // Z_r / w0
    double c_g;          // 1 / (Z_r w0)
    double l_g;          // (1 - fraction) l_total
    double l_squid;      // fraction * l_total
    squid::SquidParams squid;  // ic0 sized so the static inductance equals l_squid
};

PoleRealization realize_pole(double z_r, double center_freq_hz, const squid::SquidParams& squid,
                             double squid_fraction);

}  // namespace jpi::filter_synthesis
