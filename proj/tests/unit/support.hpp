#pragma once

#include <cmath>
#include <random>

#include "jpi/netlist_builder.hpp"
#include "jpi/units.hpp"

namespace testing_support {

inline double rel_diff(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// 15/10/15 ohm three-pole filter at 7.3 GHz, 800 MHz, 0.125 dB.
inline jpi::IsolatorDesign three_pole_design(jpi::InverterRealization r = jpi::InverterRealization::Ideal) {
    jpi::IsolatorDesign d;
    d.filter = {3, 7.3e9, 0.8e9, 0.125, 50.0};
    d.pole_impedances = {15.0, 10.0, 15.0};
    d.realization = r;
    return d;
}

}  // namespace testing_support
