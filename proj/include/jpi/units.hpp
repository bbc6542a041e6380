#pragma once

#include <numbers>

namespace jpi {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Magnetic flux quantum h/2e [Wb].
inline constexpr double kFluxQuantum = 2.067833848e-15;

constexpr double hz_to_rad(double f_hz) { return kTwoPi * f_hz; }
constexpr double rad_to_hz(double omega) { return omega / kTwoPi; }
constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace jpi
