#pragma once

#include <cmath>
#include <numbers>

namespace uavbeam {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// Every dB <-> linear conversion goes through here so units cannot drift
// between modules.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Noise PSD is configured in dBm/Hz, consumed in W/Hz.
inline double dbm_per_hz_to_w_per_hz(double dbm_hz) {
  return std::pow(10.0, (dbm_hz - 30.0) / 10.0);
}

}  // namespace uavbeam
