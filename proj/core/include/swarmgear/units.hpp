#pragma once

#include <numbers>

namespace swarmgear {

// Angles are radians everywhere inside the library; degrees appear only at
// external interfaces (config files, CSV columns, CLI).

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace swarmgear
