#pragma once

#include <numbers>

namespace metaori::units {

inline constexpr double pi = std::numbers::pi;

// mm^3 -> mL
inline constexpr double mm3_to_mL = 1e-3;
// N/mm^2 -> mbar (1 N/mm^2 = 1 MPa = 1e4 mbar)
inline constexpr double Nmm2_to_mbar = 1e4;

inline constexpr double deg(double rad) { return rad * 180.0 / pi; }
inline constexpr double rad(double deg) { return deg * pi / 180.0; }

} // namespace metaori::units
