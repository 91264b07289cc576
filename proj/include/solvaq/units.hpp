#pragma once

namespace solvaq::units {

inline constexpr double kBohrPerAngstrom = 1.8897259886;
inline constexpr double kKcalPerHartree = 627.5095;

inline constexpr double to_kcal(double hartree) { return hartree * kKcalPerHartree; }

}  // namespace solvaq::units
