#pragma once

// CODATA 2018 values. Single source for all physical constants.
namespace tlau::constants {

inline constexpr double planck = 6.62607015e-34;         // J s
inline constexpr double electron_mass = 9.1093837015e-31; // kg

} // namespace tlau::constants
