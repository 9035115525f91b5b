#pragma once

namespace oemsim::constants {

inline constexpr double hbar = 1.054571817e-34;      ///< reduced Planck constant, J*s
inline constexpr double k_boltzmann = 1.380649e-23;  ///< Boltzmann constant, J/K
inline constexpr double c_light = 299792458.0;       ///< speed of light, m/s
inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Tag identifying this constants table in emitted metadata.
inline constexpr const char* version_tag = "constants-v1";

}  // namespace oemsim::constants
