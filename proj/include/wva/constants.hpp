#pragma once

namespace wva {

// Exact SI value.
inline constexpr double speed_of_light_m_per_s = 299792458.0;

// Same constant in the unit pairs used throughout: wavelengths are handled in
// nanometres, time delays in attoseconds (1 as = 1e-18 s).
inline constexpr double speed_of_light_nm_per_s = speed_of_light_m_per_s * 1e9;
inline constexpr double speed_of_light_nm_per_as = speed_of_light_nm_per_s * 1e-18;

inline constexpr double pi = 3.14159265358979323846;

}  // namespace wva
