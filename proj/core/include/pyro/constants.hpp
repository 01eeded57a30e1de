#pragma once

namespace pyro {

// Universal gas constant [J/(mol K)]
inline constexpr double kGasConstant = 8.314462618;

// Stefan-Boltzmann constant [W/(m2 K4)]
inline constexpr double kStefanBoltzmann = 5.670374419e-8;

// Reference state for formation enthalpies: 298.15 K, 1 bar
inline constexpr double kReferenceT = 298.15;
inline constexpr double kReferenceP = 1.0e5;

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double kCelsiusOffset = 273.15;

inline constexpr double celsius_to_kelvin(double t_c) { return t_c + kCelsiusOffset; }
inline constexpr double kelvin_to_celsius(double t_k) { return t_k - kCelsiusOffset; }
inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rpm_to_rad_s(double rpm) { return rpm * 2.0 * kPi / 60.0; }
inline constexpr double bar_to_pa(double bar) { return bar * 1.0e5; }
inline constexpr double pa_to_bar(double pa) { return pa * 1.0e-5; }

// Temperature bracket used by the energy-to-temperature inversion; states
// outside this range are treated as nonphysical.
inline constexpr double kTemperatureMin = 150.0;
inline constexpr double kTemperatureMax = 3500.0;

}  // namespace pyro
