#pragma once

#include <numbers>

namespace hybridsim::device {

// SI values (CODATA 2018). Passed explicitly to every formula so tests can
// rescale the base units and check dimensional consistency.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;          // J s
  double epsilon0 = 8.8541878128e-12;     // F/m
  double mu0 = 1.25663706212e-6;          // N/A^2
  double c = 299792458.0;                 // m/s
  double bohr_magneton = 9.2740100783e-24;  // J/T
  double boltzmann = 1.380649e-23;        // J/K

  double vacuum_impedance() const { return mu0 * c; }
};

inline constexpr double kNvGFactor = 2.0;
// NV ground-state zero-field splitting D, rad/s.
inline constexpr double kNvZeroFieldSplitting = 2.0 * std::numbers::pi * 2.87e9;

// Diamond handbook values; overridable per run.
struct MaterialConstants {
  double youngs_modulus_pa = 1.05e12;
  double density_kg_m3 = 3515.0;
  double relative_permittivity = 5.7;
};

}  // namespace hybridsim::device
