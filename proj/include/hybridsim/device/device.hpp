#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hybridsim/device/constants.hpp"

namespace hybridsim::device {

struct BeamSpec {
  double length_m = 80e-6;
  double radius_m = 100e-9;
  double youngs_modulus_pa = MaterialConstants{}.youngs_modulus_pa;
  double density_kg_m3 = MaterialConstants{}.density_kg_m3;
  double relative_permittivity = MaterialConstants{}.relative_permittivity;
  double quality_factor = 1e5;
  // pi r^4 / 8 as printed for the cylindrical beam; the textbook value for a
  // solid circular section is pi r^4 / 4.
  bool textbook_inertia = false;

  void validate() const;
  double cross_section() const;
  double volume() const;
  double mass() const;
  double moment_of_inertia() const;
};

struct ElectrodeConfig {
  std::optional<double> u0_v;  // single-photon voltage; required unless capacitance given
  std::optional<double> capacitance_f;
  double zeta = 0.4;
  double height_m = 100e-9;
};

struct CavitySpec {
  double stripline_length_m = 0.01;
  double electrode_distance_m = 5e-6;
  double lateral_period_m = 0.0;  // 0: 10 * electrode distance
  double effective_permittivity = 6.0;
  double quality_factor = 1e6;
  double beam_x_m = 1e-6;
  double beam_y_m = 0.0;
  double beam_z_m = 0.0;
  // Anchored mode-function values; when set they replace the raw series.
  std::optional<double> mode_amplitude;
  std::optional<double> mode_gradient_per_m;
  std::size_t series_terms = 50;  // odd harmonics 1, 3, ..., 2*terms-1
  std::optional<ElectrodeConfig> electrode;

  void validate() const;
  double lateral_period() const { return lateral_period_m > 0.0 ? lateral_period_m : 10.0 * electrode_distance_m; }
  double mode_volume() const;
};

struct DriveSpec {
  double amplitude_v_per_m = 10e6;
  // Absent: drive on the red sideband, omega_p = omega_c + omega_m.
  std::optional<double> frequency_rad_s;

  void validate() const;
};

struct MagnetSpec {
  double length_m = 200e-9;
  double width_m = 50e-9;
  double thickness_m = 50e-9;
  double magnetization_a_per_m = 1.5e6;
  double standoff_m = 60e-9;
  double bias_field_t = 0.0;
  std::optional<double> gradient_t_per_m;  // replaces the dipole estimate

  void validate() const;
  double moment() const { return length_m * width_m * thickness_m * magnetization_a_per_m; }
};

// Euler-Bernoulli doubly clamped roots k_n l of cos(x) cosh(x) = 1.
const std::vector<double>& tabulated_beam_roots();
// Roots beyond the table are found by bisection.
std::vector<double> beam_roots(std::size_t n_modes);
double beam_frequency_equation(double kl);  // cos(kl) cosh(kl) - 1

std::vector<double> beam_mode_frequencies(const BeamSpec& beam, std::size_t n_modes);

struct ModeSeparation {
  double delta = 0.0;   // omega_1 - omega_m, rad/s
  double ratio = 0.0;   // delta / |g|, infinite for g = 0
  double frequency_ratio = 0.0;  // omega_1 / omega_m
  bool ok = false;      // delta / |g| >= threshold
};
ModeSeparation mode_separation_check(double omega_m, double omega_1, double g, double threshold = 10.0);

struct Depolarization {
  double eccentricity = 0.0;
  double n_z = 0.0;
  double n_perp = 0.0;
};
Depolarization depolarization_factors(double radius, double length);

struct Polarizability {
  Depolarization depolarization;
  double alpha_perp = 0.0;  // F/m
  double alpha_z = 0.0;
};
Polarizability polarizability(const BeamSpec& beam, const PhysicalConstants& pc = {});

struct CpwMode {
  double omega_c = 0.0;        // rad/s
  double field_amplitude = 0.0;  // V/m, single photon
  // Transverse mode function and its x-derivative at the beam, from the
  // truncated series.
  double e_x = 0.0, e_y = 0.0;
  double de_x_dx = 0.0, de_y_dx = 0.0;
  double series_last_term = 0.0;  // relative size of the last retained term
  bool series_converged = false;
  std::size_t terms = 0;
  // Values used downstream (anchors when configured, else the series).
  double mode_amplitude = 0.0;
  double mode_gradient = 0.0;  // 1/m
  bool anchored = false;
};
CpwMode cpw_mode(const CavitySpec& cavity, const PhysicalConstants& pc = {});

double zero_point_motion(double mass, double omega_m, const PhysicalConstants& pc = {});

// Eq-2 style coupling for the beam above the CPW gap, rad/s (signed).
double photon_phonon_coupling_gap(const BeamSpec& beam, const CavitySpec& cavity, const DriveSpec& drive,
                                  const PhysicalConstants& pc = {});
// Electrode configuration with |dE_c/dx| ~ u0 zeta / h^2, rad/s (signed).
double photon_phonon_coupling_electrode(const BeamSpec& beam, const CavitySpec& cavity, const DriveSpec& drive,
                                        const PhysicalConstants& pc = {});
double electrode_u0(const CavitySpec& cavity, const PhysicalConstants& pc = {});

double magnet_gradient(const MagnetSpec& magnet, const PhysicalConstants& pc = {});
double spin_motion_coupling(double mass, double omega_m, double gradient, const PhysicalConstants& pc = {});
double spin_transition_frequency(double bias_field, const PhysicalConstants& pc = {});

double thermal_occupation(double omega, double temperature, const PhysicalConstants& pc = {});

struct DecoherenceEstimates {
  double dipole_moment = 0.0;         // C m
  double scattering_rate = 0.0;       // Gamma_sc, 1/s
  double recoil_frequency = 0.0;      // rad/s
  double gamma_sc = 0.0;              // 1/s
  double gamma_sc_hz = 0.0;
  double strain_coupling = 0.0;       // rad/s
  double strain_detuning = 0.0;       // rad/s
  double spin_spin_rate = 0.0;        // 2 g^2 / Delta, rad/s
  double spin_spin_hz = 0.0;
  bool gamma_sc_negligible = false;   // vs gamma_m
  bool spin_spin_negligible = false;
};
double strain_spin_spin_rate(double g_strain, double detuning);
DecoherenceEstimates decoherence_estimates(const BeamSpec& beam, const DriveSpec& drive, double omega_drive,
                                           double omega_m, double gamma_m,
                                           double g_strain = 2.0 * std::numbers::pi * 1.0,
                                           double strain_detuning = 2.0 * std::numbers::pi * 300e3,
                                           const PhysicalConstants& pc = {});

}  // namespace hybridsim::device
