#include "hybridsim/device/device.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hybridsim/errors.hpp"

namespace hybridsim::device {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void BeamSpec::validate() const {
  require(radius_m > 0.0 && length_m > radius_m, "BeamSpec: need length > radius > 0");
  require(youngs_modulus_pa > 0.0 && density_kg_m3 > 0.0 && quality_factor > 0.0,
          "BeamSpec: Young's modulus, density and Q must be positive");
  require(relative_permittivity > 1.0, "BeamSpec: relative permittivity must exceed 1");
}

double BeamSpec::cross_section() const { return kPi * radius_m * radius_m; }
double BeamSpec::volume() const { return cross_section() * length_m; }
double BeamSpec::mass() const { return density_kg_m3 * volume(); }
double BeamSpec::moment_of_inertia() const {
  return kPi * std::pow(radius_m, 4) / (textbook_inertia ? 4.0 : 8.0);
}

void CavitySpec::validate() const {
  require(electrode_distance_m > 0.0 && stripline_length_m > electrode_distance_m,
          "CavitySpec: need stripline length > electrode distance > 0");
  require(effective_permittivity >= 1.0, "CavitySpec: effective permittivity must be >= 1");
  require(quality_factor > 0.0, "CavitySpec: quality factor must be positive");
  require(lateral_period_m >= 0.0, "CavitySpec: lateral period must be non-negative");
  require(series_terms >= 1, "CavitySpec: need at least one series term");
  if (electrode) {
    require(electrode->height_m > 0.0, "CavitySpec: electrode height must be positive");
    require(electrode->zeta >= 0.0, "CavitySpec: geometry factor must be non-negative");
  }
}

double CavitySpec::mode_volume() const { return kPi * electrode_distance_m * electrode_distance_m * stripline_length_m; }

void DriveSpec::validate() const {
  require(amplitude_v_per_m >= 0.0, "DriveSpec: amplitude must be non-negative");
  if (frequency_rad_s) require(*frequency_rad_s > 0.0, "DriveSpec: frequency must be positive");
}

void MagnetSpec::validate() const {
  require(length_m > 0.0 && width_m > 0.0 && thickness_m > 0.0, "MagnetSpec: dimensions must be positive");
  require(magnetization_a_per_m >= 0.0, "MagnetSpec: magnetization must be non-negative");
  require(standoff_m > 0.0, "MagnetSpec: standoff must be positive");
}

const std::vector<double>& tabulated_beam_roots() {
  static const std::vector<double> roots{4.730, 7.853, 10.996, 14.137, 17.279};
  return roots;
}

double beam_frequency_equation(double kl) { return std::cos(kl) * std::cosh(kl) - 1.0; }

std::vector<double> beam_roots(std::size_t n_modes) {
  const auto& table = tabulated_beam_roots();
  std::vector<double> roots;
  for (std::size_t n = 0; n < n_modes; ++n) {
    if (n < table.size()) {
      roots.push_back(table[n]);
      continue;
    }
    // cos x cosh x = 1 has exactly one root in ((n+1) pi, (n+2) pi); scale
    // by cosh to keep the bracket function O(1).
    auto f = [](double x) { return std::cos(x) - 1.0 / std::cosh(x); };
    double lo = (static_cast<double>(n) + 1.0) * kPi;
    double hi = (static_cast<double>(n) + 2.0) * kPi;
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  }
  return roots;
}

std::vector<double> beam_mode_frequencies(const BeamSpec& beam, std::size_t n_modes) {
  beam.validate();
  const double stiffness = std::sqrt(beam.youngs_modulus_pa * beam.moment_of_inertia() /
                                     (beam.density_kg_m3 * beam.cross_section()));
  std::vector<double> out;
  for (double kl : beam_roots(n_modes)) {
    const double k = kl / beam.length_m;
    out.push_back(k * k * stiffness);
  }
  return out;
}

ModeSeparation mode_separation_check(double omega_m, double omega_1, double g, double threshold) {
  ModeSeparation r;
  r.delta = omega_1 - omega_m;
  r.frequency_ratio = omega_1 / omega_m;
  r.ratio = g == 0.0 ? std::numeric_limits<double>::infinity() : r.delta / std::abs(g);
  r.ok = r.ratio >= threshold;
  return r;
}

Depolarization depolarization_factors(double radius, double length) {
  require(radius > 0.0 && radius < length, "depolarization_factors: need 0 < r < l");
  Depolarization d;
  const double x = (radius / length) * (radius / length);  // 1 - e^2
  const double e = std::sqrt(1.0 - x);
  d.eccentricity = e;
  if (e < 0.05) {
    // (1-e^2) (1/3 + e^2/5 + e^4/7 + ...), the e -> 0 expansion
    double sum = 0.0, term = 1.0, e2 = e * e;
    for (int k = 0; k < 40; ++k) {
      sum += term / (2 * k + 3);
      term *= e2;
    }
    d.n_z = x * sum;
  } else {
    // 1 - e = x / (1 + e) avoids cancellation for needle-like beams.
    const double log_ratio = std::log((1.0 + e) * (1.0 + e) / x);
    d.n_z = x / (2.0 * e * e * e) * (log_ratio - 2.0 * e);
  }
  d.n_perp = 0.5 * (1.0 - d.n_z);
  return d;
}

Polarizability polarizability(const BeamSpec& beam, const PhysicalConstants& pc) {
  beam.validate();
  Polarizability p;
  p.depolarization = depolarization_factors(beam.radius_m, beam.length_m);
  const double chi = beam.relative_permittivity - 1.0;
  p.alpha_perp = pc.epsilon0 * chi / (1.0 + p.depolarization.n_perp * chi);
  p.alpha_z = pc.epsilon0 * chi / (1.0 + p.depolarization.n_z * chi);
  return p;
}

CpwMode cpw_mode(const CavitySpec& cavity, const PhysicalConstants& pc) {
  cavity.validate();
  CpwMode m;
  const double eps = cavity.effective_permittivity;
  m.omega_c = kPi * pc.c / (cavity.stripline_length_m * std::sqrt(eps));
  m.field_amplitude = std::sqrt(pc.hbar * m.omega_c / (pc.epsilon0 * cavity.mode_volume()));

  const double b = cavity.lateral_period();
  const double delta = cavity.electrode_distance_m / b;
  const double lambda0 = 2.0 * kPi * pc.c / m.omega_c;
  const double v = std::sqrt(eps - 1.0);  // (lambda0/lambda_c)^2 - 1 with lambda_c = lambda0/sqrt(eps)
  const double x = cavity.beam_x_m, y = cavity.beam_y_m;

  double last_amp = 0.0, last_grad = 0.0;
  for (std::size_t k = 0; k < cavity.series_terms; ++k) {
    const double n = 2.0 * static_cast<double>(k) + 1.0;
    const double arg = n * kPi * delta / 2.0;
    const double s_n = std::sin(arg) / arg * std::sin(arg);
    const double f_n = std::sqrt(1.0 + std::pow(2.0 * b * v / (n * lambda0), 2));
    const double gamma_n = n * kPi * f_n / b;
    const double decay = std::exp(-gamma_n * x);
    const double tx = -s_n / f_n * std::cos(n * kPi * y / b) * decay;
    const double ty = s_n * std::sin(n * kPi * y / b) * decay;
    m.e_x += tx;
    m.e_y += ty;
    m.de_x_dx += -gamma_n * tx;
    m.de_y_dx += -gamma_n * ty;
    last_amp = std::hypot(tx, ty);
    last_grad = gamma_n * last_amp;
  }
  m.terms = cavity.series_terms;
  const double amp = std::hypot(m.e_x, m.e_y);
  const double grad = std::hypot(m.de_x_dx, m.de_y_dx);
  m.series_last_term = std::max(amp > 0 ? last_amp / amp : 0.0, grad > 0 ? last_grad / grad : 0.0);
  m.series_converged = m.series_last_term < 1e-6;

  m.anchored = cavity.mode_amplitude.has_value() || cavity.mode_gradient_per_m.has_value();
  m.mode_amplitude = cavity.mode_amplitude.value_or(amp);
  m.mode_gradient = cavity.mode_gradient_per_m.value_or(grad);
  return m;
}

double zero_point_motion(double mass, double omega_m, const PhysicalConstants& pc) {
  require(mass > 0.0 && omega_m > 0.0, "zero_point_motion: mass and frequency must be positive");
  return std::sqrt(pc.hbar / (2.0 * mass * omega_m));
}

double photon_phonon_coupling_gap(const BeamSpec& beam, const CavitySpec& cavity, const DriveSpec& drive,
                                  const PhysicalConstants& pc) {
  drive.validate();
  const auto mode = cpw_mode(cavity, pc);
  if (!mode.series_converged && !cavity.mode_gradient_per_m) {
    throw NumericalError("photon_phonon_coupling_gap: mode-function series not converged at the beam position "
                         "(last term " + std::to_string(mode.series_last_term) + "); supply an anchored gradient");
  }
  const double omega_m = beam_mode_frequencies(beam, 1).front();
  const double alpha = polarizability(beam, pc).alpha_perp;
  const double xzpf = zero_point_motion(beam.mass(), omega_m, pc);
  return -beam.volume() * alpha * mode.field_amplitude * drive.amplitude_v_per_m * mode.mode_gradient * xzpf / pc.hbar;
}

double electrode_u0(const CavitySpec& cavity, const PhysicalConstants& pc) {
  if (!cavity.electrode) throw std::invalid_argument("electrode_u0: cavity has no electrode configuration");
  if (cavity.electrode->u0_v) return *cavity.electrode->u0_v;
  if (cavity.electrode->capacitance_f) {
    const double omega_c = cpw_mode(cavity, pc).omega_c;
    return std::sqrt(pc.hbar * omega_c / *cavity.electrode->capacitance_f);
  }
  throw std::invalid_argument("electrode_u0: need u0 or the resonator capacitance");
}

double photon_phonon_coupling_electrode(const BeamSpec& beam, const CavitySpec& cavity, const DriveSpec& drive,
                                        const PhysicalConstants& pc) {
  cavity.validate();
  drive.validate();
  if (!cavity.electrode) throw std::invalid_argument("photon_phonon_coupling_electrode: no electrode configuration");
  const auto& el = *cavity.electrode;
  const double u0 = electrode_u0(cavity, pc);
  const double omega_m = beam_mode_frequencies(beam, 1).front();
  const double alpha = polarizability(beam, pc).alpha_perp;
  const double field_gradient = u0 * el.zeta / (el.height_m * el.height_m);
  return -beam.volume() * alpha * drive.amplitude_v_per_m * field_gradient *
         std::sqrt(1.0 / (2.0 * beam.mass() * pc.hbar * omega_m));
}

double magnet_gradient(const MagnetSpec& magnet, const PhysicalConstants& pc) {
  magnet.validate();
  return 3.0 * pc.mu0 * magnet.moment() / (4.0 * kPi * std::pow(magnet.standoff_m, 4));
}

double spin_motion_coupling(double mass, double omega_m, double gradient, const PhysicalConstants& pc) {
  return kNvGFactor * pc.bohr_magneton / (std::sqrt(2.0) * pc.hbar) * gradient * zero_point_motion(mass, omega_m, pc);
}

double spin_transition_frequency(double bias_field, const PhysicalConstants& pc) {
  return kNvZeroFieldSplitting - kNvGFactor * pc.bohr_magneton * bias_field / pc.hbar;
}

double thermal_occupation(double omega, double temperature, const PhysicalConstants& pc) {
  require(temperature > 0.0, "thermal_occupation: temperature must be positive");
  require(omega > 0.0, "thermal_occupation: frequency must be positive");
  return 1.0 / std::expm1(pc.hbar * omega / (pc.boltzmann * temperature));
}

double strain_spin_spin_rate(double g_strain, double detuning) {
  require(detuning != 0.0, "strain_spin_spin_rate: zero detuning");
  return 2.0 * g_strain * g_strain / std::abs(detuning);
}

DecoherenceEstimates decoherence_estimates(const BeamSpec& beam, const DriveSpec& drive, double omega_drive,
                                           double omega_m, double gamma_m, double g_strain, double strain_detuning,
                                           const PhysicalConstants& pc) {
  drive.validate();
  require(omega_drive > 0.0 && omega_m > 0.0, "decoherence_estimates: frequencies must be positive");
  DecoherenceEstimates d;
  d.dipole_moment = beam.volume() * polarizability(beam, pc).alpha_perp * drive.amplitude_v_per_m;
  const double k = omega_drive / pc.c;
  d.scattering_rate = pc.c * pc.c * pc.vacuum_impedance() * std::pow(k, 4) /
                      (12.0 * kPi * pc.hbar * omega_drive) * d.dipole_moment * d.dipole_moment;
  d.recoil_frequency = pc.hbar * k * k / (2.0 * beam.mass());
  d.gamma_sc = d.recoil_frequency / omega_m * d.scattering_rate;
  d.gamma_sc_hz = d.gamma_sc / (2.0 * kPi);
  d.strain_coupling = g_strain;
  d.strain_detuning = strain_detuning;
  d.spin_spin_rate = strain_spin_spin_rate(g_strain, strain_detuning);
  d.spin_spin_hz = d.spin_spin_rate / (2.0 * kPi);
  d.gamma_sc_negligible = d.gamma_sc < 1e-2 * gamma_m;
  d.spin_spin_negligible = d.spin_spin_rate < 1e-2 * gamma_m;
  return d;
}

}  // namespace hybridsim::device
