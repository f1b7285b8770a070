#include "hybridsim/device/couplings.hpp"

#include <algorithm>
#include <cmath>

namespace hybridsim::device {

StrongCoupling strong_coupling(const CouplingSet& c) {
  StrongCoupling s;
  s.weakest_coupling = std::min(std::abs(c.g), std::abs(c.lambda));
  s.largest_loss = std::max({c.n_th * c.gamma_m, c.kappa, c.gamma_s});
  s.holds = s.weakest_coupling > s.largest_loss;
  return s;
}

CouplingReport build_coupling_set(const DeviceSpec& spec, const PhysicalConstants& pc) {
  spec.beam.validate();
  spec.cavity.validate();
  spec.drive.validate();
  spec.magnet.validate();
  if (!(spec.gamma_s >= 0.0)) throw std::invalid_argument("build_coupling_set: gamma_s must be non-negative");

  CouplingReport r;
  auto& c = r.set;
  const auto freqs = beam_mode_frequencies(spec.beam, 2);
  c.omega_m = freqs[0];
  c.omega_1 = freqs[1];
  c.mass = spec.beam.mass();
  c.x_zpf = zero_point_motion(c.mass, c.omega_m, pc);

  r.mode = cpw_mode(spec.cavity, pc);
  r.polarizability = polarizability(spec.beam, pc);
  c.omega_c = r.mode.omega_c;
  c.field_amplitude = r.mode.field_amplitude;
  c.omega_p = spec.drive.frequency_rad_s.value_or(c.omega_c + c.omega_m);
  c.delta = c.omega_p - c.omega_c;

  c.g = spec.variant == CouplingVariant::gap ? photon_phonon_coupling_gap(spec.beam, spec.cavity, spec.drive, pc)
                                             : photon_phonon_coupling_electrode(spec.beam, spec.cavity, spec.drive, pc);

  r.dipole_gradient_estimate = magnet_gradient(spec.magnet, pc);
  r.magnet_gradient = spec.magnet.gradient_t_per_m.value_or(r.dipole_gradient_estimate);
  c.lambda = spin_motion_coupling(c.mass, c.omega_m, r.magnet_gradient, pc);
  c.omega_plus = spin_transition_frequency(spec.magnet.bias_field_t, pc);

  c.kappa = c.omega_c / spec.cavity.quality_factor;
  c.gamma_m = c.omega_m / spec.beam.quality_factor;
  c.gamma_s = spec.gamma_s;
  c.n_th = thermal_occupation(c.omega_m, spec.temperature_k, pc);

  r.separation = mode_separation_check(c.omega_m, c.omega_1, c.g);
  r.decoherence = decoherence_estimates(spec.beam, spec.drive, c.omega_p, c.omega_m, c.gamma_m,
                                        2.0 * std::numbers::pi * 1.0, 2.0 * std::numbers::pi * 300e3, pc);
  r.strong = strong_coupling(c);
  return r;
}

std::vector<LengthSweepPoint> length_sweep(const DeviceSpec& spec, const std::vector<double>& lengths,
                                           const PhysicalConstants& pc) {
  std::vector<LengthSweepPoint> out;
  out.reserve(lengths.size());
  for (double l : lengths) {
    DeviceSpec s = spec;
    s.beam.length_m = l;
    const auto r = build_coupling_set(s, pc);
    out.push_back({l, r.set.omega_m, r.set.g, r.set.lambda});
  }
  return out;
}

std::optional<double> coupling_crossing(const std::vector<LengthSweepPoint>& sweep) {
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    const double d0 = std::log(std::abs(sweep[i - 1].g)) - std::log(std::abs(sweep[i - 1].lambda));
    const double d1 = std::log(std::abs(sweep[i].g)) - std::log(std::abs(sweep[i].lambda));
    if (d0 == 0.0) return sweep[i - 1].length_m;
    if ((d0 < 0.0) != (d1 < 0.0)) {
      const double l0 = std::log(sweep[i - 1].length_m), l1 = std::log(sweep[i].length_m);
      return std::exp(l0 + (l1 - l0) * d0 / (d0 - d1));
    }
  }
  return std::nullopt;
}

}  // namespace hybridsim::device
