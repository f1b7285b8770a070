#pragma once

#include <optional>
#include <vector>

#include "hybridsim/device/device.hpp"

namespace hybridsim::device {

enum class CouplingVariant { gap, electrode };

struct DeviceSpec {
  BeamSpec beam;
  CavitySpec cavity;
  DriveSpec drive;
  MagnetSpec magnet;
  double temperature_k = 0.02;
  double gamma_s = 2.0 * std::numbers::pi * 2e3;  // dephasing rate on D[sigma_z], 1/s
  CouplingVariant variant = CouplingVariant::gap;
};

// Frequencies in rad/s, rates in 1/s, field in V/m, lengths in m.
struct CouplingSet {
  double omega_m = 0.0;
  double omega_1 = 0.0;
  double omega_c = 0.0;
  double omega_p = 0.0;
  double delta = 0.0;  // omega_p - omega_c
  double omega_plus = 0.0;
  double field_amplitude = 0.0;
  double x_zpf = 0.0;
  double g = 0.0;       // signed
  double lambda = 0.0;  // signed
  double kappa = 0.0;
  double gamma_m = 0.0;
  double gamma_s = 0.0;
  double n_th = 0.0;
  double mass = 0.0;
};

struct StrongCoupling {
  double weakest_coupling = 0.0;  // min(|g|, |lambda|)
  double largest_loss = 0.0;      // max(n_th gamma_m, kappa, gamma_s)
  bool holds = false;
};

StrongCoupling strong_coupling(const CouplingSet& c);

struct CouplingReport {
  CouplingSet set;
  Polarizability polarizability;
  CpwMode mode;
  double magnet_gradient = 0.0;        // value used for lambda
  double dipole_gradient_estimate = 0.0;
  ModeSeparation separation;
  DecoherenceEstimates decoherence;
  StrongCoupling strong;
};

CouplingReport build_coupling_set(const DeviceSpec& spec, const PhysicalConstants& pc = {});

struct LengthSweepPoint {
  double length_m = 0.0;
  double omega_m = 0.0;
  double g = 0.0;
  double lambda = 0.0;
};

std::vector<LengthSweepPoint> length_sweep(const DeviceSpec& spec, const std::vector<double>& lengths,
                                           const PhysicalConstants& pc = {});

// Beam length where |g| = |lambda|, by log-linear interpolation between grid
// points; empty if the curves do not cross on the grid.
std::optional<double> coupling_crossing(const std::vector<LengthSweepPoint>& sweep);

}  // namespace hybridsim::device
