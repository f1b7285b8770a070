#pragma once

#include <Eigen/Dense>

#include <cmath>

#include "hybridsim/interface/tripartite.hpp"

namespace hybridsim::interface {

// Photon-phonon coupling during the transfer; lambda stays constant.
struct PulseSchedule {
  enum class Shape { gaussian, constant };
  Shape shape = Shape::gaussian;
  double g0 = 0.0;     // rad/s
  double width = 4.0;  // g = g0 exp(-t^2 / width), t and width in the same time unit squared
  double t_start = 0.0;
  double t_end = 0.0;

  double at(double t) const;
  // Throws ConfigError unless t_end > t_start, g0 > 0 and g(t_start) > lambda
  // (the coupling to the beam starts strong so the dark state begins on the spin).
  void validate(double lambda) const;
  // Gaussian window from the peak to where g has fallen to `fraction` g0.
  static PulseSchedule gaussian_from_peak(double g0, double width, double fraction = 1e-6);
};

struct StirapOptions {
  std::size_t samples = 201;
  double n_m0 = 0.1;
  Eigen::Vector2cd spin_state = Eigen::Vector2cd::Constant(cplx(1.0 / std::sqrt(2.0), 0.0));  // (|-1>, |0>)
  // Rerun with twice the mechanics cutoff and report the fidelity change.
  bool cutoff_check = false;
  quantum::EvolveOptions evolve;
};

struct StirapResult {
  TimeSeries series;  // P_spin, n_a, n_b, theta
  Eigen::MatrixXcd cavity_state;
  // Target c_0 |0> + e^{i phi} c_1 |1> with (c_1, c_0) the initial spin amplitudes.
  double fidelity = 0.0;               // maximized over phi
  double fidelity_unmaximized = 0.0;  // phi = 0
  double optimal_phase = 0.0;
  double max_adiabaticity = 0.0;  // max |d theta/dt| / sqrt(g^2 + lambda^2) over the window
  double final_mixing_angle = 0.0;
  double cutoff_fidelity_change = 0.0;  // |F(2 N_m) - F(N_m)|, when requested
  quantum::InvariantReport invariants;
};

// Resonant transfer (omega_+ = Delta = omega_m required) in the frame rotating
// at omega_m; the unmaximized fidelity refers to that frame. For a gaussian
// schedule, throws ConfigError when the window ends before g drops below
// lambda, since the dark state then never reaches the cavity. A constant
// schedule runs as a control.
StirapResult stirap_transfer(const TripartiteParams& p, const PulseSchedule& schedule,
                             const StirapOptions& options = {});

}  // namespace hybridsim::interface
