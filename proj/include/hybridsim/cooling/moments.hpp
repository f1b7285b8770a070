#pragma once

#include <array>
#include <complex>
#include <vector>

#include "hybridsim/time_series.hpp"

namespace hybridsim::cooling {

using cplx = std::complex<double>;

// Second-order moments of the cavity mode a and the beam mode b, in the frame
// rotating at the drive (a) and lab frame for b as in the linearized model
// H = Delta a^dag a + omega_m b^dag b + g (a + a^dag)(b + b^dag).
struct MomentState {
  double n_a = 0.0;  // <a^dag a>
  double n_b = 0.0;  // <b^dag b>
  cplx c_ab{};       // <a^dag b>
  cplx s_ab{};       // <a b>
  cplx s_aa{};       // <a^2>
  cplx s_bb{};       // <b^2>

  // Layout: (n_a, n_b, Re c_ab, Re s_ab, Re s_aa, Re s_bb,
  //          Im n_a, Im n_b, Im c_ab, Im s_ab, Im s_aa, Im s_bb).
  std::array<double, 12> to_real() const;
  static MomentState from_real(const double* x);

  // |c_ab|^2 - n_a n_b; positive values beyond rounding flag a
  // non-physical state.
  double cauchy_schwarz_excess() const { return std::norm(c_ab) - n_a * n_b; }
};

struct CoolingParams {
  double g = 0.0;        // rad/s
  double omega_m = 0.0;  // rad/s
  double delta = 0.0;    // rad/s; omega_p - omega_c
  double kappa = 0.0;    // 1/s
  double gamma_m = 0.0;  // 1/s
  double n_th = 0.0;

  void validate() const;
};

// Time derivative of the moments (12 real components, imaginary parts of
// n_a and n_b included so the map stays linear over the reals).
void moment_rhs(const double* x, const CoolingParams& p, double* dx);
MomentState moment_rhs(const MomentState& m, const CoolingParams& p);

struct MomentOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
};

struct MomentTrajectory {
  TimeSeries series;  // n_a, n_b
  MomentState final_state;
  double min_occupation = 0.0;
  double max_cauchy_schwarz_excess = 0.0;
};

MomentTrajectory evolve_moments(const CoolingParams& p, const MomentState& initial, const std::vector<double>& times,
                                const MomentOptions& options = {});

// Solves rhs = 0 as a real 12x12 linear system. Throws NumericalError when
// the drift matrix is singular or has an eigenvalue with non-negative real
// part (no attracting steady state).
MomentState steady_moments(const CoolingParams& p);

// Real 12x12 drift matrix A and source b of dx/dt = A x + b.
void moment_system(const CoolingParams& p, double (&a)[12][12], double (&b)[12]);

}  // namespace hybridsim::cooling
