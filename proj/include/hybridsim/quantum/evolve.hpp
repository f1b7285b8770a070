#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hybridsim/kernels/kernels.hpp"
#include "hybridsim/numerics/dopri5.hpp"
#include "hybridsim/quantum/lindblad.hpp"
#include "hybridsim/quantum/states.hpp"
#include "hybridsim/time_series.hpp"

namespace hybridsim::quantum {

struct Observable {
  std::string name;
  std::function<double(const Eigen::MatrixXcd& rho)> eval;
};

// Re Tr(rho A), or Im Tr(rho A) when `imaginary_part` is set.
Observable observe(std::string name, const QOperator& op, bool imaginary_part = false);

struct EvolveOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  // Trace is rescaled to one after any step where it drifted further.
  double renormalize_threshold = 1e-10;
  InvariantTolerances tolerances{1e-8, 1e-9, -1e-7};
  bool check_positivity = true;  // eigen-decomposition at every output time
  const kernels::KernelTable* kernels = nullptr;  // nullptr: kernels::active()
};

struct InvariantReport {
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  std::size_t renormalizations = 0;
  std::size_t checks = 0;
  numerics::OdeStats ode;

  bool within(const InvariantTolerances& tol) const {
    return max_trace_error < tol.trace && max_hermiticity_error < tol.hermiticity &&
           min_eigenvalue > tol.min_eigenvalue;
  }
};

struct EvolveResult {
  TimeSeries series;
  DensityMatrix final_state;
  InvariantReport invariants;
};

using OutputHook = std::function<void(double t, const Eigen::MatrixXcd& rho)>;

// Integrates from times.front() (where rho0 is taken) through every later
// time, recording observables at each. Throws numerics::StepSizeUnderflow or
// InvariantViolation.
EvolveResult evolve(const LindbladModel& model, const DensityMatrix& rho0, const std::vector<double>& times,
                    const std::vector<Observable>& observables, const EvolveOptions& options = {},
                    const OutputHook& on_output = {});

struct SteadyStateOptions {
  // Bound on max|L rho| relative to max|L| (the generator's own scale).
  double residual_tolerance = 1e-10;
  // Dense rank check of the Liouvillian for D^2 up to this size.
  std::size_t dense_check_limit = 400;
  bool allow_integration_fallback = true;
};

struct SteadyStateResult {
  DensityMatrix state;
  double residual = 0.0;           // max|L rho|, rad/s
  double relative_residual = 0.0;  // residual / max|L|
  std::string method;              // "null-space" or "integration"
};

SteadyStateResult steady_state(const LindbladModel& model, const SteadyStateOptions& options = {});

}  // namespace hybridsim::quantum
