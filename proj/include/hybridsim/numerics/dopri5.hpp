#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridsim/errors.hpp"
#include "hybridsim/kernels/kernels.hpp"

namespace hybridsim::numerics {

class StepSizeUnderflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0: estimated from the right-hand side
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

using OdeRhs = std::function<void(double t, const double* y, double* dydt)>;

// Returns true when it modified the state (invalidates the FSAL stage).
using PostStepHook = std::function<bool(double t, std::span<double> y)>;

// Embedded Runge-Kutta 5(4) pair of Dormand and Prince with FSAL and
// max-norm error control. The step size carries over between integrate()
// calls so output grids do not restart the controller.
class DormandPrince45 {
 public:
  DormandPrince45(std::size_t dimension, OdeRhs rhs, OdeOptions options,
                  const kernels::KernelTable& kernels = kernels::active());

  // Advances y from t to t_end (t_end > t) and sets t = t_end.
  void integrate(double& t, double t_end, std::span<double> y, const PostStepHook& post_step = {});

  const OdeStats& stats() const noexcept { return stats_; }
  std::size_t dimension() const noexcept { return n_; }

 private:
  double estimate_initial_step(double t, std::span<const double> y, double direction_span);
  void eval(double t, const double* y, double* dydt);

  std::size_t n_;
  OdeRhs rhs_;
  OdeOptions options_;
  const kernels::KernelTable* kernels_;
  OdeStats stats_;
  double h_ = 0.0;
  bool fsal_valid_ = false;
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, stage_, next_, err_;
};

}  // namespace hybridsim::numerics
