#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

#include "hybridsim/quantum/operators.hpp"

namespace hybridsim::quantum {

struct InvariantTolerances {
  double trace = 1e-8;
  double hermiticity = 1e-10;
  double min_eigenvalue = -1e-7;
};

struct InvariantStats {
  double trace_error = 0.0;        // |Tr rho - 1|
  double hermiticity_error = 0.0;  // max |rho - rho^dagger|
  double min_eigenvalue = 0.0;

  bool within(const InvariantTolerances& tol) const {
    return trace_error < tol.trace && hermiticity_error < tol.hermiticity && min_eigenvalue > tol.min_eigenvalue;
  }
};

InvariantStats measure_invariants(const Eigen::MatrixXcd& rho);

class DensityMatrix {
 public:
  // Validates against the tolerances; throws InvariantViolation.
  explicit DensityMatrix(QOperator op, const InvariantTolerances& tol = {});

  static DensityMatrix from_pure(const HilbertLayout& layout, const Eigen::VectorXcd& psi);

  const QOperator& op() const noexcept { return op_; }
  const HilbertLayout& layout() const noexcept { return op_.layout(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return op_.matrix(); }
  std::size_t dim() const noexcept { return op_.dim(); }

 private:
  QOperator op_;
};

// Single-mode Gibbs populations p_n ~ (n/(1+n))^n, renormalized on the
// truncated space.
Eigen::VectorXd thermal_populations(std::size_t dimension, double n_bar);
Eigen::MatrixXcd basis_projector(std::size_t dimension, std::size_t level);

// Thermal state on `label`; every other subsystem sits in its level 0.
DensityMatrix thermal_state(const HilbertLayout& layout, std::string_view label, double n_bar);

// Tensor product of local density matrices; subsystems missing from the map
// default to level 0.
DensityMatrix product_state(const HilbertLayout& layout, const std::map<std::string, Eigen::MatrixXcd>& locals);

cplx expectation(const DensityMatrix& rho, const QOperator& a);
cplx expectation(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& a);

Eigen::MatrixXcd partial_trace(const HilbertLayout& layout, const Eigen::MatrixXcd& rho,
                               const std::vector<std::string>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);

// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

}  // namespace hybridsim::quantum
