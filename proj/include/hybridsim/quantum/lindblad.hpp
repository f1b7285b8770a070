#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <vector>

#include "hybridsim/kernels/kernels.hpp"
#include "hybridsim/kernels/row_sparse.hpp"
#include "hybridsim/quantum/operators.hpp"

namespace hybridsim::quantum {

using Coefficient = std::function<double(double t)>;

struct HamiltonianTerm {
  QOperator op;            // Hermitian, rad/s
  Coefficient coefficient; // empty: constant 1
};

struct CollapseTerm {
  QOperator op;
  double rate = 0.0;  // 1/s
};

// drho/dt = -i[H(t), rho] + sum_k rate_k D[c_k] rho,
// D[c] rho = c rho c^dag - {c^dag c, rho}/2, with H(t) = sum_j f_j(t) H_j.
class LindbladModel {
 public:
  explicit LindbladModel(HilbertLayout layout);

  void add_hamiltonian(QOperator h);
  void add_hamiltonian(QOperator h, Coefficient f);
  // Zero-rate terms are accepted and skipped.
  void add_collapse(QOperator c, double rate);

  const HilbertLayout& layout() const noexcept { return layout_; }
  std::size_t dim() const noexcept { return layout_.total_dim(); }
  const std::vector<HamiltonianTerm>& hamiltonian_terms() const noexcept { return terms_; }
  const std::vector<CollapseTerm>& collapse_terms() const noexcept { return collapses_; }
  bool autonomous() const noexcept;

  QOperator hamiltonian_at(double t) const;

 private:
  void require_layout(const QOperator& op, const char* what) const;

  HilbertLayout layout_;
  std::vector<HamiltonianTerm> terms_;
  std::vector<CollapseTerm> collapses_;
};

// Right-hand side compiled for a row-major state buffer. Relies on rho being
// Hermitian: with H_eff = H - (i/2) sum r c^dag c and Y = H_eff rho,
//   drho = -i Y + i Y^dag + sum r c (c rho)^dag.
class LindbladRhs {
 public:
  explicit LindbladRhs(const LindbladModel& model, const kernels::KernelTable& kernels = kernels::active());

  std::size_t dim() const noexcept { return dim_; }
  void operator()(double t, const cplx* rho, cplx* drho) const;

 private:
  struct Jump {
    kernels::RowSparseMatrix op;
    kernels::DiagonalMatrix rate_adjoint;  // r c^dag, applied from the right
  };

  const kernels::KernelTable* kernels_;
  std::size_t dim_;
  // -2i H_eff(t) on the union sparsity pattern of all Hamiltonian terms:
  // values = static_values_ + sum_k f_k(t) driven_values_[k].
  kernels::RowSparseMatrix generator_;
  std::vector<cplx> static_values_;
  std::vector<std::vector<cplx>> driven_values_;
  std::vector<Coefficient> coefficients_;
  std::vector<Jump> jumps_;
  mutable std::vector<cplx> values_;
  mutable std::vector<cplx> y_, z_;
};

// Textbook dense evaluation, used as the reference for LindbladRhs.
Eigen::MatrixXcd dense_lindblad_rhs(const LindbladModel& model, double t, const Eigen::MatrixXcd& rho);

// Superoperator acting on the row-major vectorization vec(rho)[i*D + j].
Eigen::SparseMatrix<cplx> liouvillian(const LindbladModel& model, double t = 0.0);

}  // namespace hybridsim::quantum
