#include "hybridsim/quantum/lindblad.hpp"

#include <stdexcept>

namespace hybridsim::quantum {

using kernels::RowSparseMatrix;

LindbladModel::LindbladModel(HilbertLayout layout) : layout_(std::move(layout)) {}

void LindbladModel::require_layout(const QOperator& op, const char* what) const {
  if (!(op.layout() == layout_)) {
    throw std::invalid_argument(std::string("LindbladModel: ") + what + " layout " + op.layout().describe() +
                                " does not match " + layout_.describe());
  }
}

void LindbladModel::add_hamiltonian(QOperator h) { add_hamiltonian(std::move(h), {}); }

void LindbladModel::add_hamiltonian(QOperator h, Coefficient f) {
  require_layout(h, "Hamiltonian term");
  if (!h.is_hermitian(1e-9 * std::max(1.0, h.matrix().cwiseAbs().maxCoeff()))) {
    throw std::invalid_argument("LindbladModel: Hamiltonian term is not Hermitian");
  }
  terms_.push_back({std::move(h), std::move(f)});
}

void LindbladModel::add_collapse(QOperator c, double rate) {
  require_layout(c, "collapse operator");
  if (!(rate >= 0.0)) throw std::invalid_argument("LindbladModel: collapse rate must be non-negative");
  if (rate == 0.0) return;
  collapses_.push_back({std::move(c), rate});
}

bool LindbladModel::autonomous() const noexcept {
  for (const auto& term : terms_) {
    if (term.coefficient) return false;
  }
  return true;
}

QOperator LindbladModel::hamiltonian_at(double t) const {
  QOperator h = zero(layout_);
  for (const auto& term : terms_) {
    const double f = term.coefficient ? term.coefficient(t) : 1.0;
    h += f * term.op;
  }
  return h;
}

namespace {

Eigen::MatrixXcd static_effective_hamiltonian(const LindbladModel& model) {
  const auto n = static_cast<Eigen::Index>(model.dim());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& term : model.hamiltonian_terms()) {
    if (!term.coefficient) h += term.op.matrix();
  }
  for (const auto& c : model.collapse_terms()) {
    h -= cplx(0.0, 0.5 * c.rate) * (c.op.matrix().adjoint() * c.op.matrix());
  }
  return h;
}

}  // namespace

namespace {

std::vector<cplx> values_on_pattern(const RowSparseMatrix& pattern, const Eigen::MatrixXcd& m) {
  std::vector<cplx> v;
  v.reserve(pattern.nonzeros());
  const auto& offsets = pattern.row_offsets();
  for (std::size_t i = 0; i < pattern.rows(); ++i) {
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      v.push_back(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(pattern.columns()[k])));
    }
  }
  return v;
}

}  // namespace

LindbladRhs::LindbladRhs(const LindbladModel& model, const kernels::KernelTable& kernels)
    : kernels_(&kernels), dim_(model.dim()) {
  const cplx minus_2i(0.0, -2.0);
  const Eigen::MatrixXcd h_static = minus_2i * static_effective_hamiltonian(model);
  std::vector<Eigen::MatrixXcd> driven;
  Eigen::MatrixXd support = h_static.cwiseAbs();
  for (const auto& term : model.hamiltonian_terms()) {
    if (!term.coefficient) continue;
    driven.push_back(minus_2i * term.op.matrix());
    coefficients_.push_back(term.coefficient);
    support += driven.back().cwiseAbs();
  }
  generator_ = RowSparseMatrix::from_dense(support.cast<cplx>());
  static_values_ = values_on_pattern(generator_, h_static);
  for (const auto& m : driven) driven_values_.push_back(values_on_pattern(generator_, m));
  values_ = static_values_;
  for (const auto& c : model.collapse_terms()) {
    jumps_.push_back({RowSparseMatrix::from_dense(c.op.matrix()),
                      kernels::DiagonalMatrix::from_dense(c.rate * c.op.matrix().adjoint())});
  }
  y_.resize(dim_ * dim_);
  z_.resize(dim_ * dim_);
}

// drho = herm(M), M = -2i H_eff rho + sum_j r_j c_j rho c_j^dag.
// Taking the Hermitian part once at the end keeps the derivative exactly
// Hermitian, so rounding cannot build up an anti-Hermitian drift.
void LindbladRhs::operator()(double t, const cplx* rho, cplx* drho) const {
  const std::size_t n = dim_;
  const cplx* values = static_values_.data();
  if (!coefficients_.empty()) {
    std::copy(static_values_.begin(), static_values_.end(), values_.begin());
    for (std::size_t k = 0; k < coefficients_.size(); ++k) {
      const double f = coefficients_[k](t);
      if (f == 0.0) continue;
      const auto& dv = driven_values_[k];
      for (std::size_t p = 0; p < dv.size(); ++p) values_[p] += f * dv[p];
    }
    values = values_.data();
  }
  kernels::multiply_rows_with(*kernels_, generator_, values, rho, n, y_.data(), false);
  for (const auto& j : jumps_) {
    kernels::multiply_rows(*kernels_, j.op, cplx(1.0, 0.0), rho, n, z_.data(), false);
    kernels::multiply_right(*kernels_, z_.data(), n, j.rate_adjoint, y_.data());
  }
  kernels_->hermitian_part(n, y_.data(), drho);
}

Eigen::MatrixXcd dense_lindblad_rhs(const LindbladModel& model, double t, const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd h = model.hamiltonian_at(t).matrix();
  Eigen::MatrixXcd out = cplx(0.0, -1.0) * (h * rho - rho * h);
  for (const auto& c : model.collapse_terms()) {
    const Eigen::MatrixXcd& m = c.op.matrix();
    const Eigen::MatrixXcd mdm = m.adjoint() * m;
    out += c.rate * (m * rho * m.adjoint() - 0.5 * mdm * rho - 0.5 * rho * mdm);
  }
  return out;
}

namespace {

// Adds s * (A rho B) to the row-major superoperator:
// L[(i,j),(k,l)] += s A_ik B_lj.
void add_sandwich(std::vector<Eigen::Triplet<cplx>>& out, std::size_t n, const RowSparseMatrix& a,
                  const RowSparseMatrix& b, cplx s) {
  const auto& ao = a.row_offsets();
  const auto& bo = b.row_offsets();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = ao[i]; p < ao[i + 1]; ++p) {
      const std::size_t k = a.columns()[p];
      const cplx aik = s * a.values()[p];
      for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t q = bo[l]; q < bo[l + 1]; ++q) {
          const std::size_t j = b.columns()[q];
          out.emplace_back(static_cast<int>(i * n + j), static_cast<int>(k * n + l), aik * b.values()[q]);
        }
      }
    }
  }
}

}  // namespace

Eigen::SparseMatrix<cplx> liouvillian(const LindbladModel& model, double t) {
  const std::size_t n = model.dim();
  const auto nn = static_cast<Eigen::Index>(n * n);
  Eigen::MatrixXcd h_eff = model.hamiltonian_at(t).matrix();
  for (const auto& c : model.collapse_terms()) {
    h_eff -= cplx(0.0, 0.5 * c.rate) * (c.op.matrix().adjoint() * c.op.matrix());
  }
  const auto id = RowSparseMatrix::from_dense(Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n),
                                                                        static_cast<Eigen::Index>(n)));
  std::vector<Eigen::Triplet<cplx>> triplets;
  add_sandwich(triplets, n, RowSparseMatrix::from_dense(h_eff), id, cplx(0.0, -1.0));
  add_sandwich(triplets, n, id, RowSparseMatrix::from_dense(h_eff.adjoint()), cplx(0.0, 1.0));
  for (const auto& c : model.collapse_terms()) {
    add_sandwich(triplets, n, RowSparseMatrix::from_dense(c.op.matrix()),
                 RowSparseMatrix::from_dense(c.op.matrix().adjoint()), cplx(c.rate, 0.0));
  }
  Eigen::SparseMatrix<cplx> l(nn, nn);
  l.setFromTriplets(triplets.begin(), triplets.end());
  l.prune([](Eigen::Index, Eigen::Index, const cplx& v) { return v != cplx(0.0, 0.0); });
  return l;
}

}  // namespace hybridsim::quantum
