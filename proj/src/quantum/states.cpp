#include "hybridsim/quantum/states.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hybridsim/errors.hpp"

namespace hybridsim::quantum {

namespace {

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
  Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

void require_layout(const DensityMatrix& rho, const QOperator& a) {
  if (!(rho.layout() == a.layout())) {
    throw std::invalid_argument("layout mismatch " + rho.layout().describe() + " vs " + a.layout().describe());
  }
}

}  // namespace

InvariantStats measure_invariants(const Eigen::MatrixXcd& rho) {
  InvariantStats s;
  s.trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
  s.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  s.min_eigenvalue = es.eigenvalues().minCoeff();
  return s;
}

DensityMatrix::DensityMatrix(QOperator op, const InvariantTolerances& tol) : op_(std::move(op)) {
  const auto s = measure_invariants(op_.matrix());
  if (!s.within(tol)) {
    std::ostringstream os;
    os << "DensityMatrix invariants violated: |Tr-1|=" << s.trace_error << " herm=" << s.hermiticity_error
       << " min_eig=" << s.min_eigenvalue;
    throw InvariantViolation(os.str());
  }
}

DensityMatrix DensityMatrix::from_pure(const HilbertLayout& layout, const Eigen::VectorXcd& psi) {
  if (psi.size() != static_cast<Eigen::Index>(layout.total_dim())) {
    throw std::invalid_argument("from_pure: state vector size does not match layout");
  }
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("from_pure: zero state vector");
  Eigen::VectorXcd v = psi / norm;
  return DensityMatrix(QOperator(layout, v * v.adjoint()));
}

Eigen::VectorXd thermal_populations(std::size_t dimension, double n_bar) {
  if (!(n_bar >= 0.0)) throw std::invalid_argument("thermal_populations: negative occupation");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension));
  const double ratio = n_bar / (1.0 + n_bar);
  double w = 1.0;
  for (std::size_t n = 0; n < dimension; ++n) {
    p[static_cast<Eigen::Index>(n)] = w;
    w *= ratio;
  }
  return p / p.sum();
}

Eigen::MatrixXcd basis_projector(std::size_t dimension, std::size_t level) {
  if (level >= dimension) throw std::out_of_range("basis_projector: level outside truncation");
  const auto n = static_cast<Eigen::Index>(dimension);
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  p(static_cast<Eigen::Index>(level), static_cast<Eigen::Index>(level)) = 1.0;
  return p;
}

DensityMatrix product_state(const HilbertLayout& layout, const std::map<std::string, Eigen::MatrixXcd>& locals) {
  for (const auto& [label, m] : locals) layout.index_of(label);
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Identity(1, 1);
  for (const auto& s : layout.subsystems()) {
    auto it = locals.find(s.label);
    Eigen::MatrixXcd factor = it != locals.end() ? it->second : basis_projector(s.dimension, 0);
    const auto d = static_cast<Eigen::Index>(s.dimension);
    if (factor.rows() != d || factor.cols() != d) {
      throw std::invalid_argument("product_state: local state for '" + s.label + "' has wrong dimension");
    }
    Eigen::MatrixXcd next = Eigen::kroneckerProduct(full, factor);
    full = std::move(next);
  }
  return DensityMatrix(QOperator(layout, std::move(full)));
}

DensityMatrix thermal_state(const HilbertLayout& layout, std::string_view label, double n_bar) {
  if (!(n_bar >= 0.0)) throw std::invalid_argument("thermal_state: negative occupation");
  const auto p = thermal_populations(layout.dimension(label), n_bar);
  Eigen::MatrixXcd local = p.cast<cplx>().asDiagonal();
  return product_state(layout, {{std::string(label), local}});
}

cplx expectation(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& a) {
  // Tr(rho A) = sum_ij rho_ij A_ji
  return rho.cwiseProduct(a.transpose()).sum();
}

cplx expectation(const DensityMatrix& rho, const QOperator& a) {
  require_layout(rho, a);
  return expectation(rho.matrix(), a.matrix());
}

Eigen::MatrixXcd partial_trace(const HilbertLayout& layout, const Eigen::MatrixXcd& rho,
                               const std::vector<std::string>& keep) {
  const auto reduced_layout = layout.restricted(keep);
  std::vector<bool> kept(layout.size(), false);
  for (const auto& label : keep) kept[layout.index_of(label)] = true;

  const std::size_t n = layout.total_dim();
  std::vector<std::size_t> kept_index(n), traced_index(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto levels = layout.unravel(i);
    std::size_t k = 0, r = 0;
    for (std::size_t s = 0; s < layout.size(); ++s) {
      const std::size_t d = layout.subsystems()[s].dimension;
      if (kept[s]) k = k * d + levels[s];
      else r = r * d + levels[s];
    }
    kept_index[i] = k;
    traced_index[i] = r;
  }
  const auto m = static_cast<Eigen::Index>(reduced_layout.total_dim());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (traced_index[i] != traced_index[j]) continue;
      out(static_cast<Eigen::Index>(kept_index[i]), static_cast<Eigen::Index>(kept_index[j])) +=
          rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  return DensityMatrix(QOperator(rho.layout().restricted(keep), partial_trace(rho.layout(), rho.matrix(), keep)));
}

double fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  const Eigen::MatrixXcd s = hermitian_sqrt(rho);
  const Eigen::MatrixXcd inner = s * sigma * s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double root_sum = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (!(rho.layout() == sigma.layout())) throw std::invalid_argument("fidelity: layout mismatch");
  return fidelity(rho.matrix(), sigma.matrix());
}

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  const Eigen::MatrixXcd d = rho - sigma;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace hybridsim::quantum
