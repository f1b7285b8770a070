#include "hybridsim/quantum/operators.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <stdexcept>

namespace hybridsim::quantum {

QOperator::QOperator(HilbertLayout layout, Eigen::MatrixXcd matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(layout_.total_dim());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw std::invalid_argument("QOperator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                                std::to_string(matrix_.cols()) + " but layout " + layout_.describe() +
                                " needs " + std::to_string(n));
  }
}

QOperator QOperator::adjoint() const { return QOperator(layout_, matrix_.adjoint()); }

double QOperator::hermiticity_error() const {
  if (matrix_.size() == 0) return 0.0;
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

void QOperator::require_same_layout(const QOperator& other) const {
  if (!(layout_ == other.layout_)) {
    throw std::invalid_argument("QOperator: layout mismatch " + layout_.describe() + " vs " + other.layout_.describe());
  }
}

QOperator& QOperator::operator+=(const QOperator& other) {
  require_same_layout(other);
  matrix_ += other.matrix_;
  return *this;
}

QOperator& QOperator::operator-=(const QOperator& other) {
  require_same_layout(other);
  matrix_ -= other.matrix_;
  return *this;
}

QOperator& QOperator::operator*=(cplx scale) {
  matrix_ *= scale;
  return *this;
}

QOperator operator+(QOperator a, const QOperator& b) { return a += b; }
QOperator operator-(QOperator a, const QOperator& b) { return a -= b; }
QOperator operator*(cplx s, QOperator a) { return a *= s; }
QOperator operator*(double s, QOperator a) { return a *= cplx(s, 0.0); }

QOperator operator*(const QOperator& a, const QOperator& b) {
  if (!(a.layout() == b.layout())) {
    throw std::invalid_argument("QOperator product: layout mismatch " + a.layout().describe() + " vs " +
                                b.layout().describe());
  }
  return QOperator(a.layout(), a.matrix() * b.matrix());
}

QOperator commutator(const QOperator& a, const QOperator& b) { return a * b - b * a; }

QOperator identity(const HilbertLayout& layout) {
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  return QOperator(layout, Eigen::MatrixXcd::Identity(n, n));
}

QOperator zero(const HilbertLayout& layout) {
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  return QOperator(layout, Eigen::MatrixXcd::Zero(n, n));
}

QOperator embed(const HilbertLayout& layout, std::string_view label, const Eigen::MatrixXcd& local) {
  const std::size_t target = layout.index_of(label);
  const auto& subs = layout.subsystems();
  const auto d = static_cast<Eigen::Index>(subs[target].dimension);
  if (local.rows() != d || local.cols() != d) {
    throw std::invalid_argument("embed: local operator does not match subsystem '" + std::string(label) + "'");
  }
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const auto di = static_cast<Eigen::Index>(subs[i].dimension);
    Eigen::MatrixXcd factor = (i == target) ? local : Eigen::MatrixXcd::Identity(di, di);
    Eigen::MatrixXcd next = Eigen::kroneckerProduct(full, factor);
    full = std::move(next);
  }
  return QOperator(layout, std::move(full));
}

Eigen::MatrixXcd ladder_matrix(std::size_t dimension) {
  const auto n = static_cast<Eigen::Index>(dimension);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

QOperator destroy(const HilbertLayout& layout, std::string_view label) {
  return embed(layout, label, ladder_matrix(layout.dimension(label)));
}

QOperator create(const HilbertLayout& layout, std::string_view label) { return destroy(layout, label).adjoint(); }

QOperator number(const HilbertLayout& layout, std::string_view label) {
  const auto n = static_cast<Eigen::Index>(layout.dimension(label));
  Eigen::MatrixXcd num = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) num(k, k) = static_cast<double>(k);
  return embed(layout, label, num);
}

SpinOperators spin_ops(const HilbertLayout& layout, std::string_view label) {
  if (layout.dimension(label) != 2) {
    throw std::invalid_argument("spin_ops: subsystem '" + std::string(label) + "' must have dimension 2");
  }
  Eigen::MatrixXcd sz(2, 2), sp(2, 2);
  sz << 1.0, 0.0, 0.0, -1.0;
  sp << 0.0, 1.0, 0.0, 0.0;
  auto plus = embed(layout, label, sp);
  auto minus = plus.adjoint();
  return {embed(layout, label, sz), std::move(plus), std::move(minus)};
}

}  // namespace hybridsim::quantum
