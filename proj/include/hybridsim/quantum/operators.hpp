#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string_view>

#include "hybridsim/quantum/layout.hpp"

namespace hybridsim::quantum {

using cplx = std::complex<double>;

class QOperator {
 public:
  QOperator() = default;
  QOperator(HilbertLayout layout, Eigen::MatrixXcd matrix);

  const HilbertLayout& layout() const noexcept { return layout_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return layout_.total_dim(); }

  QOperator adjoint() const;
  double hermiticity_error() const;  // max |M - M^dagger|
  bool is_hermitian(double tolerance = 1e-12) const { return hermiticity_error() < tolerance; }

  QOperator& operator+=(const QOperator& other);
  QOperator& operator-=(const QOperator& other);
  QOperator& operator*=(cplx scale);

 private:
  void require_same_layout(const QOperator& other) const;

  HilbertLayout layout_;
  Eigen::MatrixXcd matrix_;
};

QOperator operator+(QOperator a, const QOperator& b);
QOperator operator-(QOperator a, const QOperator& b);
QOperator operator*(const QOperator& a, const QOperator& b);
QOperator operator*(cplx s, QOperator a);
QOperator operator*(double s, QOperator a);
QOperator commutator(const QOperator& a, const QOperator& b);

QOperator identity(const HilbertLayout& layout);
QOperator zero(const HilbertLayout& layout);

// Places a local matrix on the labelled subsystem, identity elsewhere.
QOperator embed(const HilbertLayout& layout, std::string_view label, const Eigen::MatrixXcd& local);

Eigen::MatrixXcd ladder_matrix(std::size_t dimension);  // truncated annihilator
QOperator destroy(const HilbertLayout& layout, std::string_view label);
QOperator create(const HilbertLayout& layout, std::string_view label);
QOperator number(const HilbertLayout& layout, std::string_view label);

// Two-level basis order is (|-1>, |0>): sigma_z = diag(1, -1),
// sigma_plus = |-1><0|.
struct SpinOperators {
  QOperator sigma_z;
  QOperator sigma_plus;
  QOperator sigma_minus;
};
SpinOperators spin_ops(const HilbertLayout& layout, std::string_view label);

}  // namespace hybridsim::quantum
