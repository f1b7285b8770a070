#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hybridsim/kernels/kernels.hpp"

namespace hybridsim::kernels {

// Compressed-row copy of a dense operator. Ladder and spin operators have at
// most a few entries per row, so products against a dense row-major state cost
// O(nnz * n) instead of O(n^3).
class RowSparseMatrix {
 public:
  RowSparseMatrix() = default;

  // Entries with |value| <= drop_tolerance are skipped.
  static RowSparseMatrix from_dense(const Eigen::MatrixXcd& dense, double drop_tolerance = 0.0);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  const std::vector<std::size_t>& row_offsets() const noexcept { return row_offsets_; }
  const std::vector<std::uint32_t>& columns() const noexcept { return columns_; }
  const std::vector<cplx>& values() const noexcept { return values_; }

  Eigen::MatrixXcd to_dense() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::uint32_t> columns_;
  std::vector<cplx> values_;
};

// Square operator stored as runs along its diagonals: a run with offset s
// holds A[k][k+s] for k in [begin, end). Used for products from the right,
// which become contiguous elementwise updates of each row. Ladder operators
// in a product basis have one run per occupied diagonal; short gaps of zeros
// are kept inside a run rather than splitting it.
class DiagonalMatrix {
 public:
  struct Run {
    std::ptrdiff_t offset;
    std::size_t begin;
    std::size_t end;
    std::vector<cplx> values;  // values[k - begin] = A[k][k+offset]
  };

  DiagonalMatrix() = default;
  static DiagonalMatrix from_dense(const Eigen::MatrixXcd& dense, double drop_tolerance = 0.0);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Run>& runs() const noexcept { return runs_; }

 private:
  std::size_t dim_ = 0;
  std::vector<Run> runs_;
};

// out += in * A for row-major `in` and `out` with A.dim() columns and `rows` rows.
void multiply_right(const KernelTable& kernels, const cplx* in, std::size_t rows, const DiagonalMatrix& a,
                    cplx* out);

// out = scale * A * in   (accumulate == false)
// out += scale * A * in  (accumulate == true)
// `in` and `out` are row-major with `width` columns; A.cols() rows of `in`.
void multiply_rows(const KernelTable& kernels, const RowSparseMatrix& a, cplx scale, const cplx* in,
                   std::size_t width, cplx* out, bool accumulate);

// Same as multiply_rows with the stored values replaced by `values`, which
// must follow A's sparsity pattern (length A.nonzeros()).
void multiply_rows_with(const KernelTable& kernels, const RowSparseMatrix& a, const cplx* values, const cplx* in,
                        std::size_t width, cplx* out, bool accumulate);

// out = in^dagger for a square row-major n x n block.
void conjugate_transpose(std::size_t n, const cplx* in, cplx* out);

}  // namespace hybridsim::kernels
