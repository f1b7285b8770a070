#include "hybridsim/kernels/row_sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace hybridsim::kernels {

RowSparseMatrix RowSparseMatrix::from_dense(const Eigen::MatrixXcd& dense, double drop_tolerance) {
  RowSparseMatrix m;
  m.rows_ = static_cast<std::size_t>(dense.rows());
  m.cols_ = static_cast<std::size_t>(dense.cols());
  m.row_offsets_.assign(1, 0);
  m.row_offsets_.reserve(m.rows_ + 1);
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index j = 0; j < dense.cols(); ++j) {
      const cplx v = dense(i, j);
      if (std::abs(v) > drop_tolerance) {
        m.columns_.push_back(static_cast<std::uint32_t>(j));
        m.values_.push_back(v);
      }
    }
    m.row_offsets_.push_back(m.values_.size());
  }
  return m;
}

Eigen::MatrixXcd RowSparseMatrix::to_dense() const {
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows_),
                                                  static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(columns_[k])) += values_[k];
    }
  }
  return dense;
}

DiagonalMatrix DiagonalMatrix::from_dense(const Eigen::MatrixXcd& dense, double drop_tolerance) {
  if (dense.rows() != dense.cols()) throw std::invalid_argument("DiagonalMatrix: operator must be square");
  constexpr std::ptrdiff_t kMaxGap = 8;
  DiagonalMatrix m;
  const auto n = static_cast<std::ptrdiff_t>(dense.rows());
  m.dim_ = static_cast<std::size_t>(n);
  for (std::ptrdiff_t s = -(n - 1); s <= n - 1; ++s) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -s);
    const std::ptrdiff_t hi = std::min(n, n - s);
    std::ptrdiff_t run_begin = -1;
    std::ptrdiff_t last = -1;
    auto close = [&] {
      Run r{s, static_cast<std::size_t>(run_begin), static_cast<std::size_t>(last + 1), {}};
      for (std::ptrdiff_t k = run_begin; k <= last; ++k) {
        const cplx v = dense(k, k + s);
        r.values.push_back(std::abs(v) > drop_tolerance ? v : cplx(0.0, 0.0));
      }
      m.runs_.push_back(std::move(r));
    };
    for (std::ptrdiff_t k = lo; k < hi; ++k) {
      if (!(std::abs(dense(k, k + s)) > drop_tolerance)) continue;
      if (run_begin >= 0 && k - last > kMaxGap) {
        close();
        run_begin = -1;
      }
      if (run_begin < 0) run_begin = k;
      last = k;
    }
    if (run_begin >= 0) close();
  }
  return m;
}

void multiply_right(const KernelTable& kernels, const cplx* in, std::size_t rows, const DiagonalMatrix& a,
                    cplx* out) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < rows; ++i) {
    const cplx* in_row = in + i * n;
    cplx* out_row = out + i * n;
    // out[i][k+s] += in[i][k] * A[k][k+s]
    for (const auto& r : a.runs()) {
      kernels.cmul_add(r.end - r.begin, r.values.data(), in_row + r.begin,
                       out_row + static_cast<std::ptrdiff_t>(r.begin) + r.offset);
    }
  }
}

void multiply_rows_with(const KernelTable& kernels, const RowSparseMatrix& a, const cplx* values, const cplx* in,
                        std::size_t width, cplx* out, bool accumulate) {
  constexpr std::size_t kChunk = 16;
  const auto& offsets = a.row_offsets();
  const auto& cols = a.columns();
  const cplx* srcs[kChunk];
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx* out_row = out + i * width;
    std::size_t k = offsets[i];
    const std::size_t end = offsets[i + 1];
    if (k == end && !accumulate) std::fill(out_row, out_row + width, cplx(0.0, 0.0));
    bool acc = accumulate;
    while (k < end) {
      const std::size_t count = std::min(kChunk, end - k);
      for (std::size_t p = 0; p < count; ++p) srcs[p] = in + static_cast<std::size_t>(cols[k + p]) * width;
      kernels.row_combination(width, count, values + k, srcs, out_row, acc);
      acc = true;
      k += count;
    }
  }
}

void multiply_rows(const KernelTable& kernels, const RowSparseMatrix& a, cplx scale, const cplx* in,
                   std::size_t width, cplx* out, bool accumulate) {
  if (scale == cplx(1.0, 0.0)) {
    multiply_rows_with(kernels, a, a.values().data(), in, width, out, accumulate);
    return;
  }
  std::vector<cplx> scaled(a.values());
  for (auto& v : scaled) v *= scale;
  multiply_rows_with(kernels, a, scaled.data(), in, width, out, accumulate);
}

void conjugate_transpose(std::size_t n, const cplx* in, cplx* out) {
  constexpr std::size_t kBlock = 32;
  for (std::size_t ib = 0; ib < n; ib += kBlock) {
    const std::size_t ie = std::min(n, ib + kBlock);
    for (std::size_t jb = 0; jb < n; jb += kBlock) {
      const std::size_t je = std::min(n, jb + kBlock);
      for (std::size_t i = ib; i < ie; ++i) {
        for (std::size_t j = jb; j < je; ++j) out[j * n + i] = std::conj(in[i * n + j]);
      }
    }
  }
}

}  // namespace hybridsim::kernels
