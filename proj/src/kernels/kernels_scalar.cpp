#include "hybridsim/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace hybridsim::kernels::scalar {

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void caxpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = cplx(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
  }
}

double scaled_max_error(std::size_t n, const double* err, const double* a, const double* b,
                        double atol, double rtol) {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
    worst = std::max(worst, std::abs(err[i]) / scale);
  }
  return worst;
}

void row_combination(std::size_t n, std::size_t count, const cplx* coeffs, const cplx* const* rows, cplx* out,
                     bool accumulate) {
  if (!accumulate) std::fill(out, out + n, cplx(0.0, 0.0));
  for (std::size_t p = 0; p < count; ++p) caxpy(n, coeffs[p], rows[p], out);
}

void cmul_add(std::size_t n, const cplx* w, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) {
    const double wr = w[i].real();
    const double wi = w[i].imag();
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = cplx(y[i].real() + (wr * xr - wi * xi), y[i].imag() + (wr * xi + wi * xr));
  }
}

void linear_combination(std::size_t n, const double* base, std::size_t count, const double* coeffs,
                        const double* const* srcs, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = base ? base[i] : 0.0;
    for (std::size_t p = 0; p < count; ++p) acc += coeffs[p] * srcs[p][i];
    out[i] = acc;
  }
}

void hermitian_part(std::size_t n, const cplx* in, cplx* out) {
  constexpr std::size_t kBlock = 16;
  for (std::size_t ib = 0; ib < n; ib += kBlock) {
    const std::size_t ie = std::min(n, ib + kBlock);
    for (std::size_t jb = ib; jb < n; jb += kBlock) {
      const std::size_t je = std::min(n, jb + kBlock);
      for (std::size_t i = ib; i < ie; ++i) {
        for (std::size_t j = std::max(jb, i); j < je; ++j) {
          const cplx v = 0.5 * (in[i * n + j] + std::conj(in[j * n + i]));
          out[i * n + j] = v;
          out[j * n + i] = std::conj(v);
        }
      }
    }
  }
}

}  // namespace hybridsim::kernels::scalar
