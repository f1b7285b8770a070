// Compiled with -mavx2 -mfma; only reached through the dispatch table after a
// CPUID check.
#include "hybridsim/kernels/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace hybridsim::kernels::avx2 {

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d y0 = _mm256_loadu_pd(y + i);
    __m256d y1 = _mm256_loadu_pd(y + i + 4);
    y0 = _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), y0);
    y1 = _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i + 4), y1);
    _mm256_storeu_pd(y + i, y0);
    _mm256_storeu_pd(y + i + 4, y1);
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// Interleaved (re, im) pairs, two complex numbers per register:
//   y += ar * (xr, xi) + (-ai, ai) * (xi, xr)
void caxpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  const __m256d vr = _mm256_set1_pd(ar);
  const __m256d vi = _mm256_setr_pd(-ai, ai, -ai, ai);
  auto* yd = reinterpret_cast<double*>(y);
  const auto* xd = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d x1 = _mm256_loadu_pd(xd + 2 * i + 4);
    __m256d y0 = _mm256_loadu_pd(yd + 2 * i);
    __m256d y1 = _mm256_loadu_pd(yd + 2 * i + 4);
    y0 = _mm256_fmadd_pd(vr, x0, y0);
    y1 = _mm256_fmadd_pd(vr, x1, y1);
    y0 = _mm256_fmadd_pd(vi, _mm256_permute_pd(x0, 0b0101), y0);
    y1 = _mm256_fmadd_pd(vi, _mm256_permute_pd(x1, 0b0101), y1);
    _mm256_storeu_pd(yd + 2 * i, y0);
    _mm256_storeu_pd(yd + 2 * i + 4, y1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
    __m256d y0 = _mm256_loadu_pd(yd + 2 * i);
    y0 = _mm256_fmadd_pd(vr, x0, y0);
    y0 = _mm256_fmadd_pd(vi, _mm256_permute_pd(x0, 0b0101), y0);
    _mm256_storeu_pd(yd + 2 * i, y0);
  }
  for (; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = cplx(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
  }
}

double scaled_max_error(std::size_t n, const double* err, const double* a, const double* b,
                        double atol, double rtol) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d vatol = _mm256_set1_pd(atol);
  const __m256d vrtol = _mm256_set1_pd(rtol);
  __m256d worst = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ea = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(err + i));
    const __m256d aa = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(a + i));
    const __m256d ba = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(b + i));
    const __m256d scale = _mm256_fmadd_pd(vrtol, _mm256_max_pd(aa, ba), vatol);
    worst = _mm256_max_pd(worst, _mm256_div_pd(ea, scale));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, worst);
  double result = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) {
    const double scale = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
    result = std::max(result, std::abs(err[i]) / scale);
  }
  return result;
}

// Four complex outputs stay in registers while all source rows are summed in.
void row_combination(std::size_t n, std::size_t count, const cplx* coeffs, const cplx* const* rows, cplx* out,
                     bool accumulate) {
  constexpr std::size_t kMaxTerms = 32;
  if (count > kMaxTerms) {
    if (!accumulate) std::fill(out, out + n, cplx(0.0, 0.0));
    for (std::size_t p = 0; p < count; ++p) caxpy(n, coeffs[p], rows[p], out);
    return;
  }
  __m256d vr[kMaxTerms];
  __m256d vi[kMaxTerms];
  for (std::size_t p = 0; p < count; ++p) {
    vr[p] = _mm256_set1_pd(coeffs[p].real());
    vi[p] = _mm256_setr_pd(-coeffs[p].imag(), coeffs[p].imag(), -coeffs[p].imag(), coeffs[p].imag());
  }
  auto* od = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d y0 = accumulate ? _mm256_loadu_pd(od + 2 * i) : _mm256_setzero_pd();
    __m256d y1 = accumulate ? _mm256_loadu_pd(od + 2 * i + 4) : _mm256_setzero_pd();
    for (std::size_t p = 0; p < count; ++p) {
      const auto* xd = reinterpret_cast<const double*>(rows[p]) + 2 * i;
      const __m256d x0 = _mm256_loadu_pd(xd);
      const __m256d x1 = _mm256_loadu_pd(xd + 4);
      y0 = _mm256_fmadd_pd(vr[p], x0, y0);
      y1 = _mm256_fmadd_pd(vr[p], x1, y1);
      y0 = _mm256_fmadd_pd(vi[p], _mm256_permute_pd(x0, 0b0101), y0);
      y1 = _mm256_fmadd_pd(vi[p], _mm256_permute_pd(x1, 0b0101), y1);
    }
    _mm256_storeu_pd(od + 2 * i, y0);
    _mm256_storeu_pd(od + 2 * i + 4, y1);
  }
  for (; i < n; ++i) {
    cplx acc = accumulate ? out[i] : cplx(0.0, 0.0);
    for (std::size_t p = 0; p < count; ++p) {
      const double ar = coeffs[p].real();
      const double ai = coeffs[p].imag();
      const double xr = rows[p][i].real();
      const double xi = rows[p][i].imag();
      acc = cplx(acc.real() + (ar * xr - ai * xi), acc.imag() + (ar * xi + ai * xr));
    }
    out[i] = acc;
  }
}

// (wr, wi) * (xr, xi): wr*(xr, xi) + (-wi, wi)*(xi, xr), with the real and
// imaginary parts of w broadcast within each complex lane.
void cmul_add(std::size_t n, const cplx* w, const cplx* x, cplx* y) {
  const __m256d flip = _mm256_setr_pd(-1.0, 1.0, -1.0, 1.0);
  const auto* wd = reinterpret_cast<const double*>(w);
  const auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d wv = _mm256_loadu_pd(wd + 2 * i);
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d wr = _mm256_movedup_pd(wv);
    const __m256d wi = _mm256_mul_pd(_mm256_permute_pd(wv, 0b1111), flip);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    yv = _mm256_fmadd_pd(wr, xv, yv);
    yv = _mm256_fmadd_pd(wi, _mm256_permute_pd(xv, 0b0101), yv);
    _mm256_storeu_pd(yd + 2 * i, yv);
  }
  for (; i < n; ++i) {
    const double wr = w[i].real();
    const double wi = w[i].imag();
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = cplx(y[i].real() + (wr * xr - wi * xi), y[i].imag() + (wr * xi + wi * xr));
  }
}

void linear_combination(std::size_t n, const double* base, std::size_t count, const double* coeffs,
                        const double* const* srcs, double* out) {
  constexpr std::size_t kMaxTerms = 16;
  if (count > kMaxTerms) {
    scalar::linear_combination(n, base, count, coeffs, srcs, out);
    return;
  }
  __m256d c[kMaxTerms];
  for (std::size_t p = 0; p < count; ++p) c[p] = _mm256_set1_pd(coeffs[p]);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d y0 = base ? _mm256_loadu_pd(base + i) : _mm256_setzero_pd();
    __m256d y1 = base ? _mm256_loadu_pd(base + i + 4) : _mm256_setzero_pd();
    for (std::size_t p = 0; p < count; ++p) {
      y0 = _mm256_fmadd_pd(c[p], _mm256_loadu_pd(srcs[p] + i), y0);
      y1 = _mm256_fmadd_pd(c[p], _mm256_loadu_pd(srcs[p] + i + 4), y1);
    }
    _mm256_storeu_pd(out + i, y0);
    _mm256_storeu_pd(out + i + 4, y1);
  }
  for (; i < n; ++i) {
    double acc = base ? base[i] : 0.0;
    for (std::size_t p = 0; p < count; ++p) acc = std::fma(coeffs[p], srcs[p][i], acc);
    out[i] = acc;
  }
}

// Works on 2x2 blocks of complex numbers: rows i, i+1 at columns j, j+1 are
// two registers, and the mirrored block is transposed with lane permutes.
void hermitian_part(std::size_t n, const cplx* in, cplx* out) {
  const auto* id = reinterpret_cast<const double*>(in);
  auto* od = reinterpret_cast<double*>(out);
  const __m256d conj_mask = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const std::size_t even = n & ~std::size_t(1);
  auto at = [n](std::size_t i, std::size_t j) { return 2 * (i * n + j); };
  for (std::size_t i = 0; i < even; i += 2) {
    for (std::size_t j = i; j < even; j += 2) {
      const __m256d a0 = _mm256_loadu_pd(id + at(i, j));
      const __m256d a1 = _mm256_loadu_pd(id + at(i + 1, j));
      const __m256d b0 = _mm256_loadu_pd(id + at(j, i));
      const __m256d b1 = _mm256_loadu_pd(id + at(j + 1, i));
      // (b^T)[r][c] = b[c][r]
      const __m256d bt0 = _mm256_permute2f128_pd(b0, b1, 0x20);
      const __m256d bt1 = _mm256_permute2f128_pd(b0, b1, 0x31);
      const __m256d u0 = _mm256_mul_pd(half, _mm256_add_pd(a0, _mm256_xor_pd(bt0, conj_mask)));
      const __m256d u1 = _mm256_mul_pd(half, _mm256_add_pd(a1, _mm256_xor_pd(bt1, conj_mask)));
      const __m256d ut0 = _mm256_xor_pd(_mm256_permute2f128_pd(u0, u1, 0x20), conj_mask);
      const __m256d ut1 = _mm256_xor_pd(_mm256_permute2f128_pd(u0, u1, 0x31), conj_mask);
      _mm256_storeu_pd(od + at(j, i), ut0);
      _mm256_storeu_pd(od + at(j + 1, i), ut1);
      _mm256_storeu_pd(od + at(i, j), u0);
      _mm256_storeu_pd(od + at(i + 1, j), u1);
    }
  }
  // Odd dimension: last row and column.
  if (even != n) {
    const std::size_t l = n - 1;
    for (std::size_t j = 0; j < n; ++j) {
      const cplx v = 0.5 * (in[l * n + j] + std::conj(in[j * n + l]));
      out[l * n + j] = v;
      out[j * n + l] = std::conj(v);
    }
  }
}

}  // namespace hybridsim::kernels::avx2
