#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Data-parallel inner loops of the propagators. Every kernel has a scalar
// reference implementation; vectorized variants are selected at runtime and
// must agree with the reference to rounding.
namespace hybridsim::kernels {

using cplx = std::complex<double>;

enum class SimdLevel { scalar, avx2 };

struct KernelTable {
  SimdLevel level;
  // y[i] += alpha * x[i], i < n (doubles)
  void (*axpy)(std::size_t n, double alpha, const double* x, double* y);
  // y[i] += alpha * x[i], i < n (complex)
  void (*caxpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);
  // max_i |err[i]| / (atol + rtol * max(|a[i]|, |b[i]|))
  double (*scaled_max_error)(std::size_t n, const double* err, const double* a, const double* b,
                             double atol, double rtol);
  // out[i] (+)= sum_p coeffs[p] * rows[p][i], i < n. One pass over out.
  void (*row_combination)(std::size_t n, std::size_t count, const cplx* coeffs, const cplx* const* rows,
                          cplx* out, bool accumulate);
  // y[i] += w[i] * x[i], i < n (complex, elementwise)
  void (*cmul_add)(std::size_t n, const cplx* w, const cplx* x, cplx* y);
  // out[i] = base[i] + sum_p coeffs[p] * srcs[p][i], i < n (doubles).
  // base may be null (treated as zero); out may alias base.
  void (*linear_combination)(std::size_t n, const double* base, std::size_t count, const double* coeffs,
                             const double* const* srcs, double* out);
  // out = (in + in^dagger) / 2 for a square row-major n x n block, in != out
  void (*hermitian_part)(std::size_t n, const cplx* in, cplx* out);
};

std::string_view to_string(SimdLevel level) noexcept;

bool level_supported(SimdLevel level) noexcept;

// Best level the running CPU supports.
SimdLevel detect_simd_level() noexcept;

// Throws std::invalid_argument when the level is not supported on this CPU or
// was not compiled in.
const KernelTable& table(SimdLevel level);

// Table used by the solvers. Resolved once: the best supported level, unless
// HYBRIDSIM_SIMD=scalar is set in the environment.
const KernelTable& active();

namespace scalar {
void axpy(std::size_t n, double alpha, const double* x, double* y);
void caxpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
double scaled_max_error(std::size_t n, const double* err, const double* a, const double* b,
                        double atol, double rtol);
void row_combination(std::size_t n, std::size_t count, const cplx* coeffs, const cplx* const* rows, cplx* out,
                     bool accumulate);
void cmul_add(std::size_t n, const cplx* w, const cplx* x, cplx* y);
void linear_combination(std::size_t n, const double* base, std::size_t count, const double* coeffs,
                        const double* const* srcs, double* out);
void hermitian_part(std::size_t n, const cplx* in, cplx* out);
}  // namespace scalar

#if defined(HYBRIDSIM_HAVE_AVX2_KERNELS)
namespace avx2 {
void axpy(std::size_t n, double alpha, const double* x, double* y);
void caxpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
double scaled_max_error(std::size_t n, const double* err, const double* a, const double* b,
                        double atol, double rtol);
void row_combination(std::size_t n, std::size_t count, const cplx* coeffs, const cplx* const* rows, cplx* out,
                     bool accumulate);
void cmul_add(std::size_t n, const cplx* w, const cplx* x, cplx* y);
void linear_combination(std::size_t n, const double* base, std::size_t count, const double* coeffs,
                        const double* const* srcs, double* out);
void hermitian_part(std::size_t n, const cplx* in, cplx* out);
}  // namespace avx2
#endif

}  // namespace hybridsim::kernels
