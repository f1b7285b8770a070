#include "hybridsim/kernels/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hybridsim::kernels {

namespace {

constexpr KernelTable kScalarTable{SimdLevel::scalar, scalar::axpy, scalar::caxpy,
                                   scalar::scaled_max_error, scalar::row_combination,
                                   scalar::cmul_add, scalar::linear_combination,
                                   scalar::hermitian_part};

#if defined(HYBRIDSIM_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2Table{SimdLevel::avx2, avx2::axpy, avx2::caxpy, avx2::scaled_max_error,
                                 avx2::row_combination, avx2::cmul_add,
                                 avx2::linear_combination, avx2::hermitian_part};
#endif

const KernelTable& resolve_active() {
  if (const char* forced = std::getenv("HYBRIDSIM_SIMD")) {
    if (std::string(forced) == "scalar") return kScalarTable;
  }
  return table(detect_simd_level());
}

}  // namespace

std::string_view to_string(SimdLevel level) noexcept {
  switch (level) {
    case SimdLevel::scalar:
      return "scalar";
    case SimdLevel::avx2:
      return "avx2";
  }
  return "unknown";
}

bool level_supported(SimdLevel level) noexcept {
  switch (level) {
    case SimdLevel::scalar:
      return true;
    case SimdLevel::avx2:
#if defined(HYBRIDSIM_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

SimdLevel detect_simd_level() noexcept {
  return level_supported(SimdLevel::avx2) ? SimdLevel::avx2 : SimdLevel::scalar;
}

const KernelTable& table(SimdLevel level) {
  if (!level_supported(level)) {
    throw std::invalid_argument("SIMD level not available: " + std::string(to_string(level)));
  }
#if defined(HYBRIDSIM_HAVE_AVX2_KERNELS)
  if (level == SimdLevel::avx2) return kAvx2Table;
#endif
  return kScalarTable;
}

const KernelTable& active() {
  static const KernelTable& chosen = resolve_active();
  return chosen;
}

}  // namespace hybridsim::kernels
