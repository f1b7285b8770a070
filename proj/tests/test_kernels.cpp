#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hybridsim/kernels/kernels.hpp"
#include "hybridsim/kernels/row_sparse.hpp"

using namespace hybridsim::kernels;

namespace {

std::vector<double> random_reals(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

std::vector<cplx> random_complex(std::size_t n, unsigned seed) {
  auto re = random_reals(2 * n, seed);
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {re[2 * i], re[2 * i + 1]};
  return v;
}

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(level_supported(SimdLevel::scalar));
  CHECK(table(SimdLevel::scalar).level == SimdLevel::scalar);
  CHECK(to_string(SimdLevel::avx2) == "avx2");
}

TEST_CASE("vectorized kernels agree with the scalar reference") {
  if (!level_supported(SimdLevel::avx2)) {
    MESSAGE("avx2 kernels unavailable; equivalence test skipped");
    CHECK_THROWS_AS(table(SimdLevel::avx2), std::invalid_argument);
    return;
  }
  const auto& ref = table(SimdLevel::scalar);
  const auto& vec = table(SimdLevel::avx2);
  // Lengths straddle every unroll boundary and tail path.
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 255u, 1001u}) {
    CAPTURE(n);
    auto x = random_reals(n, 11 + n);
    auto y0 = random_reals(n, 97 + n);
    auto y1 = y0;
    ref.axpy(n, 0.37, x.data(), y0.data());
    vec.axpy(n, 0.37, x.data(), y1.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y0[i]).epsilon(1e-15));

    auto cx = random_complex(n, 5 + n);
    auto cy0 = random_complex(n, 7 + n);
    auto cy1 = cy0;
    const cplx alpha{-0.8, 1.3};
    ref.caxpy(n, alpha, cx.data(), cy0.data());
    vec.caxpy(n, alpha, cx.data(), cy1.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(cy1[i] - cy0[i]) < 1e-14);

    auto err = random_reals(n, 3 + n);
    auto a = random_reals(n, 1 + n);
    auto b = random_reals(n, 2 + n);
    const double e0 = ref.scaled_max_error(n, err.data(), a.data(), b.data(), 1e-10, 1e-8);
    const double e1 = vec.scaled_max_error(n, err.data(), a.data(), b.data(), 1e-10, 1e-8);
    CHECK(e1 == doctest::Approx(e0).epsilon(1e-15));

    auto w = random_complex(n, 13 + n);
    auto cz0 = random_complex(n, 17 + n);
    auto cz1 = cz0;
    ref.cmul_add(n, w.data(), cx.data(), cz0.data());
    vec.cmul_add(n, w.data(), cx.data(), cz1.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(cz1[i] - cz0[i]) < 1e-14);

    // Five complex sources, above and below the unrolled width.
    std::vector<std::vector<cplx>> rows;
    std::vector<const cplx*> rp;
    for (unsigned p = 0; p < 5; ++p) rows.push_back(random_complex(n, 100 + p + n));
    for (auto& r : rows) rp.push_back(r.data());
    const std::vector<cplx> coeffs{{0.5, -1.0}, {2.0, 0.0}, {0.0, 0.3}, {-1.5, 0.25}, {0.1, 0.1}};
    for (bool acc : {false, true}) {
      auto o0 = random_complex(n, 23 + n);
      auto o1 = o0;
      ref.row_combination(n, 5, coeffs.data(), rp.data(), o0.data(), acc);
      vec.row_combination(n, 5, coeffs.data(), rp.data(), o1.data(), acc);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(o1[i] - o0[i]) < 1e-13);
    }

    std::vector<std::vector<double>> srcs;
    std::vector<const double*> sp;
    for (unsigned p = 0; p < 6; ++p) srcs.push_back(random_reals(n, 200 + p + n));
    for (auto& r : srcs) sp.push_back(r.data());
    const double rc[] = {0.1, -2.0, 3.5, 0.0, 1e-3, -0.7};
    for (const double* base : std::vector<const double*>{nullptr, a.data()}) {
      std::vector<double> l0(n), l1(n);
      ref.linear_combination(n, base, 6, rc, sp.data(), l0.data());
      vec.linear_combination(n, base, 6, rc, sp.data(), l1.data());
      for (std::size_t i = 0; i < n; ++i) CHECK(l1[i] == doctest::Approx(l0[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("hermitian part kernels agree with the dense definition") {
  for (std::size_t n : {1u, 2u, 5u, 8u, 33u}) {
    CAPTURE(n);
    auto in = random_complex(n * n, 31 + n);
    Eigen::Map<const Eigen::Matrix<cplx, -1, -1, Eigen::RowMajor>> m(in.data(), n, n);
    const Eigen::MatrixXcd expected = 0.5 * (m + m.adjoint());
    for (auto level : {SimdLevel::scalar, SimdLevel::avx2}) {
      if (!level_supported(level)) continue;
      std::vector<cplx> out(n * n);
      table(level).hermitian_part(n, in.data(), out.data());
      Eigen::Map<Eigen::Matrix<cplx, -1, -1, Eigen::RowMajor>> got(out.data(), n, n);
      CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-15);
      // Exactly Hermitian, not just to rounding.
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) CHECK(out[i * n + j] == std::conj(out[j * n + i]));
    }
  }
}

TEST_CASE("diagonal-form right multiply matches dense product") {
  const std::size_t n = 9;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i + 3 < n; ++i) a(i, i + 3) = std::sqrt(double(i + 1));
  a(6, 1) = cplx(0.25, 2.0);
  a(4, 4) = -1.0;
  a(0, 8) = 3.0;  // far corner, alone on its diagonal
  const auto dia = DiagonalMatrix::from_dense(a);
  CHECK(dia.runs().size() == 4);
  auto in_v = random_complex(n * n, 77);
  Eigen::Map<const Eigen::Matrix<cplx, -1, -1, Eigen::RowMajor>> in(in_v.data(), n, n);
  const Eigen::MatrixXcd expected = in * a;
  for (auto level : {SimdLevel::scalar, SimdLevel::avx2}) {
    if (!level_supported(level)) continue;
    std::vector<cplx> out(n * n, cplx(0.0, 0.0));
    multiply_right(table(level), in_v.data(), n, dia, out.data());
    Eigen::Map<Eigen::Matrix<cplx, -1, -1, Eigen::RowMajor>> got(out.data(), n, n);
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("scaled error uses the larger magnitude of the two states") {
  const auto& k = table(SimdLevel::scalar);
  const double err[] = {1e-8, -2e-8};
  const double a[] = {1.0, 0.0};
  const double b[] = {0.0, -1.0};
  const double e = k.scaled_max_error(2, err, a, b, 0.0, 1e-8);
  CHECK(e == doctest::Approx(2.0));
}

TEST_CASE("row-sparse multiply matches dense product for every kernel level") {
  const std::size_t n = 12;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = std::sqrt(double(i + 1));
  a(3, 7) = cplx(0.5, -0.25);
  const auto sp = RowSparseMatrix::from_dense(a);
  CHECK(sp.nonzeros() == n);
  CHECK((sp.to_dense() - a).norm() == 0.0);

  auto in_v = random_complex(n * n, 42);
  Eigen::Map<const Eigen::Matrix<cplx, -1, -1, Eigen::RowMajor>> in(in_v.data(), n, n);
  const cplx scale{0.0, -1.0};
  Eigen::MatrixXcd expected = scale * a * in;

  for (auto level : {SimdLevel::scalar, SimdLevel::avx2}) {
    if (!level_supported(level)) continue;
    std::vector<cplx> out(n * n, cplx{9.0, 9.0});
    multiply_rows(table(level), sp, scale, in_v.data(), n, out.data(), false);
    Eigen::Map<Eigen::Matrix<cplx, -1, -1, Eigen::RowMajor>> got(out.data(), n, n);
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-13);
    multiply_rows(table(level), sp, scale, in_v.data(), n, out.data(), true);
    CHECK((got - 2.0 * expected).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("diagonal runs split at long gaps and keep short ones") {
  const std::size_t n = 40;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k : {0u, 2u, 5u, 30u, 31u}) a(k, k + 1) = double(k + 1);
  const auto dia = DiagonalMatrix::from_dense(a);
  REQUIRE(dia.runs().size() == 2);
  CHECK(dia.runs()[0].begin == 0);
  CHECK(dia.runs()[0].end == 6);
  CHECK(dia.runs()[1].begin == 30);
  CHECK(dia.runs()[1].end == 32);
}

TEST_CASE("conjugate transpose of a row-major block") {
  const std::size_t n = 37;
  auto in = random_complex(n * n, 8);
  std::vector<cplx> out(n * n);
  conjugate_transpose(n, in.data(), out.data());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) CHECK(out[i * n + j] == std::conj(in[j * n + i]));
}
