#include "hybridsim/cooling/moments.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hybridsim/errors.hpp"
#include "hybridsim/numerics/dopri5.hpp"

namespace hybridsim::cooling {

namespace {

constexpr cplx I{0.0, 1.0};

}  // namespace

std::array<double, 12> MomentState::to_real() const {
  return {n_a, n_b, c_ab.real(), s_ab.real(), s_aa.real(), s_bb.real(),
          0.0, 0.0, c_ab.imag(), s_ab.imag(), s_aa.imag(), s_bb.imag()};
}

MomentState MomentState::from_real(const double* x) {
  MomentState m;
  m.n_a = x[0];
  m.n_b = x[1];
  m.c_ab = {x[2], x[8]};
  m.s_ab = {x[3], x[9]};
  m.s_aa = {x[4], x[10]};
  m.s_bb = {x[5], x[11]};
  return m;
}

void CoolingParams::validate() const {
  if (!(kappa >= 0.0 && gamma_m >= 0.0 && n_th >= 0.0)) {
    throw std::invalid_argument("CoolingParams: rates and n_th must be non-negative");
  }
  if (!(omega_m > 0.0)) throw std::invalid_argument("CoolingParams: omega_m must be positive");
}

void moment_rhs(const double* x, const CoolingParams& p, double* dx) {
  const cplx na{x[0], x[6]}, nb{x[1], x[7]};
  const cplx cab{x[2], x[8]}, sab{x[3], x[9]}, saa{x[4], x[10]}, sbb{x[5], x[11]};
  const double g = p.g, wm = p.omega_m, D = p.delta, k = p.kappa, gm = p.gamma_m;

  // <(a^dag - a)(b^dag + b)> and <(a^dag + a)(b^dag - b)>
  const cplx xa = std::conj(sab) + cab - std::conj(cab) - sab;
  const cplx xb = std::conj(sab) - cab + std::conj(cab) - sab;

  const cplx dna = -I * g * xa - k * na;
  const cplx dnb = -I * g * xb - gm * nb + gm * p.n_th;
  const cplx dcab = I * (D - wm) * cab - 0.5 * (gm + k) * cab - I * g * (std::conj(saa) - sbb + na - nb);
  const cplx dsab = (-I * (wm + D) - 0.5 * (gm + k)) * sab - I * g * (1.0 + sbb + saa + na + nb);
  const cplx dsaa = -2.0 * I * g * (std::conj(cab) + sab) - (k + 2.0 * I * D) * saa;
  const cplx dsbb = -2.0 * I * g * (cab + sab) - (gm + 2.0 * I * wm) * sbb;

  const cplx d[6] = {dna, dnb, dcab, dsab, dsaa, dsbb};
  for (int i = 0; i < 6; ++i) {
    dx[i] = d[i].real();
    dx[i + 6] = d[i].imag();
  }
}

MomentState moment_rhs(const MomentState& m, const CoolingParams& p) {
  const auto x = m.to_real();
  double dx[12];
  moment_rhs(x.data(), p, dx);
  return MomentState::from_real(dx);
}

void moment_system(const CoolingParams& p, double (&a)[12][12], double (&b)[12]) {
  double zero[12] = {};
  moment_rhs(zero, p, b);
  for (int j = 0; j < 12; ++j) {
    double e[12] = {};
    e[j] = 1.0;
    double col[12];
    moment_rhs(e, p, col);
    for (int i = 0; i < 12; ++i) a[i][j] = col[i] - b[i];
  }
}

MomentTrajectory evolve_moments(const CoolingParams& p, const MomentState& initial, const std::vector<double>& times,
                                const MomentOptions& options) {
  p.validate();
  if (times.empty()) throw std::invalid_argument("evolve_moments: empty time grid");
  numerics::OdeOptions o;
  o.rtol = options.rtol;
  o.atol = options.atol;
  numerics::DormandPrince45 ode(12, [&p](double, const double* x, double* dx) { moment_rhs(x, p, dx); }, o);

  MomentTrajectory out{TimeSeries({"n_a", "n_b"}), initial, 0.0, 0.0};
  auto x = initial.to_real();
  out.min_occupation = std::min(initial.n_a, initial.n_b);
  out.max_cauchy_schwarz_excess = initial.cauchy_schwarz_excess();
  double t = times.front();
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k > 0) ode.integrate(t, times[k], x);
    const auto m = MomentState::from_real(x.data());
    const double row[2] = {m.n_a, m.n_b};
    out.series.append(t, row);
    out.min_occupation = std::min({out.min_occupation, m.n_a, m.n_b});
    out.max_cauchy_schwarz_excess = std::max(out.max_cauchy_schwarz_excess, m.cauchy_schwarz_excess());
    out.final_state = m;
  }
  return out;
}

MomentState steady_moments(const CoolingParams& p) {
  p.validate();
  double a[12][12], b[12];
  moment_system(p, a, b);
  Eigen::Matrix<double, 12, 12> A;
  Eigen::Matrix<double, 12, 1> B;
  for (int i = 0; i < 12; ++i) {
    B[i] = b[i];
    for (int j = 0; j < 12; ++j) A(i, j) = a[i][j];
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 12, 12>> lu(A);
  if (lu.rank() < 12) throw NumericalError("steady_moments: singular moment system (stability boundary)");
  const auto eig = A.eigenvalues();
  for (int i = 0; i < 12; ++i) {
    if (eig[i].real() >= 0.0) {
      throw NumericalError("steady_moments: drift matrix has an eigenvalue with Re >= 0; dynamics unstable");
    }
  }
  Eigen::Matrix<double, 12, 1> x = lu.solve(-B);
  return MomentState::from_real(x.data());
}

}  // namespace hybridsim::cooling
