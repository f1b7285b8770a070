#include "hybridsim/cooling/analysis.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "hybridsim/errors.hpp"
#include "hybridsim/quantum/operators.hpp"
#include "hybridsim/quantum/states.hpp"

namespace hybridsim::cooling {

using quantum::cplx;
using quantum::HilbertLayout;
using quantum::LindbladModel;

FinalOccupancy final_occupancy_formulas(const CoolingParams& p) {
  p.validate();
  FinalOccupancy f;
  const double g2 = p.g * p.g;
  f.cooling_rate = p.kappa > 0.0 ? 4.0 * g2 / p.kappa : std::numeric_limits<double>::infinity();
  const double gm_nth = p.gamma_m * p.n_th;
  f.weak = (gm_nth > 0.0 ? gm_nth / (f.cooling_rate + p.gamma_m) : 0.0) +
           p.kappa * p.kappa / (16.0 * p.omega_m * p.omega_m);
  f.strong_valid = 2.0 * std::abs(p.g) < p.omega_m;
  f.strong = f.strong_valid ? (gm_nth > 0.0 ? gm_nth / (p.kappa + p.gamma_m) : 0.0) +
                                  g2 / (2.0 * (p.omega_m * p.omega_m - 4.0 * g2))
                            : std::numeric_limits<double>::quiet_NaN();
  return f;
}

StabilityReport stability_and_cooperativity(const CoolingParams& p) {
  p.validate();
  StabilityReport s;
  s.stable = 2.0 * std::abs(p.g) < p.omega_m;
  const double denom = p.gamma_m * p.kappa;
  s.cooperativity_infinite = denom == 0.0;
  s.cooperativity = s.cooperativity_infinite ? std::numeric_limits<double>::infinity() : 4.0 * p.g * p.g / denom;
  s.high_cooperativity = s.cooperativity >= 100.0;
  s.sideband_ratio = p.kappa > 0.0 ? p.omega_m / p.kappa : std::numeric_limits<double>::infinity();
  s.sideband_resolved = p.omega_m > p.kappa;
  return s;
}

TwoModeBasis::TwoModeBasis(HilbertLayout layout, std::vector<std::array<std::size_t, 2>> occupations,
                           std::vector<bool> boundary)
    : layout_(std::move(layout)),
      occupations_(std::move(occupations)),
      boundary_(std::move(boundary)),
      a_(quantum::zero(layout_)),
      b_(quantum::zero(layout_)) {
  std::map<std::array<std::size_t, 2>, Eigen::Index> index;
  for (std::size_t k = 0; k < occupations_.size(); ++k) index[occupations_[k]] = static_cast<Eigen::Index>(k);
  const auto d = static_cast<Eigen::Index>(occupations_.size());
  Eigen::MatrixXcd am = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd bm = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t k = 0; k < occupations_.size(); ++k) {
    const auto [na, nb] = occupations_[k];
    const auto col = static_cast<Eigen::Index>(k);
    if (na > 0) am(index.at({na - 1, nb}), col) = std::sqrt(static_cast<double>(na));
    if (nb > 0) bm(index.at({na, nb - 1}), col) = std::sqrt(static_cast<double>(nb));
  }
  a_ = quantum::QOperator(layout_, std::move(am));
  b_ = quantum::QOperator(layout_, std::move(bm));
}

TwoModeBasis TwoModeBasis::product(const CoolingCutoffs& c) {
  if (c.cavity < 2 || c.mechanics < 2) throw std::invalid_argument("cooling cutoffs must be >= 2");
  HilbertLayout layout({{"cav", c.cavity}, {"mech", c.mechanics}});
  std::vector<std::array<std::size_t, 2>> occ;
  std::vector<bool> edge;
  for (std::size_t na = 0; na < c.cavity; ++na) {
    for (std::size_t nb = 0; nb < c.mechanics; ++nb) {
      occ.push_back({na, nb});
      edge.push_back(na + 1 == c.cavity || nb + 1 == c.mechanics);
    }
  }
  return TwoModeBasis(std::move(layout), std::move(occ), std::move(edge));
}

TwoModeBasis TwoModeBasis::excitation_limited(std::size_t max_excitations) {
  if (max_excitations < 1) throw std::invalid_argument("excitation cutoff must be >= 1");
  std::vector<std::array<std::size_t, 2>> occ;
  std::vector<bool> edge;
  for (std::size_t m = 0; m <= max_excitations; ++m) {
    for (std::size_t na = 0; na <= m; ++na) {
      occ.push_back({na, m - na});
      edge.push_back(m == max_excitations);
    }
  }
  HilbertLayout layout({{"modes", occ.size()}});
  return TwoModeBasis(std::move(layout), std::move(occ), std::move(edge));
}

double TwoModeBasis::boundary_population(const Eigen::MatrixXcd& rho) const {
  double p = 0.0;
  for (std::size_t k = 0; k < boundary_.size(); ++k) {
    if (boundary_[k]) p += rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
  }
  return p;
}

quantum::DensityMatrix TwoModeBasis::thermal_beam_state(double n_b, std::size_t max_level) const {
  if (!(n_b >= 0.0)) throw std::invalid_argument("thermal_beam_state: occupation must be non-negative");
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  const double r = n_b / (1.0 + n_b);
  double total = 0.0;
  for (std::size_t k = 0; k < occupations_.size(); ++k) {
    if (occupations_[k][0] != 0 || occupations_[k][1] > max_level) continue;
    const double w = std::pow(r, static_cast<double>(occupations_[k][1]));
    rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = w;
    total += w;
  }
  return quantum::DensityMatrix(quantum::QOperator(layout_, rho / total));
}

namespace {

void add_dissipators(LindbladModel& m, const CoolingParams& p, const TwoModeBasis& basis) {
  m.add_collapse(basis.a(), p.kappa);
  m.add_collapse(basis.b(), p.gamma_m * (p.n_th + 1.0));
  m.add_collapse(basis.b().adjoint(), p.gamma_m * p.n_th);
}

quantum::QOperator number_of(const quantum::QOperator& c) { return c.adjoint() * c; }

}  // namespace

LindbladModel cooling_master_equation(const CoolingParams& p, const TwoModeBasis& basis) {
  p.validate();
  const auto& a = basis.a();
  const auto& b = basis.b();
  LindbladModel m(basis.layout());
  m.add_hamiltonian(p.delta * number_of(a) + p.omega_m * number_of(b) + p.g * ((a + a.adjoint()) * (b + b.adjoint())));
  add_dissipators(m, p, basis);
  return m;
}

LindbladModel cooling_master_equation(const CoolingParams& p, const CoolingCutoffs& cutoffs) {
  return cooling_master_equation(p, TwoModeBasis::product(cutoffs));
}

LindbladModel cooling_master_equation_rotating(const CoolingParams& p, const TwoModeBasis& basis) {
  p.validate();
  const auto& a = basis.a();
  const auto& b = basis.b();
  LindbladModel m(basis.layout());
  // g (a^dag b e^{i w t} + h.c.) = g cos(wt) (a^dag b + a b^dag) + g sin(wt) i(a^dag b - a b^dag)
  auto add_pair = [&](const quantum::QOperator& x, double w) {
    const auto re = p.g * (x + x.adjoint());
    const auto im = p.g * (cplx(0.0, 1.0) * (x - x.adjoint()));
    if (w == 0.0) {
      m.add_hamiltonian(re);
      return;
    }
    m.add_hamiltonian(re, [w](double t) { return std::cos(w * t); });
    m.add_hamiltonian(im, [w](double t) { return std::sin(w * t); });
  };
  add_pair(a.adjoint() * b, p.delta - p.omega_m);
  add_pair(a.adjoint() * b.adjoint(), p.delta + p.omega_m);
  add_dissipators(m, p, basis);
  return m;
}

LindbladModel cooling_master_equation_rotating(const CoolingParams& p, const CoolingCutoffs& cutoffs) {
  return cooling_master_equation_rotating(p, TwoModeBasis::product(cutoffs));
}

MomentState moments_of(const TwoModeBasis& basis, const Eigen::MatrixXcd& rho) {
  const auto& a = basis.a().matrix();
  const auto& b = basis.b().matrix();
  MomentState m;
  m.n_a = quantum::expectation(rho, a.adjoint() * a).real();
  m.n_b = quantum::expectation(rho, b.adjoint() * b).real();
  m.c_ab = quantum::expectation(rho, a.adjoint() * b);
  m.s_ab = quantum::expectation(rho, a * b);
  m.s_aa = quantum::expectation(rho, a * a);
  m.s_bb = quantum::expectation(rho, b * b);
  return m;
}

TrajectoryComparison compare_moment_and_master_dynamics(const CoolingParams& p, double n_b0,
                                                        const TwoModeBasis& basis,
                                                        const std::vector<double>& times,
                                                        const quantum::EvolveOptions& options,
                                                        std::size_t max_initial_level) {
  const auto model = cooling_master_equation_rotating(p, basis);
  const auto rho0 = basis.thermal_beam_state(n_b0, max_initial_level);

  TrajectoryComparison out;
  out.times = times;
  auto result = quantum::evolve(model, rho0, times, {quantum::observe("n_b", number_of(basis.b()))}, options,
                                [&](double, const Eigen::MatrixXcd& rho) {
                                  out.max_boundary_population =
                                      std::max(out.max_boundary_population, basis.boundary_population(rho));
                                });
  out.n_b_master = result.series.column("n_b");
  out.invariants = result.invariants;

  // Moments of the rotating-frame state equal lab-frame moments at t = 0.
  const auto traj = evolve_moments(p, moments_of(basis, rho0.matrix()), times);
  out.n_b_moments = traj.series.column("n_b");
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double rel = std::abs(out.n_b_master[k] - out.n_b_moments[k]) / std::abs(out.n_b_moments[k]);
    out.max_relative_deviation = std::max(out.max_relative_deviation, rel);
  }
  return out;
}

CrosscheckReport cooling_me_crosscheck(const CoolingParams& base, const std::vector<double>& g_over_kappa,
                                       const TwoModeBasis& basis, double leakage_limit) {
  base.validate();
  if (!(base.kappa > 0.0)) throw std::invalid_argument("cooling_me_crosscheck: kappa must be positive");
  CrosscheckReport report;
  for (double ratio : g_over_kappa) {
    CoolingParams p = base;
    p.g = ratio * base.kappa;
    CrosscheckPoint pt;
    pt.g_over_kappa = ratio;
    pt.n_b_moments = steady_moments(p).n_b;
    const auto model = cooling_master_equation(p, basis);
    const auto ss = quantum::steady_state(model);
    pt.n_b_master = quantum::expectation(ss.state.matrix(), number_of(basis.b()).matrix()).real();
    pt.boundary_population = basis.boundary_population(ss.state.matrix());
    if (pt.boundary_population > leakage_limit) {
      throw NumericalError("cooling_me_crosscheck: cutoff inadequate at g/kappa=" + std::to_string(ratio) +
                           " (boundary population " + std::to_string(pt.boundary_population) + ")");
    }
    pt.relative_deviation = std::abs(pt.n_b_master - pt.n_b_moments) / std::abs(pt.n_b_moments);
    report.max_relative_deviation = std::max(report.max_relative_deviation, pt.relative_deviation);
    report.max_boundary_population = std::max(report.max_boundary_population, pt.boundary_population);
    report.points.push_back(pt);
  }
  return report;
}

}  // namespace hybridsim::cooling
