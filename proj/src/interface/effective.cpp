#include "hybridsim/interface/effective.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hybridsim/errors.hpp"
#include "hybridsim/quantum/states.hpp"

namespace hybridsim::interface {

using quantum::HilbertLayout;
using quantum::LindbladModel;

EffectiveParams effective_params(const TripartiteParams& p) {
  p.validate();
  EffectiveParams e;
  e.delta1 = p.omega_m - p.omega_plus;
  e.delta2 = p.delta - p.omega_plus;
  if (e.delta1 == 0.0) throw std::invalid_argument("effective_params: omega_m = omega_+ leaves nothing to eliminate");
  e.alpha = p.lambda / e.delta1;
  e.beta = p.g / e.delta1;
  e.g_eff = e.alpha * p.g;
  const double a2 = e.alpha * e.alpha, b2 = e.beta * e.beta;
  e.kappa_eff1 = p.kappa + b2 * (p.n_th + 1.0) * p.gamma_m;
  e.kappa_eff2 = b2 * p.n_th * p.gamma_m;
  e.gamma_eff1 = a2 * (p.n_th + 1.0) * p.gamma_m;
  e.gamma_eff2 = a2 * p.n_th * p.gamma_m;
  e.gamma_s = p.gamma_s;
  e.adiabatic = std::abs(e.alpha) < 0.2 && std::abs(e.beta) < 0.2;
  return e;
}

HilbertLayout spin_cavity_layout(std::size_t cavity_cutoff) {
  if (cavity_cutoff < 2) throw std::invalid_argument("spin_cavity_layout: cavity cutoff must be >= 2");
  return HilbertLayout({{"spin", 2}, {"cav", cavity_cutoff}});
}

LindbladModel build_effective_model(const EffectiveParams& e, std::size_t cavity_cutoff) {
  if (e.delta1 == 0.0) throw std::invalid_argument("build_effective_model: Delta_1 = 0");
  const auto layout = spin_cavity_layout(cavity_cutoff);
  const auto a = quantum::destroy(layout, "cav");
  const auto s = quantum::spin_ops(layout, "spin");
  LindbladModel m(layout);
  const auto x = a.adjoint() * s.sigma_minus;
  m.add_hamiltonian((e.delta2 - e.beta * e.beta * e.delta1) * quantum::number(layout, "cav") -
                    (0.5 * e.alpha * e.alpha * e.delta1) * s.sigma_z + e.g_eff * (x + x.adjoint()));
  m.add_collapse(a, e.kappa_eff1);
  m.add_collapse(a.adjoint(), e.kappa_eff2);
  m.add_collapse(s.sigma_minus, e.gamma_eff1);
  m.add_collapse(s.sigma_plus, e.gamma_eff2);
  m.add_collapse(s.sigma_z, e.gamma_s);
  return m;
}

double fit_rabi_frequency(const std::vector<double>& times, const std::vector<double>& population) {
  if (times.size() != population.size() || times.size() < 3) {
    throw std::invalid_argument("fit_rabi_frequency: need matching series of length >= 3");
  }
  // Lowest sample of the first dip below the mid-level; fast small wiggles
  // (virtual exchange at the detuning) never reach it.
  const auto [lo, hi] = std::minmax_element(population.begin(), population.end());
  const double mid = 0.5 * (*lo + *hi);
  std::size_t k1 = 0;
  while (k1 < population.size() && population[k1] >= mid) ++k1;
  std::size_t k2 = k1;
  while (k2 < population.size() && population[k2] <= mid) ++k2;
  if (k1 > 0 && k1 < population.size()) {
    const auto k = static_cast<std::size_t>(std::min_element(population.begin() + k1, population.begin() + k2) -
                                            population.begin());
    if (k > 0 && k + 1 < times.size()) {
      // parabola through three (possibly unevenly spaced) samples
      const double t0 = times[k - 1], t1 = times[k], t2 = times[k + 1];
      const double p0 = population[k - 1], p1 = population[k], p2 = population[k + 1];
      const double d0 = (p1 - p0) / (t1 - t0), d1 = (p2 - p1) / (t2 - t1);
      const double curvature = (d1 - d0) / (t2 - t0);
      const double t_min = curvature > 0.0 ? 0.5 * (t0 + t1) - d0 / (2.0 * curvature) : t1;
      return std::numbers::pi / t_min;
    }
  }
  throw NumericalError("fit_rabi_frequency: no interior minimum in the population series");
}

EffectiveComparison effective_vs_full_comparison(const TripartiteParams& p, double horizon, std::size_t samples,
                                                 const quantum::EvolveOptions& options) {
  if (!(horizon > 0.0) || samples < 3) throw std::invalid_argument("effective_vs_full_comparison: bad time grid");
  EffectiveComparison out;
  out.effective = effective_params(p);
  out.times.resize(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    out.times[k] = horizon * static_cast<double>(k) / static_cast<double>(samples - 1);
  }

  const auto full_layout = tripartite_layout(p.cutoffs);
  const auto full = tripartite_master_equation(p, p.omega_plus);
  const auto rho_full0 = tripartite_initial_state(full_layout, Eigen::Vector2cd(1.0, 0.0), 0.0);
  std::vector<Eigen::MatrixXcd> reduced;
  const auto rf = quantum::evolve(full, rho_full0, out.times, {}, options, [&](double, const Eigen::MatrixXcd& rho) {
    reduced.push_back(quantum::partial_trace(full_layout, rho, {"spin", "cav"}));
  });
  out.full_invariants = rf.invariants;

  const auto eff_layout = spin_cavity_layout(p.cutoffs.cavity);
  const auto eff = build_effective_model(out.effective, p.cutoffs.cavity);
  const auto rho_eff0 =
      quantum::product_state(eff_layout, {{"spin", quantum::basis_projector(2, 0)}});
  std::vector<Eigen::MatrixXcd> effective;
  const auto re = quantum::evolve(eff, rho_eff0, out.times, {}, options,
                                  [&](double, const Eigen::MatrixXcd& rho) { effective.push_back(rho); });
  out.effective_invariants = re.invariants;

  const Eigen::MatrixXcd u = quantum::spin_ops(eff_layout, "spin").sigma_z.matrix();
  const Eigen::MatrixXcd p_up = quantum::embed(eff_layout, "spin", quantum::basis_projector(2, 0)).matrix();
  for (std::size_t k = 0; k < samples; ++k) {
    const Eigen::MatrixXcd mapped = u * effective[k] * u.adjoint();
    const double d = quantum::trace_distance(reduced[k], mapped);
    out.trace_distance.push_back(d);
    out.fidelity.push_back(quantum::fidelity(reduced[k], mapped));
    out.spin_population_full.push_back(quantum::expectation(reduced[k], p_up).real());
    out.spin_population_effective.push_back(quantum::expectation(effective[k], p_up).real());
    out.max_trace_distance = std::max(out.max_trace_distance, d);
    out.max_trace_distance_unmapped =
        std::max(out.max_trace_distance_unmapped, quantum::trace_distance(reduced[k], effective[k]));
  }
  out.rabi_frequency = fit_rabi_frequency(out.times, out.spin_population_full);
  return out;
}

}  // namespace hybridsim::interface
