#pragma once

#include <vector>

#include "hybridsim/interface/tripartite.hpp"

// Spin-cavity model with the beam adiabatically eliminated.
namespace hybridsim::interface {

struct EffectiveParams {
  double delta1 = 0.0;  // omega_m - omega_+
  double delta2 = 0.0;  // Delta - omega_+
  double alpha = 0.0;   // lambda / delta1
  double beta = 0.0;    // g / delta1
  double g_eff = 0.0;   // alpha g
  double kappa_eff1 = 0.0;  // kappa + beta^2 (n_th+1) gamma_m
  double kappa_eff2 = 0.0;  // beta^2 n_th gamma_m
  double gamma_eff1 = 0.0;  // alpha^2 (n_th+1) gamma_m
  double gamma_eff2 = 0.0;  // alpha^2 n_th gamma_m
  double gamma_s = 0.0;
  bool adiabatic = false;  // |alpha|, |beta| < 0.2
};

// Throws std::invalid_argument when omega_m = omega_+.
EffectiveParams effective_params(const TripartiteParams& p);

quantum::HilbertLayout spin_cavity_layout(std::size_t cavity_cutoff);

// (Delta_2 - beta^2 Delta_1) a^dag a - (alpha^2 Delta_1 / 2) sigma_z
// + g_eff (a^dag sigma_- + a sigma_+), with kappa_eff1 D[a] + kappa_eff2 D[a^dag]
// + gamma_eff1 D[sigma_-] + gamma_eff2 D[sigma_+] + gamma_s D[sigma_z].
quantum::LindbladModel build_effective_model(const EffectiveParams& e, std::size_t cavity_cutoff);

struct EffectiveComparison {
  EffectiveParams effective;
  std::vector<double> times;
  std::vector<double> trace_distance;  // full reduced state vs effective state
  std::vector<double> fidelity;
  std::vector<double> spin_population_full;
  std::vector<double> spin_population_effective;
  double max_trace_distance = 0.0;
  // Same distance without the sigma_- -> -sigma_- relabelling (see below).
  double max_trace_distance_unmapped = 0.0;
  double rabi_frequency = 0.0;  // fitted from the full model's spin population, rad/s
  quantum::InvariantReport full_invariants;
  quantum::InvariantReport effective_invariants;
};

// Evolves the full three-body model (frame rotating at omega_+) and the
// effective model from spin |-1>, beam ground state, cavity vacuum, then
// compares the spin-cavity reduced state. Eliminating the beam produces the
// exchange term with coupling -g lambda / Delta_1; the printed +g_eff is the
// same physics with the spin phase convention sigma_- -> -sigma_-, so the
// effective state is mapped through sigma_z before comparing.
EffectiveComparison effective_vs_full_comparison(const TripartiteParams& p, double horizon, std::size_t samples = 401,
                                                 const quantum::EvolveOptions& options = {});

// Angular frequency of P(t) ~ (1 + cos(W t))/2 from the lowest sample of its
// first dip below the mid-level, refined by a parabola through the
// neighbouring samples.
double fit_rabi_frequency(const std::vector<double>& times, const std::vector<double>& population);

}  // namespace hybridsim::interface
