#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <vector>

#include "hybridsim/cooling/moments.hpp"
#include "hybridsim/quantum/evolve.hpp"
#include "hybridsim/quantum/lindblad.hpp"
#include "hybridsim/quantum/states.hpp"

namespace hybridsim::cooling {

struct FinalOccupancy {
  double cooling_rate = 0.0;  // Gamma = 4 g^2 / kappa
  double weak = 0.0;          // gamma_m n_th/(Gamma + gamma_m) + kappa^2/(16 omega_m^2)
  double strong = 0.0;        // gamma_m n_th/(kappa + gamma_m) + g^2/(2(omega_m^2 - 4 g^2)); NaN if invalid
  bool strong_valid = false;  // 2g < omega_m
};

FinalOccupancy final_occupancy_formulas(const CoolingParams& p);

struct StabilityReport {
  bool stable = false;              // 2g < omega_m (Routh-Hurwitz)
  double cooperativity = 0.0;       // 4 g^2/(gamma_m kappa); infinite if a rate vanishes
  bool cooperativity_infinite = false;
  bool high_cooperativity = false;  // C >= 100
  double sideband_ratio = 0.0;      // omega_m / kappa
  bool sideband_resolved = false;   // omega_m > kappa
};

StabilityReport stability_and_cooperativity(const CoolingParams& p);

// Master-equation form of the linearized cooling model on a truncated
// cavity-beam space: kappa D[a] + gamma_m (n_th+1) D[b] + gamma_m n_th D[b^dag].
struct CoolingCutoffs {
  std::size_t cavity = 8;
  std::size_t mechanics = 8;
};

// Basis of the truncated two-mode space, with the ladder operators restricted
// to it. Each basis state is a Fock pair |n_a, n_b>.
class TwoModeBasis {
 public:
  // n_a < cavity, n_b < mechanics; layout ("cav", "mech").
  static TwoModeBasis product(const CoolingCutoffs& cutoffs);
  // Every pair with n_a + n_b <= max_excitations, on a single subsystem
  // "modes". The beam-splitter part of the dynamics conserves n_a + n_b, so
  // this keeps the same edge as a product cutoff of max_excitations + 1 with
  // about half the states.
  static TwoModeBasis excitation_limited(std::size_t max_excitations);

  const quantum::HilbertLayout& layout() const noexcept { return layout_; }
  std::size_t dim() const noexcept { return occupations_.size(); }
  const quantum::QOperator& a() const noexcept { return a_; }
  const quantum::QOperator& b() const noexcept { return b_; }
  // (n_a, n_b) of each basis state.
  const std::vector<std::array<std::size_t, 2>>& occupations() const noexcept { return occupations_; }

  // Population on states where a^dag or b^dag leaves the truncated space.
  double boundary_population(const Eigen::MatrixXcd& rho) const;
  // Cavity vacuum, beam thermal with mean n_b before truncation, restricted
  // to beam levels <= max_level and renormalized.
  quantum::DensityMatrix thermal_beam_state(double n_b,
                                            std::size_t max_level = std::numeric_limits<std::size_t>::max()) const;

 private:
  TwoModeBasis(quantum::HilbertLayout layout, std::vector<std::array<std::size_t, 2>> occupations,
               std::vector<bool> boundary);

  quantum::HilbertLayout layout_;
  std::vector<std::array<std::size_t, 2>> occupations_;
  std::vector<bool> boundary_;
  quantum::QOperator a_;
  quantum::QOperator b_;
};

// Autonomous form in the drive frame (Delta a^dag a + omega_m b^dag b + g x_a x_b).
quantum::LindbladModel cooling_master_equation(const CoolingParams& p, const TwoModeBasis& basis);
quantum::LindbladModel cooling_master_equation(const CoolingParams& p, const CoolingCutoffs& cutoffs);

// Same dynamics in the frame rotating at Delta (cavity) and omega_m (beam):
// every term oscillates at Delta -+ omega_m, static at resonance. Occupations
// are frame independent.
quantum::LindbladModel cooling_master_equation_rotating(const CoolingParams& p, const TwoModeBasis& basis);
quantum::LindbladModel cooling_master_equation_rotating(const CoolingParams& p, const CoolingCutoffs& cutoffs);

MomentState moments_of(const TwoModeBasis& basis, const Eigen::MatrixXcd& rho);

struct TrajectoryComparison {
  std::vector<double> times;
  std::vector<double> n_b_moments;
  std::vector<double> n_b_master;
  double max_relative_deviation = 0.0;
  double max_boundary_population = 0.0;  // truncation leakage indicator
  quantum::InvariantReport invariants;
};

// Evolves the rotating-frame master equation from a cavity-vacuum,
// truncated-thermal beam state (beam levels <= max_initial_level) and the
// moment equations from that state's exact moments. Leaving empty shells
// between the initial support and the basis edge keeps the counter-rotating
// terms away from the truncation.
TrajectoryComparison compare_moment_and_master_dynamics(
    const CoolingParams& p, double n_b0, const TwoModeBasis& basis, const std::vector<double>& times,
    const quantum::EvolveOptions& options = {},
    std::size_t max_initial_level = std::numeric_limits<std::size_t>::max());

struct CrosscheckPoint {
  double g_over_kappa = 0.0;
  double n_b_moments = 0.0;
  double n_b_master = 0.0;
  double relative_deviation = 0.0;
  double boundary_population = 0.0;
};

struct CrosscheckReport {
  std::vector<CrosscheckPoint> points;
  double max_relative_deviation = 0.0;
  double max_boundary_population = 0.0;
};

// Steady-state n_b from the moment system vs the master equation across a
// g/kappa grid (g = ratio * kappa; other parameters from `base`). Throws
// NumericalError when the steady state holds more than `leakage_limit`
// population on the truncation boundary.
CrosscheckReport cooling_me_crosscheck(const CoolingParams& base, const std::vector<double>& g_over_kappa,
                                       const TwoModeBasis& basis, double leakage_limit = 1e-4);

}  // namespace hybridsim::cooling
