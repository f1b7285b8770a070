#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

#include "hybridsim/quantum/evolve.hpp"
#include "hybridsim/quantum/lindblad.hpp"
#include "hybridsim/quantum/operators.hpp"
#include "hybridsim/time_series.hpp"

// Spin-mechanics-cavity dynamics on the layout (spin:2, mech:N_m, cav:N_c).
// Spin basis (|-1>, |0>): index 0 is the excited level |-1>, sigma_+ = |-1><0|.
namespace hybridsim::interface {

using quantum::cplx;

struct InterfaceCutoffs {
  std::size_t mechanics = 6;
  std::size_t cavity = 4;
};

struct TripartiteParams {
  double omega_plus = 0.0;  // spin transition, rad/s
  double omega_m = 0.0;     // rad/s
  double delta = 0.0;       // cavity frequency in the drive frame, rad/s
  double g = 0.0;           // photon-phonon, rad/s
  double lambda = 0.0;      // spin-phonon, rad/s
  double kappa = 0.0;       // 1/s
  double gamma_m = 0.0;     // 1/s
  double gamma_s = 0.0;     // spin dephasing, 1/s, enters as gamma_s D[sigma_z]
  double n_th = 0.0;
  InterfaceCutoffs cutoffs;
  // Keep the g (a^dag b^dag + a b) terms dropped by the rotating-wave step.
  bool counter_rotating = false;

  void validate() const;
};

quantum::HilbertLayout tripartite_layout(const InterfaceCutoffs& cutoffs);

// (omega_+/2) sigma_z + omega_m b^dag b + Delta a^dag a + g (a^dag b + a b^dag)
// + lambda (b sigma_+ + b^dag sigma_-).
quantum::QOperator build_tripartite_hamiltonian(const TripartiteParams& p);

// a^dag a + b^dag b + |-1><-1|; commutes with the rotating-wave Hamiltonian.
quantum::QOperator excitation_number(const quantum::HilbertLayout& layout);

// Photon-phonon coupling as a function of time (rad/s). Empty: constant p.g.
using CouplingProfile = std::function<double(double)>;

// Master equation with kappa D[a] + gamma_s D[sigma_z] + gamma_m (n_th+1) D[b]
// + gamma_m n_th D[b^dag], written in the frame rotating at `frame` for every
// excitation (H - frame * N_exc). The dissipators are unchanged by that
// rotation, so populations and reduced-state moduli equal the lab-frame ones.
quantum::LindbladModel tripartite_master_equation(const TripartiteParams& p, double frame,
                                                  const CouplingProfile& g_of_t = {});

// Cavity vacuum, spin in `spin` (amplitudes of |-1>, |0>), beam thermal with
// mean n_m on the truncated mode.
quantum::DensityMatrix tripartite_initial_state(const quantum::HilbertLayout& layout, const Eigen::Vector2cd& spin,
                                                double n_m);

// Eigenvalues of the one-excitation block of the Hamiltonian, measured from
// the ground energy -omega_+/2. Sorted ascending.
Eigen::Vector3d single_excitation_spectrum(const TripartiteParams& p);

struct RabiOptions {
  double t_max = 0.0;
  std::size_t samples = 401;
  bool dissipation = true;
  double n_m0 = 0.3;
  quantum::EvolveOptions evolve;
};

struct RabiResult {
  TimeSeries series;  // P_spin (population of |-1>), n_a, n_b, n_exc
  double t_half = 0.0;  // pi / sqrt(g^2 + lambda^2)
  std::vector<double> photon_distribution;  // cavity Fock populations at t_half
  quantum::InvariantReport invariants;
};

// Spin excited, cavity empty, beam thermal. t_half is inserted into the grid
// when it falls inside [0, t_max].
RabiResult rabi_scenario(const TripartiteParams& p, const RabiOptions& options);

struct PolaritonBasis {
  double theta = 0.0;  // tan(theta) = lambda / g
  double omega = 0.0;
  double omega_plus = 0.0;   // Omega + sqrt(g^2 + lambda^2)
  double omega_minus = 0.0;  // Omega - sqrt(g^2 + lambda^2)
  quantum::QOperator dark;    // cos(theta) sigma_- - sin(theta) a
  quantum::QOperator bright;  // cos(theta) a + sin(theta) sigma_-
  quantum::QOperator polaron_plus;   // (P_b + b)/sqrt(2)
  quantum::QOperator polaron_minus;  // (P_b - b)/sqrt(2)
};

// Throws std::invalid_argument when g = lambda = 0.
PolaritonBasis polariton_basis(double g, double lambda, double omega, const quantum::HilbertLayout& layout);

// g (a^dag b + a b^dag) + lambda (b sigma_+ + b^dag sigma_-).
quantum::QOperator interaction_hamiltonian(double g, double lambda, const quantum::HilbertLayout& layout);

// Spin |0>, both modes empty.
Eigen::VectorXcd tripartite_vacuum(const quantum::HilbertLayout& layout);

// || H_int P_d^dag |vac> ||.
double dark_polariton_check(const PolaritonBasis& basis, const quantum::QOperator& h_int);

}  // namespace hybridsim::interface
