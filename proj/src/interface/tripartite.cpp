#include "hybridsim/interface/tripartite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hybridsim/quantum/states.hpp"

namespace hybridsim::interface {

using quantum::HilbertLayout;
using quantum::LindbladModel;
using quantum::QOperator;

void TripartiteParams::validate() const {
  if (cutoffs.mechanics < 2 || cutoffs.cavity < 2) throw std::invalid_argument("TripartiteParams: cutoffs must be >= 2");
  if (!(kappa >= 0.0 && gamma_m >= 0.0 && gamma_s >= 0.0 && n_th >= 0.0)) {
    throw std::invalid_argument("TripartiteParams: rates and n_th must be non-negative");
  }
  for (double v : {omega_plus, omega_m, delta, g, lambda}) {
    if (!std::isfinite(v)) throw std::invalid_argument("TripartiteParams: frequencies must be finite");
  }
}

HilbertLayout tripartite_layout(const InterfaceCutoffs& c) {
  return HilbertLayout({{"spin", 2}, {"mech", c.mechanics}, {"cav", c.cavity}});
}

QOperator interaction_hamiltonian(double g, double lambda, const HilbertLayout& layout) {
  const auto a = quantum::destroy(layout, "cav");
  const auto b = quantum::destroy(layout, "mech");
  const auto s = quantum::spin_ops(layout, "spin");
  const auto ab = a.adjoint() * b;
  const auto bs = b * s.sigma_plus;
  return g * (ab + ab.adjoint()) + lambda * (bs + bs.adjoint());
}

QOperator build_tripartite_hamiltonian(const TripartiteParams& p) {
  p.validate();
  const auto layout = tripartite_layout(p.cutoffs);
  const auto s = quantum::spin_ops(layout, "spin");
  return 0.5 * p.omega_plus * s.sigma_z + p.omega_m * quantum::number(layout, "mech") +
         p.delta * quantum::number(layout, "cav") + interaction_hamiltonian(p.g, p.lambda, layout);
}

QOperator excitation_number(const HilbertLayout& layout) {
  return quantum::number(layout, "cav") + quantum::number(layout, "mech") +
         quantum::embed(layout, "spin", quantum::basis_projector(2, 0));
}

LindbladModel tripartite_master_equation(const TripartiteParams& p, double frame, const CouplingProfile& g_of_t) {
  p.validate();
  const auto layout = tripartite_layout(p.cutoffs);
  const auto a = quantum::destroy(layout, "cav");
  const auto b = quantum::destroy(layout, "mech");
  const auto s = quantum::spin_ops(layout, "spin");

  LindbladModel m(layout);
  // H - frame * N_exc, constant dropped
  m.add_hamiltonian(0.5 * (p.omega_plus - frame) * s.sigma_z + (p.omega_m - frame) * quantum::number(layout, "mech") +
                    (p.delta - frame) * quantum::number(layout, "cav"));
  const auto bs = b * s.sigma_plus;
  m.add_hamiltonian(p.lambda * (bs + bs.adjoint()));

  const auto ab = a.adjoint() * b;
  if (g_of_t) {
    m.add_hamiltonian(ab + ab.adjoint(), g_of_t);
  } else {
    m.add_hamiltonian(p.g * (ab + ab.adjoint()));
  }

  if (p.counter_rotating) {
    // g (a^dag b^dag e^{2i frame t} + h.c.)
    const auto x = a.adjoint() * b.adjoint();
    const auto re = x + x.adjoint();
    const auto im = cplx(0.0, 1.0) * (x - x.adjoint());
    const double w = 2.0 * frame;
    const double g0 = p.g;
    auto gt = g_of_t ? g_of_t : CouplingProfile([g0](double) { return g0; });
    if (w == 0.0) {
      m.add_hamiltonian(re, gt);
    } else {
      m.add_hamiltonian(re, [gt, w](double t) { return gt(t) * std::cos(w * t); });
      m.add_hamiltonian(im, [gt, w](double t) { return gt(t) * std::sin(w * t); });
    }
  }

  m.add_collapse(a, p.kappa);
  m.add_collapse(s.sigma_z, p.gamma_s);
  m.add_collapse(b, p.gamma_m * (p.n_th + 1.0));
  m.add_collapse(b.adjoint(), p.gamma_m * p.n_th);
  return m;
}

quantum::DensityMatrix tripartite_initial_state(const HilbertLayout& layout, const Eigen::Vector2cd& spin, double n_m) {
  if (!(spin.norm() > 0.0)) throw std::invalid_argument("tripartite_initial_state: zero spin state");
  const Eigen::Vector2cd psi = spin.normalized();
  const Eigen::VectorXd pm = quantum::thermal_populations(layout.dimension("mech"), n_m);
  return quantum::product_state(layout, {{"spin", psi * psi.adjoint()},
                                         {"mech", pm.cast<cplx>().asDiagonal().toDenseMatrix()}});
}

Eigen::Vector3d single_excitation_spectrum(const TripartiteParams& p) {
  // basis |-1,0,0>, |0,1,0>, |0,0,1>
  Eigen::Matrix3d h;
  h << p.omega_plus, p.lambda, 0.0,  //
      p.lambda, p.omega_m, p.g,      //
      0.0, p.g, p.delta;
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(h).eigenvalues();
}

RabiResult rabi_scenario(const TripartiteParams& params, const RabiOptions& options) {
  params.validate();
  if (!(options.t_max > 0.0) || options.samples < 2) throw std::invalid_argument("rabi_scenario: need t_max > 0, samples >= 2");
  TripartiteParams p = params;
  if (!options.dissipation) p.kappa = p.gamma_m = p.gamma_s = 0.0;

  RabiResult out;
  const double coupling = std::hypot(p.g, p.lambda);
  out.t_half = coupling > 0.0 ? std::numbers::pi / coupling : std::numeric_limits<double>::infinity();

  std::vector<double> times(options.samples);
  for (std::size_t k = 0; k < times.size(); ++k) {
    times[k] = options.t_max * static_cast<double>(k) / static_cast<double>(times.size() - 1);
  }
  if (out.t_half <= options.t_max && !std::binary_search(times.begin(), times.end(), out.t_half)) {
    times.insert(std::upper_bound(times.begin(), times.end(), out.t_half), out.t_half);
  }

  const auto layout = tripartite_layout(p.cutoffs);
  const auto model = tripartite_master_equation(p, p.omega_m);
  const auto rho0 = tripartite_initial_state(layout, Eigen::Vector2cd(1.0, 0.0), options.n_m0);
  const std::vector<quantum::Observable> obs = {
      quantum::observe("P_spin", quantum::embed(layout, "spin", quantum::basis_projector(2, 0))),
      quantum::observe("n_a", quantum::number(layout, "cav")),
      quantum::observe("n_b", quantum::number(layout, "mech")),
      quantum::observe("n_exc", excitation_number(layout)),
  };
  auto result = quantum::evolve(model, rho0, times, obs, options.evolve, [&](double t, const Eigen::MatrixXcd& rho) {
    if (t != out.t_half) return;
    const auto cav = quantum::partial_trace(layout, rho, {"cav"});
    out.photon_distribution.resize(static_cast<std::size_t>(cav.rows()));
    for (Eigen::Index n = 0; n < cav.rows(); ++n) out.photon_distribution[static_cast<std::size_t>(n)] = cav(n, n).real();
  });
  out.series = std::move(result.series);
  out.invariants = result.invariants;
  return out;
}

PolaritonBasis polariton_basis(double g, double lambda, double omega, const HilbertLayout& layout) {
  const double coupling = std::hypot(g, lambda);
  if (!(coupling > 0.0)) throw std::invalid_argument("polariton_basis: g and lambda both zero");
  PolaritonBasis pb;
  pb.theta = std::atan2(lambda, g);
  pb.omega = omega;
  pb.omega_plus = omega + coupling;
  pb.omega_minus = omega - coupling;
  const double c = std::cos(pb.theta), s = std::sin(pb.theta);
  const auto a = quantum::destroy(layout, "cav");
  const auto b = quantum::destroy(layout, "mech");
  const auto sm = quantum::spin_ops(layout, "spin").sigma_minus;
  pb.dark = c * sm - s * a;
  pb.bright = c * a + s * sm;
  pb.polaron_plus = std::sqrt(0.5) * (pb.bright + b);
  pb.polaron_minus = std::sqrt(0.5) * (pb.bright - b);
  return pb;
}

Eigen::VectorXcd tripartite_vacuum(const HilbertLayout& layout) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  std::vector<std::size_t> levels(layout.size(), 0);
  levels[layout.index_of("spin")] = 1;
  v(static_cast<Eigen::Index>(layout.ravel(levels))) = 1.0;
  return v;
}

double dark_polariton_check(const PolaritonBasis& basis, const QOperator& h_int) {
  const auto& layout = basis.dark.layout();
  const Eigen::VectorXcd psi = basis.dark.adjoint().matrix() * tripartite_vacuum(layout);
  return (h_int.matrix() * psi).norm();
}

}  // namespace hybridsim::interface
