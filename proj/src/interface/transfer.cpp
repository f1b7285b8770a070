#include "hybridsim/interface/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hybridsim/errors.hpp"
#include "hybridsim/quantum/states.hpp"

namespace hybridsim::interface {

double PulseSchedule::at(double t) const {
  if (shape == Shape::constant) return g0;
  return g0 * std::exp(-t * t / width);
}

void PulseSchedule::validate(double lambda) const {
  if (!(g0 > 0.0) || !std::isfinite(g0)) throw ConfigError("pulse schedule: g0 must be positive");
  if (shape == Shape::gaussian && !(width > 0.0)) throw ConfigError("pulse schedule: width must be positive");
  if (!(t_end > t_start)) throw ConfigError("pulse schedule: t_end must exceed t_start");
  if (!(at(t_start) > lambda)) {
    std::ostringstream msg;
    msg << "pulse schedule: g(t_start) = " << at(t_start) << " must exceed lambda = " << lambda
        << " so the dark state starts on the spin";
    throw ConfigError(msg.str());
  }
}

PulseSchedule PulseSchedule::gaussian_from_peak(double g0, double width, double fraction) {
  PulseSchedule s;
  s.g0 = g0;
  s.width = width;
  s.t_start = 0.0;
  s.t_end = std::sqrt(-width * std::log(fraction));
  return s;
}

namespace {

// lambda |dg/dt| / (g^2 + lambda^2)^{3/2}, sampled finely over the window.
double max_adiabaticity(const PulseSchedule& s, double lambda) {
  if (s.shape == PulseSchedule::Shape::constant) return 0.0;
  constexpr int n = 4001;
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = s.t_start + (s.t_end - s.t_start) * k / (n - 1);
    const double g = s.at(t);
    const double dg = -2.0 * t / s.width * g;
    worst = std::max(worst, std::abs(lambda * dg) / std::pow(g * g + lambda * lambda, 1.5));
  }
  return worst;
}

struct Run {
  quantum::EvolveResult evolved;
  Eigen::MatrixXcd cavity;
};

Run run_transfer(const TripartiteParams& p, const PulseSchedule& s, const StirapOptions& o,
                 const std::vector<double>& times) {
  const auto layout = tripartite_layout(p.cutoffs);
  const auto model = tripartite_master_equation(p, p.omega_m, [s](double t) { return s.at(t); });
  const auto rho0 = tripartite_initial_state(layout, o.spin_state, o.n_m0);
  const std::vector<quantum::Observable> obs = {
      quantum::observe("P_spin", quantum::embed(layout, "spin", quantum::basis_projector(2, 0))),
      quantum::observe("n_a", quantum::number(layout, "cav")),
      quantum::observe("n_b", quantum::number(layout, "mech")),
  };
  Run r{quantum::evolve(model, rho0, times, obs, o.evolve), {}};
  r.cavity = quantum::partial_trace(layout, r.evolved.final_state.matrix(), {"cav"});
  return r;
}

}  // namespace

StirapResult stirap_transfer(const TripartiteParams& p, const PulseSchedule& schedule, const StirapOptions& options) {
  p.validate();
  schedule.validate(p.lambda);
  const double scale = std::max({std::abs(p.omega_m), std::abs(p.lambda), 1.0});
  if (std::abs(p.omega_plus - p.omega_m) > 1e-12 * scale || std::abs(p.delta - p.omega_m) > 1e-12 * scale) {
    throw ConfigError("stirap_transfer: requires omega_+ = Delta = omega_m");
  }
  if (options.samples < 2) throw ConfigError("stirap_transfer: samples must be >= 2");

  StirapResult out;
  out.max_adiabaticity = max_adiabaticity(schedule, p.lambda);
  if (schedule.shape == PulseSchedule::Shape::gaussian && !(schedule.at(schedule.t_end) < p.lambda)) {
    std::ostringstream msg;
    msg << "pulse schedule: window too short, g(t_end) = " << schedule.at(schedule.t_end) << " >= lambda = " << p.lambda
        << "; max |dtheta/dt|/sqrt(g^2+lambda^2) = " << out.max_adiabaticity;
    throw ConfigError(msg.str());
  }

  std::vector<double> times(options.samples);
  for (std::size_t k = 0; k < times.size(); ++k) {
    times[k] = schedule.t_start +
               (schedule.t_end - schedule.t_start) * static_cast<double>(k) / static_cast<double>(times.size() - 1);
  }
  const auto run = run_transfer(p, schedule, options, times);

  out.series = TimeSeries({"P_spin", "n_a", "n_b", "theta"});
  const auto& src = run.evolved.series;
  for (std::size_t k = 0; k < src.size(); ++k) {
    const auto row = src.row(k);
    const double v[4] = {row[0], row[1], row[2], std::atan2(p.lambda, schedule.at(src.times()[k]))};
    out.series.append(src.times()[k], v);
  }
  out.invariants = run.evolved.invariants;
  out.cavity_state = run.cavity;
  out.final_mixing_angle = std::atan2(p.lambda, schedule.at(schedule.t_end));

  // target c0 |0> + e^{i phi} c1 |1>
  auto fidelity_of = [&](const Eigen::MatrixXcd& rho, double phi) {
    const Eigen::Vector2cd spin = options.spin_state.normalized();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(rho.rows());
    psi(0) = spin(1);
    psi(1) = std::polar(1.0, phi) * spin(0);
    return (psi.adjoint() * rho * psi)(0, 0).real();
  };
  auto best_phase = [&](const Eigen::MatrixXcd& rho) {
    const Eigen::Vector2cd spin = options.spin_state.normalized();
    return -std::arg(std::conj(spin(1)) * spin(0) * rho(0, 1));
  };
  out.optimal_phase = best_phase(run.cavity);
  out.fidelity = fidelity_of(run.cavity, out.optimal_phase);
  out.fidelity_unmaximized = fidelity_of(run.cavity, 0.0);

  if (options.cutoff_check) {
    TripartiteParams doubled = p;
    doubled.cutoffs.mechanics *= 2;
    const auto again = run_transfer(doubled, schedule, options, times);
    out.cutoff_fidelity_change = std::abs(fidelity_of(again.cavity, best_phase(again.cavity)) - out.fidelity);
  }
  return out;
}

}  // namespace hybridsim::interface
