#include "hybridsim/quantum/evolve.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hybridsim/errors.hpp"

namespace hybridsim::quantum {

namespace {

using RowMajorMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXcd to_matrix(const std::vector<cplx>& buffer, std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  return Eigen::Map<const RowMajorMatrix>(buffer.data(), m, m);
}

std::vector<cplx> to_buffer(const Eigen::MatrixXcd& rho) {
  std::vector<cplx> buffer(static_cast<std::size_t>(rho.size()));
  Eigen::Map<RowMajorMatrix>(buffer.data(), rho.rows(), rho.cols()) = rho;
  return buffer;
}

double buffer_trace(const std::vector<cplx>& buffer, std::size_t n) {
  double tr = 0.0;
  for (std::size_t i = 0; i < n; ++i) tr += buffer[i * n + i].real();
  return tr;
}

}  // namespace

Observable observe(std::string name, const QOperator& op, bool imaginary_part) {
  Eigen::MatrixXcd transposed = op.matrix().transpose();
  return {std::move(name), [m = std::move(transposed), imaginary_part](const Eigen::MatrixXcd& rho) {
            const cplx v = rho.cwiseProduct(m).sum();
            return imaginary_part ? v.imag() : v.real();
          }};
}

EvolveResult evolve(const LindbladModel& model, const DensityMatrix& rho0, const std::vector<double>& times,
                    const std::vector<Observable>& observables, const EvolveOptions& options,
                    const OutputHook& on_output) {
  if (!(rho0.layout() == model.layout())) {
    throw std::invalid_argument("evolve: initial state layout " + rho0.layout().describe() +
                                " does not match model " + model.layout().describe());
  }
  if (times.empty()) throw std::invalid_argument("evolve: empty time grid");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw std::invalid_argument("evolve: times must increase strictly");
  }

  const auto& kern = options.kernels ? *options.kernels : kernels::active();
  const std::size_t n = model.dim();
  LindbladRhs rhs(model, kern);
  std::vector<cplx> state = to_buffer(rho0.matrix());

  numerics::OdeOptions ode_opts;
  ode_opts.rtol = options.rtol;
  ode_opts.atol = options.atol;
  ode_opts.max_step = options.max_step;
  numerics::DormandPrince45 ode(
      2 * n * n,
      [&rhs](double t, const double* y, double* dy) {
        rhs(t, reinterpret_cast<const cplx*>(y), reinterpret_cast<cplx*>(dy));
      },
      ode_opts, kern);

  InvariantReport report;
  auto renormalize = [&](double, std::span<double>) {
    const double tr = buffer_trace(state, n);
    if (std::abs(tr - 1.0) <= options.renormalize_threshold) return false;
    const double s = 1.0 / tr;
    for (auto& v : state) v *= s;
    ++report.renormalizations;
    return true;
  };

  std::vector<std::string> names;
  names.reserve(observables.size());
  for (const auto& o : observables) names.push_back(o.name);
  TimeSeries series(names);
  std::vector<double> row(observables.size());

  auto record = [&](double t) {
    const Eigen::MatrixXcd rho = to_matrix(state, n);
    const double trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    double min_eig = report.min_eigenvalue;
    if (options.check_positivity) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
      min_eig = es.eigenvalues().minCoeff();
    }
    report.max_trace_error = std::max(report.max_trace_error, trace_error);
    report.max_hermiticity_error = std::max(report.max_hermiticity_error, herm);
    report.min_eigenvalue = std::min(report.min_eigenvalue, min_eig);
    ++report.checks;
    if (!report.within(options.tolerances)) {
      std::ostringstream os;
      os << "evolve: density-matrix invariants violated at t=" << t << " (|Tr-1|=" << trace_error
         << ", herm=" << herm << ", min_eig=" << min_eig << ")";
      throw InvariantViolation(os.str());
    }
    for (std::size_t k = 0; k < observables.size(); ++k) row[k] = observables[k].eval(rho);
    series.append(t, row);
    if (on_output) on_output(t, rho);
  };

  double t = times.front();
  std::span<double> y(reinterpret_cast<double*>(state.data()), 2 * n * n);
  record(t);
  for (std::size_t k = 1; k < times.size(); ++k) {
    ode.integrate(t, times[k], y, renormalize);
    record(t);
  }
  report.ode = ode.stats();
  DensityMatrix final_state(QOperator(model.layout(), to_matrix(state, n)), options.tolerances);
  return {std::move(series), std::move(final_state), report};
}

namespace {

double max_abs(const Eigen::SparseMatrix<cplx>& m) {
  double v = 0.0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(m, k); it; ++it) v = std::max(v, std::abs(it.value()));
  }
  return v;
}

Eigen::MatrixXcd hermitize_normalize(Eigen::MatrixXcd rho) {
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho / rho.trace().real();
}

}  // namespace

SteadyStateResult steady_state(const LindbladModel& model, const SteadyStateOptions& options) {
  if (!model.autonomous()) throw std::invalid_argument("steady_state: model has time-dependent terms");
  const std::size_t n = model.dim();
  const auto nn = static_cast<Eigen::Index>(n * n);
  const Eigen::SparseMatrix<cplx> l = liouvillian(model);
  const double scale = max_abs(l);

  if (scale == 0.0) {
    if (n == 1) {
      DensityMatrix s(QOperator(model.layout(), Eigen::MatrixXcd::Ones(1, 1)));
      return {std::move(s), 0.0, 0.0, "null-space"};
    }
    throw DegenerateSteadyState("steady_state: Liouvillian vanishes; every state is stationary");
  }

  if (static_cast<std::size_t>(nn) <= options.dense_check_limit) {
    Eigen::MatrixXcd dense = Eigen::MatrixXcd(l) / scale;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(dense);
    lu.setThreshold(1e-10);
    const auto kernel_dim = nn - lu.rank();
    if (kernel_dim > 1) {
      throw DegenerateSteadyState("steady_state: Liouvillian null space has dimension " + std::to_string(kernel_dim));
    }
  }

  // Replace the (0,0) equation, which is redundant with trace preservation,
  // by Tr rho = 1.
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(static_cast<std::size_t>(l.nonZeros()) + n);
  for (Eigen::Index k = 0; k < l.outerSize(); ++k) {
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(l, k); it; ++it) {
      if (it.row() != 0) triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value() / scale);
    }
  }
  for (std::size_t i = 0; i < n; ++i) triplets.emplace_back(0, static_cast<int>(i * n + i), cplx(1.0, 0.0));
  Eigen::SparseMatrix<cplx> a(nn, nn);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(nn);
  rhs[0] = 1.0;

  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> solver;
  solver.compute(a);
  if (solver.info() != Eigen::Success) {
    throw DegenerateSteadyState("steady_state: trace-constrained Liouvillian is singular (" +
                                solver.lastErrorMessage() + "); steady state is not unique");
  }
  Eigen::VectorXcd x = solver.solve(rhs);
  Eigen::MatrixXcd rho = hermitize_normalize(Eigen::Map<const RowMajorMatrix>(x.data(), static_cast<Eigen::Index>(n),
                                                                              static_cast<Eigen::Index>(n)));

  auto residual_of = [&](const Eigen::MatrixXcd& r) {
    std::vector<cplx> buf = to_buffer(r);
    Eigen::Map<const Eigen::VectorXcd> v(buf.data(), nn);
    Eigen::VectorXcd lv = l * v;
    return lv.cwiseAbs().maxCoeff();
  };

  double residual = residual_of(rho);
  std::string method = "null-space";
  if (residual / scale >= options.residual_tolerance && options.allow_integration_fallback) {
    // Relax from the linear-solve estimate; the slowest rate sets the horizon.
    double slowest = scale;
    for (const auto& c : model.collapse_terms()) slowest = std::min(slowest, c.rate);
    LindbladRhs rhs_op(model);
    std::vector<cplx> state = to_buffer(rho);
    std::vector<cplx> deriv(state.size());
    numerics::OdeOptions ode_opts;
    ode_opts.rtol = 1e-10;
    ode_opts.atol = 1e-13;
    numerics::DormandPrince45 ode(
        2 * n * n,
        [&rhs_op](double t, const double* y, double* dy) {
          rhs_op(t, reinterpret_cast<const cplx*>(y), reinterpret_cast<cplx*>(dy));
        },
        ode_opts);
    double t = 0.0;
    std::span<double> y(reinterpret_cast<double*>(state.data()), state.size() * 2);
    for (int chunk = 0; chunk < 200; ++chunk) {
      ode.integrate(t, t + 10.0 / slowest, y);
      rhs_op(t, state.data(), deriv.data());
      double d = 0.0;
      for (const auto& v : deriv) d = std::max(d, std::abs(v));
      if (d / scale < options.residual_tolerance) break;
    }
    rho = hermitize_normalize(to_matrix(state, n));
    residual = residual_of(rho);
    method = "integration";
  }
  if (residual / scale >= options.residual_tolerance) {
    std::ostringstream os;
    os << "steady_state: residual " << residual << " (relative " << residual / scale << ") above tolerance";
    throw NumericalError(os.str());
  }
  DensityMatrix state(QOperator(model.layout(), rho));
  return {std::move(state), residual, residual / scale, method};
}

}  // namespace hybridsim::quantum
