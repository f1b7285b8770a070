#include "hybridsim/numerics/dopri5.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hybridsim::numerics {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

}  // namespace

DormandPrince45::DormandPrince45(std::size_t dimension, OdeRhs rhs, OdeOptions options,
                                 const kernels::KernelTable& kernels)
    : n_(dimension), rhs_(std::move(rhs)), options_(options), kernels_(&kernels) {
  if (!(options_.rtol > 0.0) || !(options_.atol > 0.0)) {
    throw std::invalid_argument("DormandPrince45: tolerances must be positive");
  }
  for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &stage_, &next_, &err_}) v->resize(n_);
  h_ = options_.initial_step;
}

void DormandPrince45::eval(double t, const double* y, double* dydt) {
  rhs_(t, y, dydt);
  ++stats_.rhs_evaluations;
}

double DormandPrince45::estimate_initial_step(double t, std::span<const double> y, double span) {
  const auto& k = *kernels_;
  std::vector<double> zero(n_, 0.0);
  // Scaled norms with scale atol + rtol*|y|.
  const double d0 = k.scaled_max_error(n_, y.data(), y.data(), y.data(), options_.atol, options_.rtol);
  const double d1 = k.scaled_max_error(n_, k1_.data(), y.data(), y.data(), options_.atol, options_.rtol);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min({h0, span, options_.max_step});
  std::copy(y.begin(), y.end(), stage_.begin());
  k.axpy(n_, h0, k1_.data(), stage_.data());
  eval(t + h0, stage_.data(), k2_.data());
  for (std::size_t i = 0; i < n_; ++i) err_[i] = (k2_[i] - k1_[i]) / h0;
  const double d2 = k.scaled_max_error(n_, err_.data(), y.data(), y.data(), options_.atol, options_.rtol);
  const double h1 = (std::max(d1, d2) <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                : std::pow(0.01 / std::max(d1, d2), 1.0 / 5.0);
  return std::min({100.0 * h0, h1, span, options_.max_step});
}

void DormandPrince45::integrate(double& t, double t_end, std::span<double> y, const PostStepHook& post_step) {
  if (y.size() != n_) throw std::invalid_argument("DormandPrince45: state dimension mismatch");
  if (!(t_end > t)) {
    if (t_end == t) return;
    throw std::invalid_argument("DormandPrince45: t_end must not precede t");
  }
  const auto& k = *kernels_;
  if (!fsal_valid_) {
    eval(t, y.data(), k1_.data());
    fsal_valid_ = true;
  }
  if (!(h_ > 0.0)) h_ = estimate_initial_step(t, y, t_end - t);

  double* yp = y.data();
  while (t < t_end) {
    if (stats_.accepted + stats_.rejected >= options_.max_steps) {
      throw StepSizeUnderflow("DormandPrince45: exceeded max_steps");
    }
    const double remaining = t_end - t;
    double h = std::min({h_, options_.max_step, remaining});
    const bool clipped = h < h_;
    // Land exactly on t_end when the remainder is within rounding.
    if (remaining - h <= 1e-12 * std::abs(t_end)) h = remaining;
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      std::ostringstream os;
      os << "DormandPrince45: step size underflow at t=" << t << " (h=" << h << ")";
      throw StepSizeUnderflow(os.str());
    }

    // One fused pass per stage: out = y + h * sum_j a_j k_j.
    auto combine = [&](const double* base, std::initializer_list<std::pair<double, const std::vector<double>*>> terms,
                       std::vector<double>& out) {
      double coeffs[7];
      const double* srcs[7];
      std::size_t count = 0;
      for (const auto& [coef, kv] : terms) {
        coeffs[count] = h * coef;
        srcs[count] = kv->data();
        ++count;
      }
      k.linear_combination(n_, base, count, coeffs, srcs, out.data());
    };

    combine(yp, {{a21, &k1_}}, stage_);
    eval(t + c2 * h, stage_.data(), k2_.data());
    combine(yp, {{a31, &k1_}, {a32, &k2_}}, stage_);
    eval(t + c3 * h, stage_.data(), k3_.data());
    combine(yp, {{a41, &k1_}, {a42, &k2_}, {a43, &k3_}}, stage_);
    eval(t + c4 * h, stage_.data(), k4_.data());
    combine(yp, {{a51, &k1_}, {a52, &k2_}, {a53, &k3_}, {a54, &k4_}}, stage_);
    eval(t + c5 * h, stage_.data(), k5_.data());
    combine(yp, {{a61, &k1_}, {a62, &k2_}, {a63, &k3_}, {a64, &k4_}, {a65, &k5_}}, stage_);
    eval(t + h, stage_.data(), k6_.data());
    combine(yp, {{b1, &k1_}, {b3, &k3_}, {b4, &k4_}, {b5, &k5_}, {b6, &k6_}}, next_);
    eval(t + h, next_.data(), k7_.data());
    combine(nullptr, {{e1, &k1_}, {e3, &k3_}, {e4, &k4_}, {e5, &k5_}, {e6, &k6_}, {e7, &k7_}}, err_);
    const double err = k.scaled_max_error(n_, err_.data(), yp, next_.data(), options_.atol, options_.rtol);

    if (!std::isfinite(err)) {
      ++stats_.rejected;
      h_ = 0.25 * h;
      continue;
    }
    if (err <= 1.0) {
      ++stats_.accepted;
      t = (h == remaining) ? t_end : t + h;
      std::copy(next_.begin(), next_.end(), yp);
      std::swap(k1_, k7_);
      const double factor = err == 0.0 ? kMaxFactor
                                       : std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, kMaxFactor);
      // A step shortened to hit t_end says nothing about the natural step.
      if (!clipped) h_ = h * factor;
      else h_ = std::max(h_, h * factor);
      if (post_step && post_step(t, y)) eval(t, yp, k1_.data());
    } else {
      ++stats_.rejected;
      h_ = h * std::max(kMinFactor, kSafety * std::pow(err, -0.2));
    }
  }
}

}  // namespace hybridsim::numerics
