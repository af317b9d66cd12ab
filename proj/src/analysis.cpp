// Copyright 2026 The chirpdd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chirpdd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "chirpdd/error.hpp"

namespace chirpdd::analysis {

using qmath::Complex;
using qmath::Matrix2;
using qmath::Unitary2;

void PulseErrorModel::validate() const {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("PulseErrorModel: eps outside [0, 1]");
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("PulseErrorModel: non-finite phase");
  }
}

Unitary2 phased_pulse(double eps, double alpha, double beta, double phi) {
  const double a = std::sqrt(eps);
  const double b = std::sqrt(1.0 - eps);
  return Unitary2{Matrix2{{a * std::polar(1.0, alpha), b * std::polar(1.0, -(beta + phi)),
                           -b * std::polar(1.0, beta + phi), a * std::polar(1.0, -alpha)}}};
}

Unitary2 sequence_propagator(const PulseErrorModel& model) {
  model.validate();
  Unitary2 u;
  for (double phi : model.phases) u = phased_pulse(model.eps, model.alpha, model.beta, phi) * u;
  return u;
}

double sequence_fidelity(const PulseErrorModel& model) {
  PulseErrorModel ideal = model;
  ideal.eps = 0.0;
  const auto u = sequence_propagator(model);
  const auto u0 = sequence_propagator(ideal);
  return 0.5 * (u0.adjoint() * u).matrix().trace().real();
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw std::invalid_argument("log_grid: bad range");
  std::vector<double> g(static_cast<std::size_t>(n));
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / (n - 1);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = std::exp(a + step * i);
  g.front() = lo;
  g.back() = hi;
  return g;
}

FidelityScaling fidelity_scaling(std::span<const double> phases, double alpha, double beta,
                                 std::span<const double> eps_grid) {
  if (eps_grid.size() < 2) throw std::invalid_argument("fidelity_scaling: need >= 2 grid points");
  FidelityScaling out;
  PulseErrorModel m{0.0, alpha, beta, {phases.begin(), phases.end()}};
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double e : eps_grid) {
    if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument("fidelity_scaling: eps outside (0, 1]");
    m.eps = e;
    const double inf = 1.0 - sequence_fidelity(m);
    out.points.push_back({e, inf});
    const double x = std::log(e);
    const double y = std::log(std::max(inf, std::numeric_limits<double>::min()));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(eps_grid.size());
  out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double k = std::round(out.exponent);
  double log_c = 0.0;
  for (const auto& p : out.points) {
    log_c += std::log(std::max(p.infidelity, std::numeric_limits<double>::min())) - k * std::log(p.eps);
  }
  out.coefficient = std::exp(log_c / n);
  return out;
}

std::string to_string(FitStatus s) {
  switch (s) {
    case FitStatus::Converged: return "converged";
    case FitStatus::Extrapolated: return "extrapolated";
    case FitStatus::LowerBound: return "lower_bound";
  }
  return "unknown";
}

double DecayFit::evaluate(double t) const {
  if (t <= 0.0) return amplitude + offset;
  return amplitude * std::exp(-std::pow(t / t2, stretch)) + offset;
}

namespace {

double stretch_of(double q) { return 4.0 / (1.0 + std::exp(-q)); }

// Parameters: amplitude, log(t2 / span), logit of stretch / 4, [offset].
// Residuals are weighted by w.
struct DecayFunctor : Eigen::DenseFunctor<double> {
  const std::vector<double>& u;
  const std::vector<double>& y;
  const std::vector<double>& w;
  bool free_offset;
  double fixed_offset;

  DecayFunctor(const std::vector<double>& u_, const std::vector<double>& y_,
               const std::vector<double>& w_, bool free, double c)
      : Eigen::DenseFunctor<double>(free ? 4 : 3, static_cast<int>(u_.size())),
        u(u_), y(y_), w(w_), free_offset(free), fixed_offset(c) {}

  double offset(const InputType& x) const { return free_offset ? x[3] : fixed_offset; }

  int operator()(const InputType& x, ValueType& f) const {
    const double p = stretch_of(x[2]);
    const double c = offset(x);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double z = u[i] > 0.0 ? std::exp(p * (std::log(u[i]) - x[1])) : 0.0;
      f[static_cast<Eigen::Index>(i)] = w[i] * (x[0] * std::exp(-z) + c - y[i]);
    }
    return 0;
  }

  int df(const InputType& x, JacobianType& j) const {
    const double p = stretch_of(x[2]);
    const double dp = p * (1.0 - 0.25 * p);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      double z = 0.0, lr = 0.0;
      if (u[i] > 0.0) {
        lr = std::log(u[i]) - x[1];
        z = std::exp(p * lr);
      }
      const double e = w[i] * std::exp(-z);
      j(r, 0) = e;
      j(r, 1) = x[0] * e * p * z;
      j(r, 2) = -x[0] * e * z * lr * dp;
      if (free_offset) j(r, 3) = w[i];
    }
    return 0;
  }
};

}  // namespace

DecayFit fit_decay(std::span<const double> times, std::span<const double> values,
                   const DecayFitOptions& options) {
  if (times.size() != values.size()) throw FitError("fit_decay: times and values differ in length");
  const bool use_ref = !options.reference.empty();
  if (use_ref && options.reference.size() != values.size()) {
    throw FitError("fit_decay: reference length differs from the data");
  }
  // With a reference, each point is weighted by the reference contrast so
  // that samples near its zero crossings carry little weight.
  std::vector<double> t, y, w;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double v = values[i];
    double weight = 1.0;
    if (use_ref) {
      const double r = options.reference[i] - 0.5;
      if (std::abs(r) < options.min_reference) continue;
      v = (values[i] - 0.5) / r;
      weight = 2.0 * std::abs(r);
    }
    if (!std::isfinite(v) || !std::isfinite(times[i]) || times[i] < 0.0) continue;
    t.push_back(times[i]);
    y.push_back(v);
    w.push_back(weight);
  }
  if (t.size() < 6) {
    throw FitError("fit_decay: " + std::to_string(t.size()) + " usable points, need at least 6");
  }
  const double span = *std::max_element(t.begin(), t.end());
  if (!(span > 0.0)) throw FitError("fit_decay: samples span zero time");

  DecayFit fit;
  fit.points_used = static_cast<int>(t.size());
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  const double scale = std::max({std::abs(*ymin), std::abs(*ymax), 1e-300});
  // An envelope decays to zero, so its offset is pinned unless given.
  const bool free_offset = std::isnan(options.fixed_offset) && !use_ref;
  const double c_fixed = std::isnan(options.fixed_offset) ? 0.0 : options.fixed_offset;

  if (*ymax - *ymin <= 1.0e-9 * scale) {
    fit.status = FitStatus::LowerBound;
    fit.t2 = span;
    fit.offset = free_offset ? y.front() : c_fixed;
    fit.amplitude = y.front() - fit.offset;
    return fit;
  }

  std::vector<double> u(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) u[i] = t[i] / span;

  // Earliest and latest values anchor the starting amplitude and offset.
  const std::size_t i0 = static_cast<std::size_t>(std::min_element(t.begin(), t.end()) - t.begin());
  const double y0 = y[i0];
  const double y_last = y.back();
  std::vector<double> offsets;
  if (free_offset) {
    offsets = use_ref ? std::vector<double>{y_last, 0.0}
                      : std::vector<double>{y_last, 0.5 * (y0 + y_last), 0.5};
  } else {
    offsets = {c_fixed};
  }

  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;
  DecayFunctor functor(u, y, w, free_offset, c_fixed);
  for (double c0 : offsets) {
    const double a0 = y0 - c0;
    if (a0 == 0.0) continue;
    // 1/e crossing of the normalized data as the time scale guess.
    double t_guess = 1.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if ((y[i] - c0) / a0 < std::exp(-1.0)) {
        t_guess = std::max(u[i], 1e-3);
        break;
      }
    }
    for (double p0 : {1.0, 2.0, 3.0}) {
      for (double tf : {1.0, 0.3, 3.0}) {
        Eigen::VectorXd x(free_offset ? 4 : 3);
        x[0] = a0;
        x[1] = std::log(t_guess * tf);
        x[2] = -std::log(4.0 / p0 - 1.0);
        if (free_offset) x[3] = c0;
        Eigen::LevenbergMarquardt<DecayFunctor> lm(functor);
        lm.setMaxfev(2000);
        lm.minimize(x);
        Eigen::VectorXd f(static_cast<Eigen::Index>(u.size()));
        functor(x, f);
        const double r = f.squaredNorm();
        if (std::isfinite(r) && x.allFinite() && r < best) {
          best = r;
          best_x = x;
        }
      }
    }
  }
  if (best_x.size() == 0) throw FitError("fit_decay: no start converged");

  fit.amplitude = best_x[0];
  fit.t2 = std::exp(best_x[1]) * span;
  fit.stretch = stretch_of(best_x[2]);
  fit.offset = free_offset ? best_x[3] : c_fixed;
  fit.residual_norm = std::sqrt(best);
  if (!(fit.t2 > 0.0) || !std::isfinite(fit.t2)) {
    throw FitError("fit_decay: fitted T2 is not finite");
  }
  fit.status = fit.t2 > span ? FitStatus::Extrapolated : FitStatus::Converged;
  return fit;
}

DecayFit fit_decay(const engine::EnsembleResult& result, const DecayFitOptions& options) {
  return fit_decay(result.times, result.mean, options);
}

double sensitivity(double sigma_signal, double slope, double t_m) {
  if (slope == 0.0) throw std::domain_error("sensitivity: zero slope, sensitivity undefined");
  if (!(t_m > 0.0)) throw std::invalid_argument("sensitivity: measurement time must be > 0");
  return sigma_signal / std::abs(slope) * std::sqrt(t_m);
}

SlopeEstimate finite_difference_slope(const engine::EnsembleResult& lo,
                                      const engine::EnsembleResult& hi, double delta,
                                      std::size_t k) {
  if (delta == 0.0) throw std::invalid_argument("finite_difference_slope: zero field step");
  if (k >= lo.mean.size() || k >= hi.mean.size()) {
    throw std::out_of_range("finite_difference_slope: sample index out of range");
  }
  return {(hi.mean[k] - lo.mean[k]) / delta, std::hypot(hi.sem[k], lo.sem[k]) / std::abs(delta)};
}

BandwidthReport bandwidth_report(double peak_rabi, double inhomogeneous_width, double b,
                                 double tau, double omega_s) {
  if (!(peak_rabi > 0.0) || !(inhomogeneous_width > 0.0) || !(b > 0.0) || !(tau > 0.0) ||
      !(omega_s > 0.0)) {
    throw std::invalid_argument("bandwidth_report: inputs must be positive");
  }
  constexpr double pi = qmath::kPi;
  BandwidthReport r;
  r.lower_bound = pi * std::cbrt(b * b / (12.0 * tau));
  r.upper_bound = pi * pi * peak_rabi * peak_rabi / (4.0 * inhomogeneous_width);
  r.error_ratio = omega_s * omega_s / (peak_rabi * peak_rabi);
  r.lower_ok = omega_s >= 3.0 * r.lower_bound;
  r.upper_ok = 3.0 * omega_s <= r.upper_bound;
  return r;
}

}  // namespace chirpdd::analysis
