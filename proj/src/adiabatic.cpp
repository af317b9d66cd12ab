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

#include "chirpdd/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chirpdd/error.hpp"

namespace chirpdd::adiabatic {

using pulses::PulseModel;
using pulses::PulseProfile;
using qmath::Complex;
using qmath::kPi;

namespace {

void require_ae(const PulseProfile& p, const char* who) {
  if (p.model != PulseModel::AllenEberly && p.model != PulseModel::HalfRAP) {
    throw std::invalid_argument(std::string(who) + ": needs an Allen-Eberly pulse");
  }
}

// x = 2 offset / R, with the chirp direction folded in.
double crossing_fraction(const PulseProfile& p, double offset, const char* who) {
  require_ae(p, who);
  const double half_range = 0.5 * p.chirp_range;
  if (!(std::abs(offset) < half_range)) {
    throw NoCrossingError(std::string(who) + ": offset lies outside the chirp range");
  }
  return offset / half_range;
}

}  // namespace

double mixing_angle(double rabi, double detuning) {
  if (!std::isfinite(rabi) || !std::isfinite(detuning)) {
    throw std::invalid_argument("mixing_angle: non-finite input");
  }
  if (rabi < 0.0) throw std::invalid_argument("mixing_angle: negative Rabi frequency");
  if (rabi == 0.0 && detuning == 0.0) {
    throw std::invalid_argument("mixing_angle: Hamiltonian vanishes, angle undefined");
  }
  return 0.5 * std::atan2(rabi, detuning);
}

AdiabaticState adiabatic_state(const PulseProfile& p, double offset, double t) {
  require_ae(p, "adiabatic_state");
  const auto env = pulses::ae_envelope(t, p);
  const double d = env.detuning - offset;
  const double u = (t - p.center) / p.char_time;
  const double sech = 1.0 / std::cosh(u);
  const double rabi_dot = -env.rabi * std::tanh(u) / p.char_time;
  const double det_dot = p.chirp_sign * 0.5 * p.chirp_range * sech * sech / p.char_time;
  AdiabaticState s;
  s.effective_rabi = std::hypot(env.rabi, d);
  s.mixing_angle = mixing_angle(env.rabi, d);
  s.nonadiabatic_coupling =
      (rabi_dot * d - env.rabi * det_dot) / (2.0 * s.effective_rabi * s.effective_rabi);
  return s;
}

double adiabaticity_profile(const PulseProfile& p, double offset, double t) {
  require_ae(p, "adiabaticity_profile");
  if (!p.contains(t)) throw std::domain_error("adiabaticity_profile: t outside the pulse window");
  const auto s = adiabatic_state(p, offset, t);
  return std::abs(s.nonadiabatic_coupling) / s.effective_rabi;
}

double lower_boundary_parameter(const PulseProfile& p) {
  require_ae(p, "lower_boundary_parameter");
  if (!(p.chirp_range > 0.0)) throw NoCrossingError("lower_boundary_parameter: zero chirp range");
  return p.peak_rabi * p.peak_rabi * p.char_time / (0.5 * p.chirp_range);
}

double crossing_shift(const PulseProfile& p, double offset) {
  const double x = crossing_fraction(p, offset, "crossing_shift");
  return p.chirp_sign * p.char_time * std::atanh(x);
}

double crossing_adiabaticity_ratio(const PulseProfile& p, double offset) {
  const double x = crossing_fraction(p, offset, "crossing_adiabaticity_ratio");
  const double sech2 = 1.0 - x * x;
  const double rabi2 = p.peak_rabi * p.peak_rabi * sech2;
  const double det_dot = 0.5 * p.chirp_range * sech2 / p.char_time;
  return rabi2 / det_dot;
}

double transition_time(const PulseProfile& p, double offset) {
  (void)crossing_fraction(p, offset, "transition_time");
  const double r = p.chirp_range;
  return 4.0 * p.peak_rabi * p.char_time / std::sqrt(r * r - 4.0 * offset * offset);
}

std::pair<double, double> transition_prob_at_offsets(double k, double m) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("transition_prob_at_offsets: k must be > 0");
  }
  if (!(m >= 0.0) || !std::isfinite(m)) {
    throw std::invalid_argument("transition_prob_at_offsets: m must be >= 0");
  }
  if (m == 0.0) return {0.5, 0.5};
  const double sh = std::sinh(m * k);
  const double half = 0.5 / std::sqrt(1.0 + (k * k) / (sh * sh));
  return {0.5 + half, 0.5 - half};
}

namespace {
void check_chirp_args(double eps_max, double x) {
  if (!(eps_max > 0.0 && eps_max <= 0.5)) {
    throw std::invalid_argument("min_chirp_ratio: eps_max must lie in (0, 1/2]");
  }
  if (!(std::abs(x) < 1.0)) {
    throw NoCrossingError("min_chirp_ratio: detuning offset outside the chirp range");
  }
}
}  // namespace

double min_chirp_ratio(double eps_max, double x) {
  check_chirp_args(eps_max, x);
  if (x == 0.0) return std::sqrt(2.0 / eps_max - 4.0);
  const double x2 = x * x;
  return std::sqrt(2.0 * (1.0 + x2) / eps_max) / (1.0 - x2);
}

double min_chirp_ratio_exact(double eps_max, double x) {
  check_chirp_args(eps_max, x);
  if (eps_max == 0.5) {
    return 0.0;
  }
  // eps = (1 - (1 - x^2) / sqrt(((1-x)^2 + y^2)((1+x)^2 + y^2))) / 2, y = 2 Omega / R.
  const double x2 = x * x;
  const double q = (1.0 - x2) / (1.0 - 2.0 * eps_max);
  const double y2 = std::sqrt(4.0 * x2 + q * q) - (1.0 + x2);
  return 2.0 / std::sqrt(y2);
}

double ae_transition_probability(double peak_rabi, double chirp_range, double char_time) {
  if (!(peak_rabi > 0.0) || !(chirp_range >= 0.0) || !(char_time > 0.0)) {
    throw std::invalid_argument("ae_transition_probability: arguments must be positive");
  }
  const double a = 0.25 * kPi * char_time * chirp_range;
  const double disc = 4.0 * peak_rabi * peak_rabi - chirp_range * chirp_range;
  const double w = 0.25 * kPi * char_time * std::sqrt(std::abs(disc));
  if (disc >= 0.0) {
    const double c = std::cos(w) / std::cosh(a);
    return 1.0 - c * c;
  }
  // cosh(w) / cosh(a) <= 1 since w < a; the log form avoids overflow.
  const double lc = w - a + std::log1p(std::exp(-2.0 * w)) - std::log1p(std::exp(-2.0 * a));
  const double c2 = std::exp(2.0 * lc);
  return std::clamp(1.0 - c2, 0.0, 1.0);
}

double dk_transition_probability(double peak_rabi, double detuning_amp, double offset,
                                 double char_time) {
  if (!(peak_rabi > 0.0) || !(detuning_amp > 0.0) || !(char_time > 0.0) ||
      !std::isfinite(offset)) {
    throw std::invalid_argument("dk_transition_probability: arguments must be positive");
  }
  const double alpha = 0.5 * peak_rabi * char_time;
  const double delta = 0.5 * offset * char_time;
  const double chi = 0.5 * detuning_amp * char_time;
  const Complex s = std::sqrt(Complex{alpha * alpha - chi * chi, 0.0});
  const Complex i{0.0, 1.0};
  const Complex log_ratio =
      qmath::complex_log_gamma(0.5 + i * (delta + chi)) +
      qmath::complex_log_gamma(0.5 + i * (delta - chi)) -
      qmath::complex_log_gamma(0.5 + s + i * delta) - qmath::complex_log_gamma(0.5 - s + i * delta);
  const double stay = std::exp(2.0 * log_ratio.real());
  return std::clamp(1.0 - stay, 0.0, 1.0);
}

qmath::Unitary2 ideal_rap_propagator(double nu0, double nu1, double phi) {
  const double nr = nu1 - nu0;
  const double ns = nu1 + nu0;
  const double c = std::cos(0.5 * phi);
  const double s = std::sin(0.5 * phi);
  using namespace qmath::pauli;
  const qmath::Matrix2 m =
      Complex{c * std::cos(nr)} * kI + Complex{0.0, c * std::sin(nr)} * kY +
      Complex{0.0, s * std::cos(ns)} * kZ - Complex{0.0, s * std::sin(ns)} * kX;
  return qmath::Unitary2{m};
}

double ideal_rap_probability(double nu0, double nu1, double phi) {
  const double c = std::cos(0.5 * phi);
  const double s = std::sin(0.5 * phi);
  const double a = std::sin(nu1 - nu0);
  const double b = std::sin(nu1 + nu0);
  return c * c * a * a + s * s * b * b;
}

double modulation_function(double t, const pulses::SequenceSpec& seq, double offset) {
  const auto& ps = seq.pulses;
  // Last pulse that has started by t.
  auto it = std::upper_bound(ps.begin(), ps.end(), t, [](double v, const pulses::PlacedPulse& q) {
    return v < q.profile.window_start();
  });
  if (it == ps.begin()) return 1.0;
  const auto& placed = *(it - 1);
  const auto& p = placed.profile;
  const double before = (placed.index % 2 == 0) ? 1.0 : -1.0;
  if (!p.contains(t)) return -before;
  switch (p.model) {
    case PulseModel::AllenEberly:
    case PulseModel::HalfRAP: {
      const auto env = pulses::ae_envelope(t, p);
      const double d = env.detuning - offset;
      const double cos2nu = d / std::hypot(env.rabi, d);
      // Start of each sweep sits near cos(2 nu) = -chirp_sign.
      return -before * p.chirp_sign * cos2nu;
    }
    case PulseModel::Rectangular:
      return before * std::cos(p.peak_rabi * (t - p.window_start()));
    case PulseModel::Instantaneous: break;
  }
  return -before;
}

double accumulated_phase(double t, double g, double omega_s) {
  if (!(g >= 0.0) || !(omega_s > 0.0) || !(t >= 0.0)) {
    throw std::invalid_argument("accumulated_phase: need g >= 0, omega_s > 0, t >= 0");
  }
  if (g == 0.0) return 0.0;
  const double theta = omega_s * t;
  const double n = std::floor(theta / kPi);
  const double r = theta - n * kPi;
  const double partial = r <= 0.5 * kPi ? std::sin(r) : 2.0 - std::sin(r);
  return g * (2.0 * n + partial) / omega_s;
}

}  // namespace chirpdd::adiabatic
