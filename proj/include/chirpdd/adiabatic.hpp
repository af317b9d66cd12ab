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

#pragma once

#include <utility>

#include "chirpdd/pulses.hpp"
#include "chirpdd/qmath.hpp"

namespace chirpdd::adiabatic {

struct AdiabaticState {
  double mixing_angle = 0.0;           // rad, [0, pi/2]
  double effective_rabi = 0.0;         // rad/s
  double nonadiabatic_coupling = 0.0;  // d(nu)/dt, rad/s
};

/// Mixing angle nu with tan(2 nu) = rabi / detuning, in [0, pi/2].
/// Throws std::invalid_argument when both arguments vanish or rabi < 0.
double mixing_angle(double rabi, double detuning);

/// Mixing angle, effective Rabi frequency and nonadiabatic coupling of an
/// Allen-Eberly pulse at time t, with the detuning offset `offset` subtracted.
AdiabaticState adiabatic_state(const pulses::PulseProfile& p, double offset, double t);

/// |dOmega/dt * D - Omega * dD/dt| / (2 (D^2 + Omega^2)^(3/2)), D = Delta - offset.
/// Throws std::invalid_argument for a non-AE pulse, std::domain_error when t
/// is outside the pulse window.
double adiabaticity_profile(const pulses::PulseProfile& p, double offset, double t);

/// Peak_rabi^2 T / (R/2), the lower-boundary adiabaticity parameter.
double lower_boundary_parameter(const pulses::PulseProfile& p);

/// Omega^2 / |dDelta/dt| evaluated where the bare levels cross.
/// Throws NoCrossingError for |offset| >= R/2.
double crossing_adiabaticity_ratio(const pulses::PulseProfile& p, double offset);

/// Time of the level crossing relative to the pulse center.
/// Throws NoCrossingError for |offset| >= R/2.
double crossing_shift(const pulses::PulseProfile& p, double offset);

/// 1 / |nu'| at the level crossing: 4 Omega0 T / sqrt(R^2 - 4 offset^2).
/// Throws NoCrossingError for |offset| >= R/2.
double transition_time(const pulses::PulseProfile& p, double offset);

/// Adiabatic-limit transition probability at t_c +- m T_tr / 2, k = 2 Omega0 / R.
/// Returns {p_plus, p_minus}. Throws std::invalid_argument for k <= 0 or m < 0.
std::pair<double, double> transition_prob_at_offsets(double k, double m);

/// Smallest R / Omega(t1) keeping the transfer error below eps_max, with the
/// small-Rabi approximation used for x != 0. x = 2 offset / R.
/// Throws std::invalid_argument for eps_max outside (0, 1/2], NoCrossingError
/// for |x| >= 1.
double min_chirp_ratio(double eps_max, double x = 0.0);

/// Same bound without the small-Rabi approximation (root of the quadratic in
/// (2 Omega / R)^2). Agrees with min_chirp_ratio at x = 0.
double min_chirp_ratio_exact(double eps_max, double x = 0.0);

/// Allen-Eberly transition probability on resonance. Analytic in R across
/// R = 2 peak_rabi (cos becomes cosh above that point).
double ae_transition_probability(double peak_rabi, double chirp_range, double char_time);

/// Demkov-Kunike transition probability for a sech/tanh pulse with chirp
/// amplitude detuning_amp = R/2 and static offset.
/// Throws std::domain_error at a Gamma pole.
double dk_transition_probability(double peak_rabi, double detuning_amp, double offset,
                                 double char_time);

/// Ideal adiabatic propagator in the bare basis for a sweep nu0 -> nu1 that
/// accumulates dynamic phase phi.
qmath::Unitary2 ideal_rap_propagator(double nu0, double nu1, double phi);

/// |U_21|^2 of ideal_rap_propagator.
double ideal_rap_probability(double nu0, double nu1, double phi);

/// Toggling-frame weight of the sensed field. +1 before the first pulse,
/// cos(2 nu) with a bookkeeping sign inside each pulse, and held at the edge
/// value between pulses.
double modulation_function(double t, const pulses::SequenceSpec& seq, double offset);

/// Integral of g |cos(omega_s t')| from 0 to t.
/// Throws std::invalid_argument for g < 0, omega_s <= 0 or t < 0.
double accumulated_phase(double t, double g, double omega_s);

}  // namespace chirpdd::adiabatic
