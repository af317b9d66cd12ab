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

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "chirpdd/engine.hpp"
#include "chirpdd/qmath.hpp"

namespace chirpdd::analysis {

/// Imperfect phased pulse: transition error eps, dynamic phase alpha and
/// propagator phase beta, applied once per entry of `phases`.
struct PulseErrorModel {
  double eps = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> phases;

  void validate() const;
};

/// Single-pulse propagator of the error model with phase phi.
qmath::Unitary2 phased_pulse(double eps, double alpha, double beta, double phi);

/// Product over the phase list, first phase applied first.
qmath::Unitary2 sequence_propagator(const PulseErrorModel& model);

/// Re(Tr(U0^dagger U)) / 2 against the same sequence at eps = 0.
double sequence_fidelity(const PulseErrorModel& model);

struct FidelityPoint {
  double eps = 0.0;
  double infidelity = 0.0;
};

struct FidelityScaling {
  std::vector<FidelityPoint> points;
  double exponent = 0.0;     // least-squares slope of log(1 - F) on log eps
  double coefficient = 0.0;  // geometric mean of (1 - F) / eps^round(exponent)
};

/// Infidelity on the eps grid and its power-law fit. Throws
/// std::invalid_argument for fewer than two grid points or eps outside (0, 1].
FidelityScaling fidelity_scaling(std::span<const double> phases, double alpha, double beta,
                                 std::span<const double> eps_grid);

/// Log-spaced grid from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

enum class FitStatus {
  Converged,
  Extrapolated,  // T2 beyond the sampled span
  LowerBound,    // no decay resolved; T2 set to the span
};

std::string to_string(FitStatus s);

/// amplitude * exp(-(t / t2)^stretch) + offset
struct DecayFit {
  double t2 = 0.0;
  double stretch = 1.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double residual_norm = 0.0;
  FitStatus status = FitStatus::Converged;
  int points_used = 0;

  double evaluate(double t) const;
};

struct DecayFitOptions {
  // Noiseless signal reference. When non-empty the fit runs on the envelope
  // (y - 1/2) / (ref - 1/2) weighted by 2 |ref - 1/2|, skipping points where
  // |ref - 1/2| < min_reference.
  std::vector<double> reference;
  double min_reference = 0.05;
  // Fix the offset to this value instead of fitting it. NaN means free for
  // raw data and zero for an envelope fit.
  double fixed_offset = std::numeric_limits<double>::quiet_NaN();
};

/// Least-squares stretched-exponential fit. Throws FitError for fewer than 6
/// usable points or when no start converges.
DecayFit fit_decay(std::span<const double> times, std::span<const double> values,
                   const DecayFitOptions& options = {});
DecayFit fit_decay(const engine::EnsembleResult& result, const DecayFitOptions& options = {});

/// sigma / |slope| * sqrt(t_m). Throws std::domain_error for slope == 0 and
/// std::invalid_argument for t_m <= 0.
double sensitivity(double sigma_signal, double slope, double t_m);

struct SlopeEstimate {
  double slope = 0.0;
  double standard_error = 0.0;
};

/// (S_hi - S_lo) / delta at sample index k, with the combined standard error.
SlopeEstimate finite_difference_slope(const engine::EnsembleResult& lo,
                                      const engine::EnsembleResult& hi, double delta,
                                      std::size_t k);

struct BandwidthReport {
  double lower_bound = 0.0;   // pi (b^2 / 12 tau)^(1/3), rad/s
  double upper_bound = 0.0;   // pi^2 Omega0^2 / (4 Delta_inh), rad/s
  double error_ratio = 0.0;   // eps_RAP / eps_rect ~ omega_s^2 / Omega0^2
  bool lower_ok = false;      // omega_s at least 3x above the lower bound
  bool upper_ok = false;      // omega_s at least 3x below the upper bound
  bool in_window() const { return lower_ok && upper_ok; }
};

/// Advisory frequency window. Throws std::invalid_argument for
/// non-positive inputs.
BandwidthReport bandwidth_report(double peak_rabi, double inhomogeneous_width, double b,
                                 double tau, double omega_s);

}  // namespace chirpdd::analysis
