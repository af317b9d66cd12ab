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

#include <cstdint>
#include <string>
#include <vector>

#include "chirpdd/noise.hpp"
#include "chirpdd/pulses.hpp"
#include "chirpdd/qmath.hpp"

namespace chirpdd::engine {

/// Sensed field g cos(omega t + phase), entering the Hamiltonian along z.
struct SignalSpec {
  double amplitude = 0.0;  // g, rad/s
  double omega = 0.0;      // rad/s
  double phase = 0.0;      // rad

  void validate() const;
};

struct SampleSchedule {
  enum class Kind { EverySecondPulse, EveryBlock, FixedInterval, Explicit };
  Kind kind = Kind::EverySecondPulse;
  int block_pulses = 8;        // EveryBlock
  double interval = 0.0;       // FixedInterval, s
  std::vector<double> times;   // Explicit, s

  static SampleSchedule every_second_pulse() { return {}; }
  static SampleSchedule every_block(int n) { return {Kind::EveryBlock, n, 0.0, {}}; }
  static SampleSchedule fixed_interval(double s) { return {Kind::FixedInterval, 8, s, {}}; }
  static SampleSchedule explicit_times(std::vector<double> t) {
    return {Kind::Explicit, 8, 0.0, std::move(t)};
  }
};

// Auto starts in |1> when the sequence has a preparation pulse, else in |1_y>.
enum class InitialState { Auto, OneY, OneZ, Custom };

enum class Observable {
  P1y,   // 1/2 + Im rho_21
  P1mz,  // rho_22
};

struct SimulationConfig {
  double dt = 0.1e-9;
  double noise_dt = 0.0;  // 0: same as dt
  double horizon = 0.0;   // 0: end of the pulse train
  int n_realizations = 1;
  SampleSchedule schedule;
  InitialState initial = InitialState::Auto;
  qmath::Density2 custom_state;
  Observable observable = Observable::P1y;
  int threads = 1;

  double effective_noise_dt() const { return noise_dt > 0.0 ? noise_dt : dt; }
  /// Throws std::invalid_argument on dt <= 0, horizon < 0 or n < 1.
  void validate() const;
};

/// Human-readable warnings, e.g. a step too coarse for the pulse features.
std::vector<std::string> config_warnings(const pulses::SequenceSpec& seq,
                                         const SimulationConfig& cfg);

struct NoiseSample {
  double detuning = 0.0;      // rad/s
  double amplitude = 0.0;     // relative
};

/// Pauli coefficients of the full Hamiltonian at time t with the given noise
/// values. Pulses are looked up in the schedule, including the preparation.
qmath::HermitianCoeffs hamiltonian_at(double t, const pulses::SequenceSpec& seq,
                                      const NoiseSample& noise, const SignalSpec& sig);

/// Same, reading the noise from a materialized path (cell containing t) and
/// the per-repetition offset of the active pulse.
qmath::HermitianCoeffs hamiltonian_at(double t, const pulses::SequenceSpec& seq,
                                      const noise::NoisePath& path, const SignalSpec& sig);

/// Hamiltonian of a single pulse, without schedule lookup.
qmath::HermitianCoeffs pulse_hamiltonian(double t, const pulses::PulseProfile& p,
                                         const NoiseSample& noise, double rep_offset,
                                         const SignalSpec& sig);

struct Trajectory {
  std::vector<double> times;
  std::vector<qmath::Density2> states;  // before any readout pulse
  std::vector<double> observable;
  double final_unitarity_error = 0.0;
  std::uint64_t steps = 0;
};

/// Sample times of the schedule, clipped to the simulated span.
std::vector<double> sample_times(const pulses::SequenceSpec& seq, const SimulationConfig& cfg);

/// Propagate one noise realization. Throws NumericalError, naming the step,
/// when the accumulated propagator drifts from unitarity beyond 1e-8.
Trajectory evolve_realization(const pulses::SequenceSpec& seq, noise::NoiseStream& noise,
                              const SignalSpec& sig, const SimulationConfig& cfg);

/// Propagator of the whole schedule up to time t_end, for tests and diagnostics.
qmath::Unitary2 propagate(const pulses::SequenceSpec& seq, noise::NoiseStream& noise,
                          const SignalSpec& sig, double dt, double t_end);

struct EnsembleResult {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> sem;
  int n_realizations = 0;
  std::string config_digest;
  std::uint64_t seed = 0;
};

/// Monte-Carlo average over cfg.n_realizations. Bit-identical for any
/// thread count.
EnsembleResult run_ensemble(const pulses::SequenceSpec& seq, const noise::NoiseSpec& noise,
                            const SignalSpec& sig, const SimulationConfig& cfg);

/// Sequence with no pulses, for free evolution of length `duration`.
pulses::SequenceSpec free_evolution(double duration);

/// Ramsey 1/e time under the configured noise, from a Gaussian fit of the
/// coherence envelope over cfg.horizon. Returns +infinity when no decay is
/// resolved. Throws std::invalid_argument when cfg.horizon <= 0.
double free_induction_t2star(const noise::NoiseSpec& noise, const SimulationConfig& cfg);

}  // namespace chirpdd::engine
