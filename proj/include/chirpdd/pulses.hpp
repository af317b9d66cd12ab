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

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace chirpdd::pulses {

enum class PulseModel {
  AllenEberly,
  Rectangular,
  HalfRAP,
  // Zero-duration rotation by `angle` about the phase axis.
  Instantaneous,
};

// Which half of the underlying Allen-Eberly sweep a HalfRAP pulse keeps.
enum class HalfSide {
  Leading,   // far detuned -> resonance (preparation)
  Trailing,  // resonance -> far detuned (readout)
};

std::string_view to_string(PulseModel model);

/// One pulse. Rates in rad/s, times in s, phases in rad.
///
/// The detuning of an Allen-Eberly pulse is
///   chirp_sign * (chirp_range / 2) * tanh((t - center) / char_time)
/// and the Rabi frequency peak_rabi * sech((t - center) / char_time), both
/// zero outside the pulse window. A HalfRAP pulse is the same envelope
/// truncated at its center; `duration` is that of the full sweep.
struct PulseProfile {
  PulseModel model = PulseModel::AllenEberly;
  double peak_rabi = 0.0;
  double chirp_range = 0.0;
  double char_time = 0.0;
  double duration = 0.0;
  double phase = 0.0;
  double center = 0.0;
  int chirp_sign = 1;
  HalfSide half = HalfSide::Leading;
  double angle = 3.14159265358979323846;  // Instantaneous only

  double window_start() const;
  double window_end() const;
  double active_duration() const { return window_end() - window_start(); }
  bool contains(double t) const { return t >= window_start() && t < window_end(); }

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

struct Envelope {
  double rabi = 0.0;
  double detuning = 0.0;
};

PulseProfile allen_eberly(double peak_rabi, double chirp_range, double char_time,
                          double duration);
PulseProfile rectangular(double peak_rabi, double duration);
/// Rectangular pulse of area pi.
PulseProfile rectangular_pi(double peak_rabi);
PulseProfile instantaneous(double angle);

/// Allen-Eberly (or HalfRAP) envelope at absolute time t.
Envelope ae_envelope(double t, const PulseProfile& p);
Envelope rect_envelope(double t, const PulseProfile& p);
/// Dispatch on the model. Instantaneous pulses have no envelope.
Envelope envelope(double t, const PulseProfile& p);

/// (0, 1, 0, 1, 1, 0, 1, 0) * pi/2
std::vector<double> xy8_phases();

enum class Preparation { None, RectHalfPi, HalfRAP };
// Differential runs both readouts and reports (1 + P(+X) - P(-X)) / 2.
enum class ReadoutSign { PlusX, MinusX, Differential };

// Sawtooth restarts every Allen-Eberly pulse from the same detuning extreme,
// so the detuning (and the mixing angle) jumps at each pulse boundary.
// Alternating reverses the sweep in every other pulse, which keeps the
// detuning continuous.
enum class SweepMode { Sawtooth, Alternating };

struct SequenceOptions {
  Preparation preparation = Preparation::None;
  Preparation readout = Preparation::None;
  ReadoutSign readout_sign = ReadoutSign::PlusX;
  SweepMode sweep = SweepMode::Sawtooth;
};

struct PlacedPulse {
  PulseProfile profile;  // center, phase and chirp sign filled in
  int index = 0;         // position in the whole train, from 0
  int repetition = 0;    // pass through the phase pattern, from 0
};

/// A schedule of pulses. Each slot is gap/2 - pulse - gap/2, and slots
/// follow the optional preparation pulse back to back.
struct SequenceSpec {
  PulseProfile base;
  std::vector<double> phase_pattern;
  int repetitions = 1;
  double gap = 0.0;
  SequenceOptions options;

  std::optional<PulseProfile> preparation_pulse;
  std::vector<PlacedPulse> pulses;

  double dd_start = 0.0;  // end of preparation
  double dd_end = 0.0;    // end of the last slot

  double slot_duration() const { return base.duration + gap; }
  int pulses_per_block() const { return static_cast<int>(phase_pattern.size()); }
  int pulse_count() const { return static_cast<int>(pulses.size()); }

  double readout_duration() const;
  /// Preparation + all slots + readout.
  double total_duration() const { return dd_end + readout_duration(); }

  /// Readout pulse placed to start at time t, or nullopt without readout.
  /// `minus` selects the -X variant (readout phase shifted by pi).
  std::optional<PulseProfile> readout_pulse_at(double t, bool minus = false) const;
};

/// Lay out `repetitions` passes of `phases` on the base pulse.
/// Throws std::invalid_argument for an empty pattern, reps < 1, gap < 0,
/// an invalid base pulse, or a preparation that does not fit the base model.
SequenceSpec build_sequence(const PulseProfile& base, std::span<const double> phases,
                            int repetitions, double gap, const SequenceOptions& options = {});

}  // namespace chirpdd::pulses
