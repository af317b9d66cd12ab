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

#include "chirpdd/pulses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chirpdd::pulses {

namespace {
constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("PulseProfile: ") + what);
}
}  // namespace

std::string_view to_string(PulseModel model) {
  switch (model) {
    case PulseModel::AllenEberly: return "allen_eberly";
    case PulseModel::Rectangular: return "rectangular";
    case PulseModel::HalfRAP: return "half_rap";
    case PulseModel::Instantaneous: return "instantaneous";
  }
  return "unknown";
}

double PulseProfile::window_start() const {
  if (model == PulseModel::HalfRAP && half == HalfSide::Trailing) return center;
  return center - 0.5 * duration;
}

double PulseProfile::window_end() const {
  if (model == PulseModel::HalfRAP && half == HalfSide::Leading) return center;
  return center + 0.5 * duration;
}

void PulseProfile::validate() const {
  require(std::isfinite(phase) && std::isfinite(center), "phase and center must be finite");
  require(chirp_sign == 1 || chirp_sign == -1, "chirp_sign must be +1 or -1");
  if (model == PulseModel::Instantaneous) {
    require(duration == 0.0, "instantaneous pulse has zero duration");
    require(std::isfinite(angle), "rotation angle must be finite");
    return;
  }
  require(std::isfinite(peak_rabi) && peak_rabi > 0.0, "peak_rabi must be > 0");
  require(std::isfinite(duration) && duration > 0.0, "duration must be > 0");
  if (model == PulseModel::AllenEberly || model == PulseModel::HalfRAP) {
    require(std::isfinite(char_time) && char_time > 0.0, "char_time must be > 0");
    require(std::isfinite(chirp_range) && chirp_range >= 0.0, "chirp_range must be >= 0");
  }
}

PulseProfile allen_eberly(double peak_rabi, double chirp_range, double char_time,
                          double duration) {
  PulseProfile p;
  p.model = PulseModel::AllenEberly;
  p.peak_rabi = peak_rabi;
  p.chirp_range = chirp_range;
  p.char_time = char_time;
  p.duration = duration;
  p.validate();
  return p;
}

PulseProfile rectangular(double peak_rabi, double duration) {
  PulseProfile p;
  p.model = PulseModel::Rectangular;
  p.peak_rabi = peak_rabi;
  p.duration = duration;
  p.validate();
  return p;
}

PulseProfile rectangular_pi(double peak_rabi) {
  if (!(peak_rabi > 0.0)) throw std::invalid_argument("rectangular_pi: peak_rabi must be > 0");
  return rectangular(peak_rabi, kPi / peak_rabi);
}

PulseProfile instantaneous(double angle) {
  PulseProfile p;
  p.model = PulseModel::Instantaneous;
  p.angle = angle;
  p.validate();
  return p;
}

Envelope ae_envelope(double t, const PulseProfile& p) {
  if (p.model != PulseModel::AllenEberly && p.model != PulseModel::HalfRAP) {
    throw std::invalid_argument("ae_envelope: pulse is not an Allen-Eberly profile");
  }
  if (!p.contains(t)) return {};
  const double u = (t - p.center) / p.char_time;
  return {p.peak_rabi / std::cosh(u), p.chirp_sign * 0.5 * p.chirp_range * std::tanh(u)};
}

Envelope rect_envelope(double t, const PulseProfile& p) {
  if (p.model != PulseModel::Rectangular) {
    throw std::invalid_argument("rect_envelope: pulse is not rectangular");
  }
  if (!p.contains(t)) return {};
  return {p.peak_rabi, 0.0};
}

Envelope envelope(double t, const PulseProfile& p) {
  switch (p.model) {
    case PulseModel::AllenEberly:
    case PulseModel::HalfRAP: return ae_envelope(t, p);
    case PulseModel::Rectangular: return rect_envelope(t, p);
    case PulseModel::Instantaneous: return {};
  }
  return {};
}

std::vector<double> xy8_phases() {
  const double h = 0.5 * kPi;
  return {0.0, h, 0.0, h, h, 0.0, h, 0.0};
}

namespace {

// Half passages start from |1> and end on +y, so the preparation drives
// along y; the rectangular pulse rotates about -x.
PulseProfile make_half_pulse(const PulseProfile& base, Preparation kind) {
  PulseProfile p = base;
  p.chirp_sign = 1;
  if (kind == Preparation::HalfRAP) {
    if (base.model != PulseModel::AllenEberly) {
      throw std::invalid_argument("build_sequence: half-RAP preparation needs an Allen-Eberly base");
    }
    p.model = PulseModel::HalfRAP;
    p.half = HalfSide::Leading;
    p.phase = 0.5 * kPi;
    p.center = 0.5 * p.duration;
    return p;
  }
  if (base.model == PulseModel::Instantaneous) {
    throw std::invalid_argument("build_sequence: rectangular preparation needs a finite peak_rabi");
  }
  p.model = PulseModel::Rectangular;
  p.chirp_range = 0.0;
  p.duration = 0.5 * kPi / base.peak_rabi;
  p.phase = kPi;
  p.center = 0.5 * p.duration;
  return p;
}

double prep_duration(const std::optional<PulseProfile>& p) {
  return p ? p->active_duration() : 0.0;
}

}  // namespace

double SequenceSpec::readout_duration() const {
  const auto r = readout_pulse_at(0.0);
  return r ? r->active_duration() : 0.0;
}

std::optional<PulseProfile> SequenceSpec::readout_pulse_at(double t, bool minus) const {
  if (options.readout == Preparation::None) return std::nullopt;
  PulseProfile p = make_half_pulse(base, options.readout);
  if (p.model == PulseModel::HalfRAP) {
    // Mirror of the leading half: resonance back out to the far detuning.
    p.half = HalfSide::Trailing;
    p.chirp_sign = -1;
    p.center = t;
  } else {
    p.phase = 0.0;
    p.center = t + 0.5 * p.duration;
  }
  if (minus) p.phase += kPi;
  return p;
}

SequenceSpec build_sequence(const PulseProfile& base, std::span<const double> phases,
                            int repetitions, double gap, const SequenceOptions& options) {
  if (phases.empty()) throw std::invalid_argument("build_sequence: empty phase pattern");
  if (repetitions < 1) throw std::invalid_argument("build_sequence: repetitions must be >= 1");
  if (!std::isfinite(gap) || gap < 0.0) {
    throw std::invalid_argument("build_sequence: gap must be finite and >= 0");
  }
  if (base.model == PulseModel::HalfRAP) {
    throw std::invalid_argument("build_sequence: half-RAP is not a sequence pulse");
  }
  base.validate();

  SequenceSpec seq;
  seq.base = base;
  seq.base.center = 0.0;
  seq.phase_pattern.assign(phases.begin(), phases.end());
  seq.repetitions = repetitions;
  seq.gap = gap;
  seq.options = options;

  if (options.preparation != Preparation::None) {
    seq.preparation_pulse = make_half_pulse(base, options.preparation);
  }
  if (options.readout != Preparation::None) {
    (void)make_half_pulse(base, options.readout);  // validates the pairing
  }
  seq.dd_start = prep_duration(seq.preparation_pulse);

  const int n = repetitions * static_cast<int>(phases.size());
  const double slot = seq.slot_duration();
  seq.pulses.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    PlacedPulse placed;
    placed.profile = seq.base;
    placed.profile.phase = base.phase + phases[static_cast<std::size_t>(k) % phases.size()];
    placed.profile.center = seq.dd_start + k * slot + 0.5 * gap + 0.5 * base.duration;
    if (options.sweep == SweepMode::Alternating && (k % 2) == 1) {
      placed.profile.chirp_sign = -base.chirp_sign;
    }
    placed.index = k;
    placed.repetition = k / static_cast<int>(phases.size());
    seq.pulses.push_back(placed);
  }
  seq.dd_end = seq.dd_start + n * slot;
  return seq;
}

}  // namespace chirpdd::pulses
