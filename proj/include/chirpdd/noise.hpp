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
#include <random>
#include <span>
#include <vector>

namespace chirpdd::noise {

/// Stationary Ornstein-Uhlenbeck process with standard deviation `sigma`
/// and correlation time `tau`. Disabled when sigma == 0.
struct OUParams {
  double sigma = 0.0;
  double tau = 0.0;

  bool enabled() const { return sigma > 0.0; }
};

struct NoiseSpec {
  double detuning_offset = 0.0;      // rad/s, deterministic, same in every realization
  double static_fwhm = 0.0;          // rad/s, Gaussian inhomogeneous broadening
  OUParams ou_detuning;              // sigma = b in rad/s
  OUParams ou_amplitude;             // sigma relative to the drive amplitude
  double per_rep_amplitude_sigma = 0.0;  // relative, one draw per repetition
  std::uint64_t master_seed = 0;

  /// Throws std::invalid_argument on negative or non-finite scales, or an
  /// enabled process with tau <= 0.
  void validate() const;
  bool silent() const {
    return detuning_offset == 0.0 && static_fwhm == 0.0 && !ou_detuning.enabled() &&
           !ou_amplitude.enabled() && per_rep_amplitude_sigma == 0.0;
  }
};

inline constexpr double kFwhmToSigma = 0.42466090014400953;  // 1 / (2 sqrt(2 ln 2))

/// Exact OU transition over dt given a unit normal draw n.
double ou_step(double x, double dt, double b, double tau, double n);

enum class Channel : std::uint64_t {
  StaticDetuning = 1,
  OUDetuning = 2,
  OUAmplitude = 3,
  RepAmplitude = 4,
};

/// Seed of one random stream, a hash of (master, realization, channel).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t realization, Channel channel);

using Rng = std::mt19937_64;

double sample_static_detuning(const NoiseSpec& spec, Rng& rng);

/// Noise of one realization on a uniform grid of width `noise_dt` starting at
/// t = 0. Values are held constant within each grid cell. Queries must be
/// monotone in time.
class NoiseStream {
 public:
  NoiseStream(const NoiseSpec& spec, std::uint64_t realization, double noise_dt,
              int repetitions = 1);

  /// Detuning error (offset + static + OU) and relative amplitude error
  /// (OU only) in the cell containing t.
  double detuning_at(double t);
  double amplitude_at(double t);
  /// Per-repetition relative amplitude offset.
  double repetition_offset(int repetition) const;

  double static_detuning() const { return static_; }
  double noise_dt() const { return dt_; }

 private:
  void advance_to(double t);

  NoiseSpec spec_;
  double dt_;
  double static_ = 0.0;
  std::vector<double> rep_offsets_;
  Rng det_rng_;
  Rng amp_rng_;
  std::normal_distribution<double> det_normal_;
  std::normal_distribution<double> amp_normal_;
  long long cell_ = 0;
  double ou_det_ = 0.0;
  double ou_amp_ = 0.0;
};

struct NoisePath {
  std::vector<double> times;      // left edge of each cell
  std::vector<double> detuning;   // rad/s
  std::vector<double> amplitude;  // relative
  std::vector<double> repetition_offsets;
  double static_detuning = 0.0;
};

/// Materialize the noise on a monotone grid. With a uniform grid
/// {0, dt, 2 dt, ...} this matches NoiseStream(spec, realization, dt) cell
/// for cell. Throws std::invalid_argument for a non-monotone grid.
NoisePath generate_path(const NoiseSpec& spec, std::span<const double> grid,
                        std::uint64_t realization, int repetitions = 1);

/// Uniform-grid convenience overload with n cells of width dt.
NoisePath generate_path(const NoiseSpec& spec, double dt, std::size_t n,
                        std::uint64_t realization, int repetitions = 1);

}  // namespace chirpdd::noise
