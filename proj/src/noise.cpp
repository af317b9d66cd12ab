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

#include "chirpdd/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chirpdd::noise {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void check_scale(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw std::invalid_argument(std::string("NoiseSpec: ") + name + " must be finite and >= 0");
  }
}

void check_ou(const OUParams& p, const char* name) {
  check_scale(p.sigma, name);
  if (p.enabled() && !(std::isfinite(p.tau) && p.tau > 0.0)) {
    throw std::invalid_argument(std::string("NoiseSpec: ") + name +
                                " correlation time must be > 0");
  }
}

}  // namespace

void NoiseSpec::validate() const {
  if (!std::isfinite(detuning_offset)) {
    throw std::invalid_argument("NoiseSpec: detuning_offset must be finite");
  }
  check_scale(static_fwhm, "static_fwhm");
  check_ou(ou_detuning, "ou_detuning");
  check_ou(ou_amplitude, "ou_amplitude");
  check_scale(per_rep_amplitude_sigma, "per_rep_amplitude_sigma");
}

double ou_step(double x, double dt, double b, double tau, double n) {
  if (dt == 0.0) return x;
  const double decay = std::exp(-dt / tau);
  // 1 - exp(-2 dt / tau) without cancellation for small dt.
  const double spread = -std::expm1(-2.0 * dt / tau);
  return x * decay + n * b * std::sqrt(spread);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t realization, Channel channel) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ (realization * 0xD1B54A32D192ED03ull));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(channel) * 0xAEF17502108EF2D9ull));
  return h;
}

double sample_static_detuning(const NoiseSpec& spec, Rng& rng) {
  if (spec.static_fwhm == 0.0) return 0.0;
  std::normal_distribution<double> normal;
  return spec.static_fwhm * kFwhmToSigma * normal(rng);
}

NoiseStream::NoiseStream(const NoiseSpec& spec, std::uint64_t realization, double noise_dt,
                         int repetitions)
    : spec_(spec),
      dt_(noise_dt),
      det_rng_(stream_seed(spec.master_seed, realization, Channel::OUDetuning)),
      amp_rng_(stream_seed(spec.master_seed, realization, Channel::OUAmplitude)) {
  spec_.validate();
  if (!(noise_dt > 0.0) || !std::isfinite(noise_dt)) {
    throw std::invalid_argument("NoiseStream: noise_dt must be > 0");
  }
  Rng static_rng(stream_seed(spec.master_seed, realization, Channel::StaticDetuning));
  static_ = spec_.detuning_offset + sample_static_detuning(spec_, static_rng);

  rep_offsets_.assign(static_cast<std::size_t>(std::max(repetitions, 1)), 0.0);
  if (spec_.per_rep_amplitude_sigma > 0.0) {
    Rng rep_rng(stream_seed(spec.master_seed, realization, Channel::RepAmplitude));
    std::normal_distribution<double> normal;
    for (auto& v : rep_offsets_) v = spec_.per_rep_amplitude_sigma * normal(rep_rng);
  }
  if (spec_.ou_detuning.enabled()) ou_det_ = spec_.ou_detuning.sigma * det_normal_(det_rng_);
  if (spec_.ou_amplitude.enabled()) ou_amp_ = spec_.ou_amplitude.sigma * amp_normal_(amp_rng_);
}

void NoiseStream::advance_to(double t) {
  const long long target = static_cast<long long>(std::floor(t / dt_));
  if (target < cell_) {
    throw std::logic_error("NoiseStream: queries must be monotone in time");
  }
  const auto& d = spec_.ou_detuning;
  const auto& a = spec_.ou_amplitude;
  for (; cell_ < target; ++cell_) {
    if (d.enabled()) ou_det_ = ou_step(ou_det_, dt_, d.sigma, d.tau, det_normal_(det_rng_));
    if (a.enabled()) ou_amp_ = ou_step(ou_amp_, dt_, a.sigma, a.tau, amp_normal_(amp_rng_));
  }
}

double NoiseStream::detuning_at(double t) {
  advance_to(t);
  return static_ + ou_det_;
}

double NoiseStream::amplitude_at(double t) {
  advance_to(t);
  return ou_amp_;
}

double NoiseStream::repetition_offset(int repetition) const {
  if (repetition < 0 || static_cast<std::size_t>(repetition) >= rep_offsets_.size()) return 0.0;
  return rep_offsets_[static_cast<std::size_t>(repetition)];
}

namespace {

// step(i) is the width of the cell ending at grid point i.
template <typename Step>
NoisePath fill_path(const NoiseSpec& spec, std::vector<double> grid, Step step,
                    std::uint64_t realization, int repetitions) {
  spec.validate();
  NoisePath path;
  path.times = std::move(grid);
  const std::size_t n = path.times.size();
  path.detuning.resize(n);
  path.amplitude.resize(n);

  Rng static_rng(stream_seed(spec.master_seed, realization, Channel::StaticDetuning));
  path.static_detuning = spec.detuning_offset + sample_static_detuning(spec, static_rng);

  path.repetition_offsets.assign(static_cast<std::size_t>(std::max(repetitions, 1)), 0.0);
  if (spec.per_rep_amplitude_sigma > 0.0) {
    Rng rep_rng(stream_seed(spec.master_seed, realization, Channel::RepAmplitude));
    std::normal_distribution<double> normal;
    for (auto& v : path.repetition_offsets) v = spec.per_rep_amplitude_sigma * normal(rep_rng);
  }

  const auto fill = [&](const OUParams& p, Channel ch, std::vector<double>& out) {
    if (!p.enabled()) return;  // already zero
    Rng rng(stream_seed(spec.master_seed, realization, ch));
    std::normal_distribution<double> normal;
    double x = p.sigma * normal(rng);
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) x = ou_step(x, step(i), p.sigma, p.tau, normal(rng));
      out[i] = x;
    }
  };
  fill(spec.ou_detuning, Channel::OUDetuning, path.detuning);
  fill(spec.ou_amplitude, Channel::OUAmplitude, path.amplitude);
  for (auto& v : path.detuning) v += path.static_detuning;
  return path;
}

}  // namespace

NoisePath generate_path(const NoiseSpec& spec, std::span<const double> grid,
                        std::uint64_t realization, int repetitions) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("generate_path: grid must be strictly increasing");
    }
  }
  return fill_path(
      spec, std::vector<double>(grid.begin(), grid.end()),
      [&](std::size_t i) { return grid[i] - grid[i - 1]; }, realization, repetitions);
}

NoisePath generate_path(const NoiseSpec& spec, double dt, std::size_t n,
                        std::uint64_t realization, int repetitions) {
  if (!(dt > 0.0)) throw std::invalid_argument("generate_path: dt must be > 0");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = static_cast<double>(i) * dt;
  // Constant width, so the values agree bit for bit with NoiseStream.
  return fill_path(
      spec, std::move(grid), [dt](std::size_t) { return dt; }, realization, repetitions);
}

}  // namespace chirpdd::noise
