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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chirpdd/engine.hpp"
#include "chirpdd/noise.hpp"
#include "chirpdd/pulses.hpp"

namespace chirpdd::scenario {

// NV electron spin, MHz per tesla.
inline constexpr double kGyromagneticMHzPerTesla = 28024.95;

/// Linear axis {start, stop, n} or an explicit value list, in SI units.
struct Axis {
  std::vector<double> values;
};

struct PulseScan {
  Axis peak_rabi;    // rad/s
  Axis chirp_range;  // rad/s
};

struct Diagnostics {
  double eps_max = 0.01;
  double offset = 0.0;  // rad/s
};

struct FidelityScan {
  std::vector<double> phases;  // rad
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> eps;
};

enum class FitMode { Auto, Envelope, Raw, None };

struct Output {
  std::string dir = ".";
  std::string prefix;  // empty: command name
  FitMode fit = FitMode::Auto;
};

struct Scenario {
  std::optional<pulses::PulseProfile> pulse;
  bool has_sequence = false;
  std::vector<double> phases = pulses::xy8_phases();
  int repetitions = 1;
  double gap = 0.0;
  pulses::SequenceOptions sequence_options;
  noise::NoiseSpec noise;
  engine::SignalSpec signal;
  engine::SimulationConfig simulation;
  Output output;
  std::optional<PulseScan> scan;
  Diagnostics diagnostics;
  std::optional<FidelityScan> fidelity;

  // Physics part of the document (everything but output and thread count),
  // with overrides applied. Its dump feeds the digest.
  nlohmann::json canonical;

  pulses::SequenceSpec sequence() const;
  std::uint64_t seed() const { return noise.master_seed; }
  std::string digest() const;
};

/// Command-line overrides, patched into the document before validation.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::optional<double> dt_ns;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
};

void apply_overrides(nlohmann::json& doc, const Overrides& o);

/// Validate and convert to SI units. Throws ConfigError naming the JSON
/// pointer of the first offending field; unknown keys are errors.
Scenario parse_scenario(const nlohmann::json& doc);

/// Read, override and parse. Syntax errors and unreadable files are
/// ConfigErrors at path "".
Scenario load_scenario(const std::string& path, const Overrides& o = {});

/// 16 hex digits of the 64-bit FNV-1a hash.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace chirpdd::scenario
