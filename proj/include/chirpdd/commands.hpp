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

#include <exception>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chirpdd/analysis.hpp"
#include "chirpdd/engine.hpp"
#include "chirpdd/scenario.hpp"

namespace chirpdd::commands {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kNumericalError = 3,
  kFitError = 4,
};

/// Map an exception to the process exit code.
int exit_code_for(const std::exception& e);

struct RunOptions {
  bool timing = false;        // add wall-clock runtime to JSON outputs
  std::ostream* log = nullptr;  // progress and warnings; null for silence
};

struct CommandResult {
  std::vector<std::string> files;
  int exit_code = kOk;
  std::string message;  // set when exit_code != 0
};

struct ScanRow {
  double peak_rabi = 0.0;    // rad/s
  double chirp_range = 0.0;  // rad/s
  double p_numeric = 0.0;
  double p_analytic = 0.0;
};

/// Transition probability |<2|U|1>|^2 of one pulse with a static detuning
/// offset, from the propagator.
double single_pulse_transition(const pulses::PulseProfile& p, double offset, double dt);

/// Closed-form transition probability of an Allen-Eberly pulse:
/// Demkov-Kunike (unbounded pulse) for R > 0, Rosen-Zener for R = 0 with the
/// area of the envelope truncated to `duration` (infinite: unbounded).
double analytic_transition(double peak_rabi, double chirp_range, double offset, double char_time,
                           double duration = std::numeric_limits<double>::infinity());

std::vector<ScanRow> pulse_scan_rows(const scenario::Scenario& sc);

struct DdRun {
  engine::EnsembleResult result;
  std::vector<double> reference;  // noiseless signal run, empty unless fitted as envelope
  std::optional<analysis::DecayFit> fit;
  std::string fit_model;  // "envelope", "raw" or "none"
  std::string fit_error;
  std::vector<std::string> warnings;
};

DdRun dd_run_data(const scenario::Scenario& sc, std::ostream* log = nullptr);

/// Diagnostic scalars with their formulas.
nlohmann::ordered_json analyze_report(const scenario::Scenario& sc);

CommandResult pulse_scan(const scenario::Scenario& sc, const RunOptions& opt = {});
CommandResult dd_run(const scenario::Scenario& sc, const RunOptions& opt = {});
CommandResult analyze(const scenario::Scenario& sc, const RunOptions& opt = {});
CommandResult fidelity_scan(const scenario::Scenario& sc, const RunOptions& opt = {});

/// Load the scenario and run the named command; never throws. Errors are
/// reported on opt.log.
CommandResult run(const std::string& command, const std::string& config_path,
                  const scenario::Overrides& overrides, const RunOptions& opt = {});

}  // namespace chirpdd::commands
