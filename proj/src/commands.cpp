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

#include "chirpdd/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include "chirpdd/adiabatic.hpp"
#include "chirpdd/csv.hpp"
#include "chirpdd/error.hpp"

namespace chirpdd::commands {

using nlohmann::ordered_json;
using scenario::Scenario;

namespace {

constexpr double kMHz = 2.0 * qmath::kPi * 1.0e6;
constexpr double kUs = 1.0e-6;

void note(std::ostream* log, const std::string& line) {
  if (log) *log << line << '\n';
}

std::string output_path(const Scenario& sc, const char* command, const char* ext) {
  const std::string prefix = sc.output.prefix.empty() ? command : sc.output.prefix;
  std::filesystem::create_directories(sc.output.dir);
  return (std::filesystem::path(sc.output.dir) / (prefix + ext)).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void write_json(const std::string& path, const ordered_json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

ordered_json header(const Scenario& sc, const char* command) {
  ordered_json j;
  j["command"] = command;
  j["config_digest"] = sc.digest();
  j["seed"] = sc.seed();
  return j;
}

void csv_header(csv::Writer& w, const Scenario& sc, const char* command) {
  w.comment("command", command);
  w.comment("config_digest", sc.digest());
  w.comment("seed", std::to_string(sc.seed()));
}

const pulses::PulseProfile& require_pulse(const Scenario& sc) {
  if (!sc.pulse) throw ConfigError("/pulse", "required section is missing");
  return *sc.pulse;
}

// Null for NaN or infinite values, which JSON cannot carry.
ordered_json number_or_null(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

ordered_json entry(const char* formula, double value, const char* unit) {
  ordered_json e;
  e["formula"] = formula;
  e["value"] = number_or_null(value);
  e["unit"] = unit;
  return e;
}

template <class F>
ordered_json guarded(const char* formula, const char* unit, F&& f) {
  try {
    return entry(formula, f(), unit);
  } catch (const NoCrossingError& e) {
    ordered_json j = entry(formula, std::nan(""), unit);
    j["note"] = e.what();
    return j;
  }
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kConfigError;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return kConfigError;
  if (dynamic_cast<const NumericalError*>(&e)) return kNumericalError;
  if (dynamic_cast<const NoCrossingError*>(&e)) return kNumericalError;
  if (dynamic_cast<const FitError*>(&e)) return kFitError;
  return kFailure;
}

double single_pulse_transition(const pulses::PulseProfile& p, double offset, double dt) {
  const double zero[] = {0.0};
  const auto seq = pulses::build_sequence(p, zero, 1, 0.0);
  engine::SimulationConfig cfg;
  cfg.dt = dt;
  cfg.initial = engine::InitialState::OneZ;
  cfg.observable = engine::Observable::P1mz;
  cfg.schedule = engine::SampleSchedule::explicit_times({seq.dd_end});
  noise::NoiseSpec ns;
  ns.detuning_offset = offset;
  noise::NoiseStream stream(ns, 0, cfg.dt);
  const auto traj = engine::evolve_realization(seq, stream, engine::SignalSpec{}, cfg);
  return traj.observable.back();
}

double analytic_transition(double peak_rabi, double chirp_range, double offset, double char_time,
                           double duration) {
  if (chirp_range > 0.0) {
    return adiabatic::dk_transition_probability(peak_rabi, 0.5 * chirp_range, offset, char_time);
  }
  // Rosen-Zener with the area of the truncated sech envelope; exact on resonance.
  double area = qmath::kPi * peak_rabi * char_time;
  if (std::isfinite(duration)) {
    area = 4.0 * peak_rabi * char_time * std::atan(std::tanh(0.25 * duration / char_time));
  }
  const double s = std::sin(0.5 * area);
  const double sech = 1.0 / std::cosh(0.5 * qmath::kPi * offset * char_time);
  return s * s * sech * sech;
}

std::vector<ScanRow> pulse_scan_rows(const Scenario& sc) {
  const auto& base = require_pulse(sc);
  if (base.model != pulses::PulseModel::AllenEberly) {
    throw ConfigError("/pulse/model", "pulse-scan needs an allen_eberly pulse");
  }
  if (!sc.scan) throw ConfigError("/scan", "required section is missing");
  std::vector<ScanRow> rows;
  for (double r : sc.scan->chirp_range.values) {
    for (double w : sc.scan->peak_rabi.values) rows.push_back({w, r, 0.0, 0.0});
  }
  const double offset = sc.noise.detuning_offset;
  const double dt = sc.simulation.dt;
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(rows.size());
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < rows.size();) {
      try {
        pulses::PulseProfile p = base;
        p.peak_rabi = rows[i].peak_rabi;
        p.chirp_range = rows[i].chirp_range;
        rows[i].p_numeric = single_pulse_transition(p, offset, dt);
        rows[i].p_analytic =
            analytic_transition(p.peak_rabi, p.chirp_range, offset, p.char_time, p.duration);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(sc.simulation.threads, static_cast<int>(rows.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

CommandResult pulse_scan(const Scenario& sc, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = pulse_scan_rows(sc);
  note(opt.log, "pulse-scan: " + std::to_string(rows.size()) + " grid points");
  CommandResult res;
  const auto path = output_path(sc, "pulse_scan", ".csv");
  {
    auto out = open_out(path);
    csv::Writer w(out);
    csv_header(w, sc, "pulse-scan");
    const auto& p = *sc.pulse;
    w.comment("char_time_us", csv::format_number(p.char_time / kUs));
    w.comment("duration_us", csv::format_number(p.duration / kUs));
    w.comment("detuning_offset_mhz", csv::format_number(sc.noise.detuning_offset / kMHz));
    if (opt.timing) w.comment("runtime_s", csv::format_number(elapsed(t0)));
    w.header({"peak_rabi_mhz", "chirp_range_mhz", "p_numeric", "p_analytic"});
    for (const auto& r : rows) {
      w.row({r.peak_rabi / kMHz, r.chirp_range / kMHz, r.p_numeric, r.p_analytic});
    }
  }
  res.files.push_back(path);
  return res;
}

DdRun dd_run_data(const Scenario& sc, std::ostream* log) {
  if (!sc.has_sequence) throw ConfigError("/sequence", "required section is missing");
  const auto seq = sc.sequence();
  DdRun run;
  run.warnings = engine::config_warnings(seq, sc.simulation);
  for (const auto& w : run.warnings) note(log, "warning: " + w);
  note(log, "dd-run: " + std::to_string(seq.pulse_count()) + " pulses, " +
                std::to_string(sc.simulation.n_realizations) + " realizations");
  run.result = engine::run_ensemble(seq, sc.noise, sc.signal, sc.simulation);
  run.result.config_digest = sc.digest();

  // The noiseless run carries the ideal pattern of the sequence (XY pairs
  // alone flip |1_y>), so auto always fits the envelope against it.
  scenario::FitMode mode = sc.output.fit;
  if (mode == scenario::FitMode::Auto) mode = scenario::FitMode::Envelope;
  analysis::DecayFitOptions fo;
  if (mode == scenario::FitMode::Envelope) {
    auto cfg = sc.simulation;
    cfg.n_realizations = 1;
    run.reference = engine::run_ensemble(seq, noise::NoiseSpec{}, sc.signal, cfg).mean;
    fo.reference = run.reference;
  }
  run.fit_model = mode == scenario::FitMode::Envelope ? "envelope"
                  : mode == scenario::FitMode::Raw    ? "raw"
                                                      : "none";
  if (mode != scenario::FitMode::None) {
    try {
      run.fit = analysis::fit_decay(run.result, fo);
    } catch (const FitError& e) {
      run.fit_error = e.what();
    }
  }
  return run;
}

CommandResult dd_run(const Scenario& sc, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const DdRun run = dd_run_data(sc, opt.log);
  const double runtime = elapsed(t0);
  const auto& r = run.result;
  CommandResult res;

  const auto csv_path = output_path(sc, "dd_run", ".csv");
  {
    auto out = open_out(csv_path);
    csv::Writer w(out);
    csv_header(w, sc, "dd-run");
    w.comment("realizations", std::to_string(r.n_realizations));
    std::vector<std::string> cols = {"time_us", "mean", "sem"};
    if (!run.reference.empty()) cols.push_back("reference");
    w.header(cols);
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      std::vector<csv::Field> row = {r.times[i] / kUs, r.mean[i], r.sem[i]};
      if (!run.reference.empty()) row.push_back(run.reference[i]);
      w.row(row);
    }
  }
  res.files.push_back(csv_path);

  ordered_json j = header(sc, "dd-run");
  j["realizations"] = r.n_realizations;
  j["samples"] = r.times.size();
  j["dt_ns"] = sc.simulation.dt * 1e9;
  j["fit_model"] = run.fit_model;
  if (run.fit) {
    const auto& f = *run.fit;
    ordered_json fj;
    fj["t2_us"] = number_or_null(f.t2 / kUs);
    fj["stretch"] = f.stretch;
    fj["amplitude"] = f.amplitude;
    fj["offset"] = f.offset;
    fj["residual_norm"] = f.residual_norm;
    fj["status"] = analysis::to_string(f.status);
    fj["points_used"] = f.points_used;
    j["fit"] = fj;
  } else {
    j["fit"] = nullptr;
    if (!run.fit_error.empty()) j["fit_error"] = run.fit_error;
  }
  j["warnings"] = run.warnings;
  if (opt.timing) j["runtime_s"] = runtime;
  const auto json_path = output_path(sc, "dd_run", ".json");
  write_json(json_path, j);
  res.files.push_back(json_path);

  if (!run.fit_error.empty()) {
    res.exit_code = kFitError;
    res.message = run.fit_error;
  }
  return res;
}

ordered_json analyze_report(const Scenario& sc) {
  const auto& p = require_pulse(sc);
  const double offset = sc.diagnostics.offset;
  ordered_json j = header(sc, "analyze");
  ordered_json pj;
  pj["model"] = std::string(pulses::to_string(p.model));
  pj["peak_rabi_mhz"] = p.peak_rabi / kMHz;
  pj["duration_us"] = p.duration / kUs;
  if (p.model == pulses::PulseModel::AllenEberly) {
    pj["chirp_range_mhz"] = p.chirp_range / kMHz;
    pj["char_time_us"] = p.char_time / kUs;
  }
  pj["detuning_offset_mhz"] = offset / kMHz;
  j["pulse"] = pj;

  ordered_json d;
  if (p.model == pulses::PulseModel::AllenEberly) {
    const double r = p.chirp_range;
    const double w = p.peak_rabi;
    d["adiabaticity_parameter"] = guarded("Omega0^2 T / (R/2)", "1", [&] {
      return adiabatic::lower_boundary_parameter(p);
    });
    d["crossing_adiabaticity"] = guarded("Omega(t_c)^2 / |Delta'(t_c)|", "1", [&] {
      return adiabatic::crossing_adiabaticity_ratio(p, offset);
    });
    d["transition_time"] = guarded("4 Omega0 T / sqrt(R^2 - 4 dDelta^2)", "us", [&] {
      return adiabatic::transition_time(p, offset) / kUs;
    });
    d["crossing_shift"] = guarded("T atanh(2 dDelta / R)", "us", [&] {
      return adiabatic::crossing_shift(p, offset) / kUs;
    });
    d["chirp_ratio"] = entry("R / Omega0", r / w, "1");
    const double x = r > 0.0 ? 2.0 * offset / r : 0.0;
    d["min_chirp_ratio"] = guarded(
        "x = 0: sqrt(2/eps - 4); else sqrt(2 (1 + x^2) / eps) / (1 - x^2), x = 2 dDelta / R", "1",
        [&] { return adiabatic::min_chirp_ratio(sc.diagnostics.eps_max, x); });
    d["min_chirp_ratio_exact"] =
        guarded("root of the finite-ratio crossing condition", "1",
                [&] { return adiabatic::min_chirp_ratio_exact(sc.diagnostics.eps_max, x); });
    d["eps_max"] = entry("target transition error", sc.diagnostics.eps_max, "1");
    d["p_transition_resonant"] =
        entry("1 - cos^2 or cosh^2(pi T sqrt(|4 Omega0^2 - R^2|) / 4) / cosh^2(pi T R / 4)",
              adiabatic::ae_transition_probability(w, r, p.char_time), "1");
    d["p_transition_offset"] =
        entry("Demkov-Kunike with Delta0 = R/2",
              analytic_transition(w, r, offset, p.char_time, p.duration), "1");
  } else {
    const double eff = std::hypot(p.peak_rabi, offset);
    const double s = std::sin(0.5 * eff * p.duration);
    d["pulse_area"] = entry("Omega0 T_pulse / pi", p.peak_rabi * p.duration / qmath::kPi, "pi");
    d["p_transition_offset"] =
        entry("Omega0^2 / (Omega0^2 + dDelta^2) sin^2(sqrt(Omega0^2 + dDelta^2) T_pulse / 2)",
              p.peak_rabi * p.peak_rabi / (eff * eff) * s * s, "1");
  }
  if (sc.has_sequence) {
    const auto seq = sc.sequence();
    d["slot_duration"] = entry("T_pulse + tau", seq.slot_duration() / kUs, "us");
    d["matched_signal_frequency"] =
        entry("omega_s = pi / (T_pulse + tau)", 0.5 / seq.slot_duration() / 1e6, "MHz");
    d["sequence_duration"] = entry("pulses (T_pulse + tau)", (seq.dd_end - seq.dd_start) / kUs, "us");
  }
  j["diagnostics"] = d;

  const auto& ou = sc.noise.ou_detuning;
  if (sc.signal.omega > 0.0 && ou.enabled() && sc.noise.static_fwhm > 0.0) {
    const auto b = analysis::bandwidth_report(p.peak_rabi, sc.noise.static_fwhm, ou.sigma, ou.tau,
                                              sc.signal.omega);
    ordered_json bj;
    bj["formula_lower"] = "pi (b^2 / (12 tau))^(1/3)";
    bj["formula_upper"] = "pi^2 Omega0^2 / (4 Delta_inh)";
    bj["lower_bound_mhz"] = b.lower_bound / kMHz;
    bj["upper_bound_mhz"] = b.upper_bound / kMHz;
    bj["signal_frequency_mhz"] = sc.signal.omega / kMHz;
    bj["error_ratio"] = b.error_ratio;
    bj["lower_ok"] = b.lower_ok;
    bj["upper_ok"] = b.upper_ok;
    bj["in_window"] = b.in_window();
    j["bandwidth"] = bj;
  }
  return j;
}

CommandResult analyze(const Scenario& sc, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  ordered_json j = analyze_report(sc);
  if (opt.timing) j["runtime_s"] = elapsed(t0);
  CommandResult res;
  const auto path = output_path(sc, "analyze", ".json");
  write_json(path, j);
  res.files.push_back(path);
  return res;
}

CommandResult fidelity_scan(const Scenario& sc, const RunOptions& opt) {
  if (!sc.fidelity) throw ConfigError("/fidelity", "required section is missing");
  const auto t0 = std::chrono::steady_clock::now();
  const auto& f = *sc.fidelity;
  const auto scaling = analysis::fidelity_scaling(f.phases, f.alpha, f.beta, f.eps);
  const double runtime = elapsed(t0);
  CommandResult res;

  const auto csv_path = output_path(sc, "fidelity_scan", ".csv");
  {
    auto out = open_out(csv_path);
    csv::Writer w(out);
    csv_header(w, sc, "fidelity-scan");
    w.comment("exponent", csv::format_number(scaling.exponent));
    w.comment("coefficient", csv::format_number(scaling.coefficient));
    w.header({"eps", "infidelity"});
    for (const auto& pt : scaling.points) w.row({pt.eps, pt.infidelity});
  }
  res.files.push_back(csv_path);

  ordered_json j = header(sc, "fidelity-scan");
  j["pulses"] = f.phases.size();
  j["alpha_rad"] = f.alpha;
  j["beta_rad"] = f.beta;
  j["exponent"] = scaling.exponent;
  j["coefficient"] = scaling.coefficient;
  if (opt.timing) j["runtime_s"] = runtime;
  const auto json_path = output_path(sc, "fidelity_scan", ".json");
  write_json(json_path, j);
  res.files.push_back(json_path);
  return res;
}

CommandResult run(const std::string& command, const std::string& config_path,
                  const scenario::Overrides& overrides, const RunOptions& opt) {
  CommandResult res;
  try {
    const Scenario sc = scenario::load_scenario(config_path, overrides);
    if (command == "pulse-scan") {
      res = pulse_scan(sc, opt);
    } else if (command == "dd-run") {
      res = dd_run(sc, opt);
    } else if (command == "analyze") {
      res = analyze(sc, opt);
    } else if (command == "fidelity-scan") {
      res = fidelity_scan(sc, opt);
    } else {
      res.exit_code = kConfigError;
      res.message = "unknown command " + command;
    }
  } catch (const std::exception& e) {
    res.exit_code = exit_code_for(e);
    res.message = e.what();
  }
  if (res.exit_code != kOk) note(opt.log, "error: " + res.message);
  return res;
}

}  // namespace chirpdd::commands
