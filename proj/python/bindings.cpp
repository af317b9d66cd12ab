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

// Python module _chirpdd. Quantities are SI: rad/s for rates, s for times.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chirpdd/adiabatic.hpp"
#include "chirpdd/analysis.hpp"
#include "chirpdd/commands.hpp"
#include "chirpdd/engine.hpp"
#include "chirpdd/error.hpp"
#include "chirpdd/noise.hpp"
#include "chirpdd/pulses.hpp"
#include "chirpdd/scenario.hpp"

namespace py = pybind11;
using namespace py::literals;
using namespace chirpdd;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

}  // namespace

PYBIND11_MODULE(_chirpdd, m) {
  m.doc() = "Chirped-pulse dynamical decoupling simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
  py::register_exception<NoCrossingError>(m, "NoCrossingError", PyExc_ValueError);

  // pulses
  py::enum_<pulses::PulseModel>(m, "PulseModel")
      .value("AllenEberly", pulses::PulseModel::AllenEberly)
      .value("Rectangular", pulses::PulseModel::Rectangular)
      .value("HalfRAP", pulses::PulseModel::HalfRAP)
      .value("Instantaneous", pulses::PulseModel::Instantaneous);

  py::class_<pulses::PulseProfile>(m, "PulseProfile")
      .def(py::init<>())
      .def_readwrite("model", &pulses::PulseProfile::model)
      .def_readwrite("peak_rabi", &pulses::PulseProfile::peak_rabi)
      .def_readwrite("chirp_range", &pulses::PulseProfile::chirp_range)
      .def_readwrite("char_time", &pulses::PulseProfile::char_time)
      .def_readwrite("duration", &pulses::PulseProfile::duration)
      .def_readwrite("phase", &pulses::PulseProfile::phase)
      .def_readwrite("center", &pulses::PulseProfile::center)
      .def_readwrite("chirp_sign", &pulses::PulseProfile::chirp_sign)
      .def_readwrite("angle", &pulses::PulseProfile::angle)
      .def("validate", &pulses::PulseProfile::validate)
      .def("envelope",
           [](const pulses::PulseProfile& p, double t) {
             const auto e = pulses::envelope(t, p);
             return py::make_tuple(e.rabi, e.detuning);
           },
           "t"_a, "(rabi, detuning) at absolute time t.")
      .def("__repr__", [](const pulses::PulseProfile& p) {
        return "<PulseProfile " + std::string(pulses::to_string(p.model)) +
               " peak_rabi=" + std::to_string(p.peak_rabi) + " duration=" + std::to_string(p.duration) + ">";
      });

  m.def("allen_eberly", &pulses::allen_eberly, "peak_rabi"_a, "chirp_range"_a, "char_time"_a, "duration"_a);
  m.def("rectangular", &pulses::rectangular, "peak_rabi"_a, "duration"_a);
  m.def("rectangular_pi", &pulses::rectangular_pi, "peak_rabi"_a);
  m.def("instantaneous", &pulses::instantaneous, "angle"_a);
  m.def("xy8_phases", &pulses::xy8_phases);

  // adiabatic
  m.def("mixing_angle", &adiabatic::mixing_angle, "rabi"_a, "detuning"_a);
  m.def("transition_time", &adiabatic::transition_time, "pulse"_a, "offset"_a = 0.0);
  m.def("crossing_shift", &adiabatic::crossing_shift, "pulse"_a, "offset"_a = 0.0);
  m.def("transition_prob_at_offsets", &adiabatic::transition_prob_at_offsets, "k"_a, "m"_a);
  m.def("min_chirp_ratio", &adiabatic::min_chirp_ratio, "eps_max"_a, "x"_a = 0.0);
  m.def("min_chirp_ratio_exact", &adiabatic::min_chirp_ratio_exact, "eps_max"_a, "x"_a = 0.0);
  m.def("ae_transition_probability", &adiabatic::ae_transition_probability, "peak_rabi"_a,
        "chirp_range"_a, "char_time"_a);
  m.def("dk_transition_probability", &adiabatic::dk_transition_probability, "peak_rabi"_a,
        "detuning_amp"_a, "offset"_a, "char_time"_a);
  m.def("ideal_rap_probability", &adiabatic::ideal_rap_probability, "nu0"_a, "nu1"_a, "phi"_a);
  m.def("accumulated_phase", &adiabatic::accumulated_phase, "t"_a, "g"_a, "omega_s"_a);

  m.def("single_pulse_transition", &commands::single_pulse_transition, "pulse"_a, "offset"_a = 0.0,
        "dt"_a = 0.1e-9, py::call_guard<py::gil_scoped_release>());
  m.def("analytic_transition", &commands::analytic_transition, "peak_rabi"_a, "chirp_range"_a,
        "offset"_a, "char_time"_a, "duration"_a = std::numeric_limits<double>::infinity());

  // noise
  py::class_<noise::NoiseSpec>(m, "NoiseSpec")
      .def(py::init([](double detuning_offset, double static_fwhm, double ou_sigma, double ou_tau,
                       double amp_sigma, double amp_tau, double per_rep_amplitude_sigma,
                       std::uint64_t seed) {
             noise::NoiseSpec s;
             s.detuning_offset = detuning_offset;
             s.static_fwhm = static_fwhm;
             s.ou_detuning = {ou_sigma, ou_tau};
             s.ou_amplitude = {amp_sigma, amp_tau};
             s.per_rep_amplitude_sigma = per_rep_amplitude_sigma;
             s.master_seed = seed;
             s.validate();
             return s;
           }),
           py::kw_only(), "detuning_offset"_a = 0.0, "static_fwhm"_a = 0.0, "ou_sigma"_a = 0.0,
           "ou_tau"_a = 0.0, "amplitude_sigma"_a = 0.0, "amplitude_tau"_a = 0.0,
           "per_rep_amplitude_sigma"_a = 0.0, "seed"_a = 0)
      .def_readwrite("detuning_offset", &noise::NoiseSpec::detuning_offset)
      .def_readwrite("static_fwhm", &noise::NoiseSpec::static_fwhm)
      .def_readwrite("per_rep_amplitude_sigma", &noise::NoiseSpec::per_rep_amplitude_sigma)
      .def_readwrite("seed", &noise::NoiseSpec::master_seed)
      .def("validate", &noise::NoiseSpec::validate);

  m.def("ou_step", &noise::ou_step, "x"_a, "dt"_a, "b"_a, "tau"_a, "n"_a);
  m.def("generate_path",
        [](const noise::NoiseSpec& spec, double dt, std::size_t n, std::uint64_t realization) {
          const auto p = noise::generate_path(spec, dt, n, realization);
          py::dict d;
          d["times"] = to_array(p.times);
          d["detuning"] = to_array(p.detuning);
          d["amplitude"] = to_array(p.amplitude);
          d["static_detuning"] = p.static_detuning;
          return d;
        },
        "noise"_a, "dt"_a, "n"_a, "realization"_a = 0,
        "Noise of one realization on n cells of width dt, as a dict of arrays.");

  // engine
  py::class_<pulses::SequenceSpec>(m, "Sequence")
      .def_property_readonly("pulse_count", &pulses::SequenceSpec::pulse_count)
      .def_property_readonly("total_duration", &pulses::SequenceSpec::total_duration)
      .def_readonly("dd_start", &pulses::SequenceSpec::dd_start)
      .def_readonly("dd_end", &pulses::SequenceSpec::dd_end);

  m.def("build_sequence",
        [](const pulses::PulseProfile& base, std::vector<double> phases, int repetitions, double gap,
           const std::string& sweep) {
          pulses::SequenceOptions o;
          if (sweep == "alternating") {
            o.sweep = pulses::SweepMode::Alternating;
          } else if (sweep != "sawtooth") {
            throw py::value_error("sweep must be 'sawtooth' or 'alternating'");
          }
          return pulses::build_sequence(base, phases, repetitions, gap, o);
        },
        "base"_a, "phases"_a, "repetitions"_a = 1, "gap"_a = 0.0, "sweep"_a = "sawtooth");
  m.def("free_evolution", &engine::free_evolution, "duration"_a);

  py::class_<engine::EnsembleResult>(m, "EnsembleResult")
      .def_property_readonly("times", [](const engine::EnsembleResult& r) { return to_array(r.times); })
      .def_property_readonly("mean", [](const engine::EnsembleResult& r) { return to_array(r.mean); })
      .def_property_readonly("sem", [](const engine::EnsembleResult& r) { return to_array(r.sem); })
      .def_readonly("n_realizations", &engine::EnsembleResult::n_realizations)
      .def_readonly("seed", &engine::EnsembleResult::seed);

  m.def("run_ensemble",
        [](const pulses::SequenceSpec& seq, const noise::NoiseSpec& noise, double g, double omega_s,
           double signal_phase, double dt, int realizations, double horizon, const std::string& sample,
           int block, std::optional<std::vector<double>> times, const std::string& initial,
           const std::string& observable, int threads) {
          engine::SimulationConfig cfg;
          cfg.dt = dt;
          cfg.n_realizations = realizations;
          cfg.horizon = horizon;
          cfg.threads = threads;
          if (times) {
            cfg.schedule = engine::SampleSchedule::explicit_times(*times);
          } else if (sample == "every_second_pulse") {
            cfg.schedule = engine::SampleSchedule::every_second_pulse();
          } else if (sample == "block") {
            cfg.schedule = engine::SampleSchedule::every_block(block);
          } else {
            throw py::value_error("sample must be 'every_second_pulse' or 'block'");
          }
          if (initial == "auto") cfg.initial = engine::InitialState::Auto;
          else if (initial == "1y") cfg.initial = engine::InitialState::OneY;
          else if (initial == "1z") cfg.initial = engine::InitialState::OneZ;
          else throw py::value_error("initial must be 'auto', '1y' or '1z'");
          if (observable == "p1y") cfg.observable = engine::Observable::P1y;
          else if (observable == "p1mz") cfg.observable = engine::Observable::P1mz;
          else throw py::value_error("observable must be 'p1y' or 'p1mz'");
          const engine::SignalSpec sig{g, omega_s, signal_phase};
          py::gil_scoped_release release;
          return engine::run_ensemble(seq, noise, sig, cfg);
        },
        "sequence"_a, "noise"_a = noise::NoiseSpec{}, py::kw_only(), "g"_a = 0.0, "omega_s"_a = 0.0,
        "signal_phase"_a = 0.0, "dt"_a = 1e-9, "realizations"_a = 1, "horizon"_a = 0.0,
        "sample"_a = "every_second_pulse", "block"_a = 8, "times"_a = py::none(), "initial"_a = "auto",
        "observable"_a = "p1y", "threads"_a = 1,
        "Monte-Carlo average of the observable over noise realizations.");

  // analysis
  py::enum_<analysis::FitStatus>(m, "FitStatus")
      .value("Converged", analysis::FitStatus::Converged)
      .value("Extrapolated", analysis::FitStatus::Extrapolated)
      .value("LowerBound", analysis::FitStatus::LowerBound);

  py::class_<analysis::DecayFit>(m, "DecayFit")
      .def_readonly("t2", &analysis::DecayFit::t2)
      .def_readonly("stretch", &analysis::DecayFit::stretch)
      .def_readonly("amplitude", &analysis::DecayFit::amplitude)
      .def_readonly("offset", &analysis::DecayFit::offset)
      .def_readonly("residual_norm", &analysis::DecayFit::residual_norm)
      .def_readonly("status", &analysis::DecayFit::status)
      .def_readonly("points_used", &analysis::DecayFit::points_used)
      .def("__call__", &analysis::DecayFit::evaluate, "t"_a);

  m.def("fit_decay",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> t,
           py::array_t<double, py::array::c_style | py::array::forcecast> y,
           std::optional<py::array_t<double, py::array::c_style | py::array::forcecast>> reference) {
          analysis::DecayFitOptions o;
          if (reference) o.reference = to_vector(*reference);
          return analysis::fit_decay(to_vector(t), to_vector(y), o);
        },
        "times"_a, "values"_a, "reference"_a = py::none());

  m.def("sequence_fidelity",
        [](double eps, double alpha, double beta, std::vector<double> phases) {
          return analysis::sequence_fidelity({eps, alpha, beta, std::move(phases)});
        },
        "eps"_a, "alpha"_a, "beta"_a, "phases"_a);
  m.def("fidelity_scaling",
        [](std::vector<double> phases, double alpha, double beta, std::vector<double> grid) {
          const auto s = analysis::fidelity_scaling(phases, alpha, beta, grid);
          return py::make_tuple(s.exponent, s.coefficient);
        },
        "phases"_a, "alpha"_a, "beta"_a, "eps_grid"_a, "(exponent, coefficient) of 1 - F ~ c eps^n.");
  m.def("log_grid", &analysis::log_grid, "lo"_a, "hi"_a, "n"_a);

  // scenarios
  m.def("scenario_digest", [](const std::string& path) { return scenario::load_scenario(path).digest(); },
        "path"_a);
  m.def("run_command",
        [](const std::string& command, const std::string& config, std::optional<std::uint64_t> seed,
           std::optional<int> realizations, std::optional<double> dt_ns, std::optional<std::string> out_dir,
           std::optional<int> threads) {
          scenario::Overrides o{seed, realizations, dt_ns, out_dir, threads};
          commands::CommandResult r;
          {
            py::gil_scoped_release release;
            r = commands::run(command, config, o);
          }
          return py::make_tuple(r.exit_code, r.files, r.message);
        },
        "command"_a, "config"_a, py::kw_only(), "seed"_a = py::none(), "realizations"_a = py::none(),
        "dt_ns"_a = py::none(), "out_dir"_a = py::none(), "threads"_a = py::none(),
        "Run a CLI command; returns (exit_code, files, message).");
}
