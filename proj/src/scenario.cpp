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

#include "chirpdd/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "chirpdd/analysis.hpp"
#include "chirpdd/error.hpp"
#include "chirpdd/qmath.hpp"

namespace chirpdd::scenario {

using nlohmann::json;

namespace {

constexpr double kMHz = 2.0 * qmath::kPi * 1.0e6;
constexpr double kUs = 1.0e-6;
constexpr double kNs = 1.0e-9;
constexpr double kDeg = qmath::kPi / 180.0;

// One JSON object with its pointer. Every key read is marked, and finish()
// rejects whatever is left.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail("", "expected an object");
  }

  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return path_ + "/" + key; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(key.empty() ? path_ : at(key), what);
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return node_.at(key);
  }

  double number(const std::string& key) {
    if (!has(key)) fail(key, "required field is missing");
    const json& v = raw(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "must be finite");
    return d;
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  double positive(const std::string& key) {
    const double d = number(key);
    if (!(d > 0.0)) fail(key, "must be > 0");
    return d;
  }

  double non_negative(const std::string& key, double fallback) {
    const double d = number(key, fallback);
    if (d < 0.0) fail(key, "must be >= 0");
    return d;
  }

  long long integer(const std::string& key, long long fallback, long long lo) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    const long long n = v.get<long long>();
    if (n < lo) fail(key, "must be >= " + std::to_string(lo));
    return n;
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0)) {
      fail(key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  template <class E>
  E choice(const std::string& key, E fallback,
           std::initializer_list<std::pair<const char*, E>> options) {
    if (!has(key)) return fallback;
    const std::string s = string(key, "");
    std::string valid;
    for (const auto& [name, value] : options) {
      if (s == name) return value;
      valid += valid.empty() ? name : std::string(", ") + name;
    }
    fail(key, "unknown value \"" + s + "\" (expected one of: " + valid + ")");
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(key + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  Section child(const std::string& key) { return Section(raw(key), at(key)); }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      (void)value;
      if (!seen_.count(key)) fail(key, "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<double> named_pattern(const Section& s, const std::string& key,
                                  const std::string& name) {
  const double h = 0.5 * qmath::kPi;
  if (name == "xy8") return pulses::xy8_phases();
  if (name == "xy4") return {0.0, h, 0.0, h};
  if (name == "zero8") return std::vector<double>(8, 0.0);
  if (name == "single") return {0.0};
  s.fail(key, "unknown pattern \"" + name + "\" (expected one of: xy8, xy4, zero8, single)");
}

// Either "pattern" or "phases_deg".
std::vector<double> read_phases(Section& s) {
  if (s.has("pattern") && s.has("phases_deg")) {
    s.fail("phases_deg", "give either pattern or phases_deg, not both");
  }
  if (s.has("phases_deg")) {
    auto v = s.numbers("phases_deg");
    for (double& p : v) p *= kDeg;
    return v;
  }
  return named_pattern(s, "pattern", s.string("pattern", "xy8"));
}

Axis read_axis(Section& parent, const std::string& key, double unit, bool allow_zero) {
  if (!parent.has(key)) parent.fail(key, "required field is missing");
  Axis axis;
  if (parent.raw(key).is_array()) {
    axis.values = parent.numbers(key);
  } else {
    Section s = parent.child(key);
    const double a = s.number("start");
    const double b = s.number("stop");
    const auto n = s.integer("n", 1, 1);
    s.finish();
    if (n == 1 && a != b) s.fail("n", "a single point needs start == stop");
    for (long long i = 0; i < n; ++i) {
      axis.values.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1));
    }
  }
  for (double& v : axis.values) {
    if (!std::isfinite(v) || v < 0.0 || (!allow_zero && v == 0.0)) {
      parent.fail(key, allow_zero ? "values must be >= 0" : "values must be > 0");
    }
    v *= unit;
  }
  return axis;
}

pulses::PulseProfile read_pulse(Section s) {
  using pulses::PulseModel;
  const auto model = s.choice<PulseModel>("model", PulseModel::AllenEberly,
                                          {{"allen_eberly", PulseModel::AllenEberly},
                                           {"rectangular", PulseModel::Rectangular}});
  if (!s.has("model")) s.fail("model", "required field is missing");
  const double rabi = s.positive("peak_rabi_mhz") * kMHz;
  pulses::PulseProfile p;
  if (model == PulseModel::AllenEberly) {
    const double range = s.number("chirp_range_mhz");
    if (range < 0.0) s.fail("chirp_range_mhz", "must be >= 0");
    p = pulses::allen_eberly(rabi, range * kMHz, s.positive("char_time_us") * kUs,
                             s.positive("duration_us") * kUs);
    const auto sign = s.integer("chirp_sign", 1, -1);
    if (sign != 1 && sign != -1) s.fail("chirp_sign", "must be +1 or -1");
    p.chirp_sign = static_cast<int>(sign);
  } else {
    for (const char* k : {"chirp_range_mhz", "char_time_us", "chirp_sign"}) {
      if (s.has(k)) s.fail(k, "not a rectangular pulse parameter");
    }
    p = s.has("duration_us") ? pulses::rectangular(rabi, s.positive("duration_us") * kUs)
                             : pulses::rectangular_pi(rabi);
  }
  p.phase = s.number("phase_deg", 0.0) * kDeg;
  s.finish();
  return p;
}

void read_sequence(Section s, Scenario& sc) {
  using pulses::Preparation;
  sc.has_sequence = true;
  sc.phases = read_phases(s);
  sc.repetitions = static_cast<int>(s.integer("repetitions", 1, 1));
  sc.gap = s.non_negative("gap_us", 0.0) * kUs;
  const std::initializer_list<std::pair<const char*, Preparation>> preps = {
      {"none", Preparation::None},
      {"rect_half_pi", Preparation::RectHalfPi},
      {"half_rap", Preparation::HalfRAP}};
  auto& o = sc.sequence_options;
  o.preparation = s.choice<Preparation>("preparation", Preparation::None, preps);
  o.readout = s.choice<Preparation>("readout", Preparation::None, preps);
  o.readout_sign = s.choice<pulses::ReadoutSign>(
      "readout_sign", pulses::ReadoutSign::PlusX,
      {{"plus_x", pulses::ReadoutSign::PlusX},
       {"minus_x", pulses::ReadoutSign::MinusX},
       {"differential", pulses::ReadoutSign::Differential}});
  o.sweep = s.choice<pulses::SweepMode>(
      "sweep", pulses::SweepMode::Sawtooth,
      {{"sawtooth", pulses::SweepMode::Sawtooth}, {"alternating", pulses::SweepMode::Alternating}});
  s.finish();
}

noise::OUParams read_ou(Section s, const char* scale_key, double unit) {
  noise::OUParams ou;
  ou.sigma = s.non_negative(scale_key, 0.0) * unit;
  if (ou.sigma > 0.0) {
    ou.tau = s.positive("tau_us") * kUs;
  } else if (s.has("tau_us")) {
    ou.tau = s.positive("tau_us") * kUs;
  }
  s.finish();
  return ou;
}

void read_noise(Section s, Scenario& sc) {
  auto& n = sc.noise;
  n.detuning_offset = s.number("detuning_offset_mhz", 0.0) * kMHz;
  n.static_fwhm = s.non_negative("static_fwhm_mhz", 0.0) * kMHz;
  if (s.has("ou_detuning")) n.ou_detuning = read_ou(s.child("ou_detuning"), "b_mhz", kMHz);
  if (s.has("ou_amplitude")) n.ou_amplitude = read_ou(s.child("ou_amplitude"), "sigma", 1.0);
  n.per_rep_amplitude_sigma = s.non_negative("per_repetition_amplitude_sigma", 0.0);
  n.master_seed = s.unsigned_integer("seed", 0);
  s.finish();
  try {
    n.validate();
  } catch (const std::invalid_argument& e) {
    s.fail("", e.what());
  }
}

void read_signal(Section s, Scenario& sc) {
  auto& g = sc.signal;
  if (s.has("amplitude_mhz") && s.has("amplitude_tesla")) {
    s.fail("amplitude_tesla", "give either amplitude_mhz or amplitude_tesla, not both");
  }
  if (s.has("amplitude_tesla")) {
    // g multiplies sigma_z, so the level splitting 2 pi gamma B is 2 g.
    g.amplitude = 0.5 * s.non_negative("amplitude_tesla", 0.0) * kGyromagneticMHzPerTesla * kMHz;
  } else {
    g.amplitude = s.non_negative("amplitude_mhz", 0.0) * kMHz;
  }
  g.omega = s.non_negative("frequency_mhz", 0.0) * kMHz;
  if (g.amplitude > 0.0 && !(g.omega > 0.0)) s.fail("frequency_mhz", "must be > 0 with a signal");
  g.phase = s.number("phase_deg", 0.0) * kDeg;
  s.finish();
}

engine::SampleSchedule read_schedule(Section s) {
  using K = engine::SampleSchedule::Kind;
  engine::SampleSchedule out;
  out.kind = s.choice<K>("kind", K::EverySecondPulse,
                         {{"every_second_pulse", K::EverySecondPulse},
                          {"every_block", K::EveryBlock},
                          {"fixed_interval", K::FixedInterval},
                          {"explicit", K::Explicit}});
  if (out.kind == K::EveryBlock) out.block_pulses = static_cast<int>(s.integer("block_pulses", 8, 1));
  if (out.kind == K::FixedInterval) out.interval = s.positive("interval_us") * kUs;
  if (out.kind == K::Explicit) {
    if (!s.has("times_us")) s.fail("times_us", "required field is missing");
    out.times = s.numbers("times_us");
    for (std::size_t i = 0; i < out.times.size(); ++i) {
      if (out.times[i] < 0.0 || (i && out.times[i] < out.times[i - 1])) {
        s.fail("times_us", "times must be >= 0 and non-decreasing");
      }
      out.times[i] *= kUs;
    }
  }
  s.finish();
  return out;
}

void read_simulation(Section s, Scenario& sc) {
  auto& c = sc.simulation;
  c.dt = s.has("dt_ns") ? s.positive("dt_ns") * kNs : c.dt;
  c.noise_dt = s.non_negative("noise_dt_ns", 0.0) * kNs;
  c.horizon = s.non_negative("horizon_us", 0.0) * kUs;
  c.n_realizations = static_cast<int>(s.integer("realizations", 1, 1));
  c.threads = static_cast<int>(s.integer("threads", 1, 1));
  if (s.has("schedule")) c.schedule = read_schedule(s.child("schedule"));
  c.initial = s.choice<engine::InitialState>("initial", engine::InitialState::Auto,
                                             {{"auto", engine::InitialState::Auto},
                                              {"one_y", engine::InitialState::OneY},
                                              {"one_z", engine::InitialState::OneZ}});
  c.observable = s.choice<engine::Observable>(
      "observable", engine::Observable::P1y,
      {{"p1y", engine::Observable::P1y}, {"p1mz", engine::Observable::P1mz}});
  s.finish();
}

void read_output(Section s, Scenario& sc) {
  sc.output.dir = s.string("dir", ".");
  sc.output.prefix = s.string("prefix", "");
  if (sc.output.prefix.find('/') != std::string::npos) s.fail("prefix", "must not contain '/'");
  sc.output.fit = s.choice<FitMode>("fit", FitMode::Auto,
                                    {{"auto", FitMode::Auto},
                                     {"envelope", FitMode::Envelope},
                                     {"raw", FitMode::Raw},
                                     {"none", FitMode::None}});
  s.finish();
}

void read_scan(Section s, Scenario& sc) {
  PulseScan scan;
  scan.peak_rabi = read_axis(s, "peak_rabi_mhz", kMHz, false);
  scan.chirp_range = read_axis(s, "chirp_range_mhz", kMHz, true);
  s.finish();
  sc.scan = std::move(scan);
}

void read_diagnostics(Section s, Scenario& sc) {
  sc.diagnostics.eps_max = s.number("eps_max", 0.01);
  if (!(sc.diagnostics.eps_max > 0.0 && sc.diagnostics.eps_max < 0.5)) {
    s.fail("eps_max", "must lie in (0, 0.5)");
  }
  sc.diagnostics.offset = s.number("offset_mhz", sc.noise.detuning_offset / kMHz) * kMHz;
  s.finish();
}

void read_fidelity(Section s, Scenario& sc) {
  FidelityScan f;
  f.phases = read_phases(s);
  f.alpha = s.number("alpha_rad", 0.0);
  f.beta = s.number("beta_rad", 0.0);
  if (!s.has("eps")) s.fail("eps", "required field is missing");
  if (s.raw("eps").is_array()) {
    f.eps = s.numbers("eps");
  } else {
    Section g = s.child("eps");
    const double lo = g.positive("start");
    const double hi = g.positive("stop");
    const auto n = g.integer("n", 2, 2);
    g.finish();
    if (!(lo < hi) || hi > 1.0) g.fail("", "need 0 < start < stop <= 1");
    f.eps = analysis::log_grid(lo, hi, static_cast<int>(n));
  }
  for (double e : f.eps) {
    if (!(e > 0.0 && e <= 1.0)) s.fail("eps", "values must lie in (0, 1]");
  }
  s.finish();
  sc.fidelity = std::move(f);
}

}  // namespace

pulses::SequenceSpec Scenario::sequence() const {
  if (!pulse) throw ConfigError("/pulse", "required section is missing");
  return pulses::build_sequence(*pulse, phases, repetitions, gap, sequence_options);
}

std::string Scenario::digest() const { return fnv1a_hex(canonical.dump()); }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void apply_overrides(json& doc, const Overrides& o) {
  if (!doc.is_object()) return;
  auto section = [&doc](const char* name) -> json& {
    json& s = doc[name];
    if (s.is_null()) s = json::object();
    return s;
  };
  if (o.seed) section("noise")["seed"] = *o.seed;
  if (o.realizations) section("simulation")["realizations"] = *o.realizations;
  if (o.dt_ns) section("simulation")["dt_ns"] = *o.dt_ns;
  if (o.threads) section("simulation")["threads"] = *o.threads;
  if (o.out_dir) section("output")["dir"] = *o.out_dir;
}

Scenario parse_scenario(const json& doc) {
  Section root(doc, "");
  Scenario sc;
  // Noise first: the diagnostics offset defaults to the noise offset.
  if (root.has("noise")) read_noise(root.child("noise"), sc);
  if (root.has("pulse")) sc.pulse = read_pulse(root.child("pulse"));
  if (root.has("sequence")) read_sequence(root.child("sequence"), sc);
  if (root.has("signal")) read_signal(root.child("signal"), sc);
  if (root.has("simulation")) read_simulation(root.child("simulation"), sc);
  if (root.has("output")) read_output(root.child("output"), sc);
  if (root.has("scan")) read_scan(root.child("scan"), sc);
  if (root.has("diagnostics")) read_diagnostics(root.child("diagnostics"), sc);
  if (root.has("fidelity")) read_fidelity(root.child("fidelity"), sc);
  root.finish();

  if (sc.sequence_options.preparation == pulses::Preparation::HalfRAP ||
      sc.sequence_options.readout == pulses::Preparation::HalfRAP) {
    if (!sc.pulse || sc.pulse->model != pulses::PulseModel::AllenEberly) {
      throw ConfigError("/sequence", "half_rap preparation or readout needs an allen_eberly pulse");
    }
  }
  if (sc.simulation.noise_dt > 0.0 && sc.simulation.noise_dt < sc.simulation.dt) {
    throw ConfigError("/simulation/noise_dt_ns", "must not be finer than dt_ns");
  }

  sc.canonical = doc;
  sc.canonical.erase("output");
  if (sc.canonical.contains("simulation")) sc.canonical["simulation"].erase("threads");
  return sc;
}

Scenario load_scenario(const std::string& path, const Overrides& o) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read " + path);
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/false);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "expected an object at the top level");
  apply_overrides(doc, o);
  return parse_scenario(doc);
}

}  // namespace chirpdd::scenario
