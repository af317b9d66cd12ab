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

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "chirpdd/adiabatic.hpp"
#include "chirpdd/commands.hpp"
#include "chirpdd/csv.hpp"
#include "chirpdd/error.hpp"
#include "chirpdd/scenario.hpp"

using namespace chirpdd;
using nlohmann::json;
using qmath::kPi;
namespace fs = std::filesystem;

namespace {
constexpr double kMHz = 2.0 * kPi * 1e6;
constexpr double kUs = 1e-6;

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("chirpdd_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path write_json(const fs::path& dir, const std::string& name, const json& doc) {
  const auto p = dir / name;
  std::ofstream(p) << doc.dump(2);
  return p;
}

json rect_doc() {
  return json::parse(R"({
    "pulse": {"model": "rectangular", "peak_rabi_mhz": 10.0},
    "sequence": {"pattern": "xy8", "repetitions": 2, "gap_us": 0.95},
    "simulation": {"dt_ns": 1.0, "realizations": 4}
  })");
}

std::string error_path(const json& doc) {
  try {
    scenario::parse_scenario(doc);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

int cli(const std::string& args) {
  const std::string cmd = std::string(CHIRPDD_CLI) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}
}  // namespace

TEST_CASE("csv quoting and number formatting") {
  CHECK(csv::quote("plain") == "plain");
  CHECK(csv::quote("a,b") == "\"a,b\"");
  CHECK(csv::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv::quote("two\nlines") == "\"two\nlines\"");
  CHECK(csv::format_number(0.1) == "0.1");
  CHECK(csv::format_number(-2.0) == "-2");
  CHECK(csv::format_number(std::nan("")) == "nan");
  CHECK(csv::format_number(-INFINITY) == "-inf");
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(u(rng)) % 30);
    REQUIRE(std::stod(csv::format_number(v)) == v);
  }
}

TEST_CASE("csv writer layout and misuse") {
  std::ostringstream out;
  csv::Writer w(out);
  w.comment("seed", "7");
  w.header({"t", "label"});
  w.row({0.5, std::string("x,y")});
  w.row({1LL, std::string("z")});
  CHECK(out.str() == "# seed: 7\nt,label\n0.5,\"x,y\"\n1,z\n");
  CHECK_THROWS(w.comment("late", "1"));
  CHECK_THROWS(w.header({"again"}));
  CHECK_THROWS(w.row({1.0}));
}

TEST_CASE("scenario units and defaults") {
  const auto sc = scenario::parse_scenario(rect_doc());
  REQUIRE(sc.pulse);
  CHECK(sc.pulse->peak_rabi == doctest::Approx(10 * kMHz));
  CHECK(sc.pulse->duration == doctest::Approx(0.05 * kUs));
  CHECK(sc.gap == doctest::Approx(0.95 * kUs));
  CHECK(sc.simulation.dt == doctest::Approx(1e-9));
  CHECK(sc.sequence().pulse_count() == 16);

  auto doc = rect_doc();
  doc["signal"] = {{"amplitude_tesla", 1e-7}, {"frequency_mhz", 0.5}};
  const auto st = scenario::parse_scenario(doc);
  CHECK(st.signal.amplitude ==
        doctest::Approx(0.5 * 1e-7 * scenario::kGyromagneticMHzPerTesla * kMHz));
  CHECK(st.signal.omega == doctest::Approx(0.5 * kMHz));
}

TEST_CASE("scenario errors name the offending field") {
  auto doc = rect_doc();
  doc["pulse"]["bogus"] = 1;
  CHECK(error_path(doc) == "/pulse/bogus");
  doc = rect_doc();
  doc["sequence"]["pattern"] = "xy7";
  CHECK(error_path(doc) == "/sequence/pattern");
  doc = rect_doc();
  doc["simulation"]["dt_ns"] = -1;
  CHECK(error_path(doc) == "/simulation/dt_ns");
  doc = rect_doc();
  doc["simulation"]["noise_dt_ns"] = 0.5;
  CHECK(error_path(doc) == "/simulation/noise_dt_ns");
  doc = rect_doc();
  doc["signal"] = {{"amplitude_tesla", 1e-7}, {"amplitude_mhz", 0.1}, {"frequency_mhz", 1}};
  CHECK(error_path(doc).rfind("/signal", 0) == 0);
  doc = rect_doc();
  doc["extra_section"] = json::object();
  CHECK(error_path(doc) == "/extra_section");
  doc = rect_doc();
  doc["sequence"]["preparation"] = "half_rap";
  CHECK(error_path(doc) == "/sequence");

  const auto dir = scratch_dir("bad_json");
  std::ofstream(dir / "broken.json") << "{\"pulse\": ";
  try {
    scenario::load_scenario((dir / "broken.json").string());
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(e.path().empty());
    CHECK(std::string(e.what()).find("malformed JSON") == 0);
  }
}

TEST_CASE("overrides and digest") {
  auto doc = rect_doc();
  scenario::Overrides o;
  o.seed = 99;
  o.realizations = 12;
  o.dt_ns = 0.5;
  o.threads = 3;
  scenario::apply_overrides(doc, o);
  const auto sc = scenario::parse_scenario(doc);
  CHECK(sc.seed() == 99);
  CHECK(sc.simulation.n_realizations == 12);
  CHECK(sc.simulation.dt == doctest::Approx(0.5e-9));
  CHECK(sc.simulation.threads == 3);

  auto a = rect_doc();
  auto b = rect_doc();
  b["simulation"]["threads"] = 8;
  b["output"] = {{"dir", "/elsewhere"}};
  CHECK(scenario::parse_scenario(a).digest() == scenario::parse_scenario(b).digest());
  b["noise"] = {{"seed", 5}};
  CHECK(scenario::parse_scenario(a).digest() != scenario::parse_scenario(b).digest());
  CHECK(scenario::parse_scenario(a).digest().size() == 16);
  CHECK(scenario::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(scenario::fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("exit codes") {
  using namespace commands;
  CHECK(exit_code_for(ConfigError("/x", "bad")) == kConfigError);
  CHECK(exit_code_for(std::invalid_argument("bad")) == kConfigError);
  CHECK(exit_code_for(NumericalError("bad")) == kNumericalError);
  CHECK(exit_code_for(FitError("bad")) == kFitError);
  CHECK(exit_code_for(std::runtime_error("bad")) == kFailure);
  CHECK(run("dd-run", "/nonexistent/file.json", {}).exit_code == kConfigError);
}

TEST_CASE("single pulse transition agrees with the closed forms") {
  // R = 0: Rabi flopping with the truncated sech area
  const auto rabi = pulses::allen_eberly(2 * kMHz, 0.0, 0.5 * kUs, 5 * kUs);
  CHECK(std::abs(commands::single_pulse_transition(rabi, 0.0, 0.5e-9) -
                 commands::analytic_transition(2 * kMHz, 0.0, 0.0, 0.5 * kUs, 5 * kUs)) < 1e-3);
  // off resonance only the untruncated pulse has a closed form
  const auto wide = pulses::allen_eberly(2 * kMHz, 0.0, 0.5 * kUs, 20 * kUs);
  CHECK(std::abs(commands::single_pulse_transition(wide, 0.3 * kMHz, 0.5e-9) -
                 commands::analytic_transition(2 * kMHz, 0.0, 0.3 * kMHz, 0.5 * kUs)) < 1e-3);
  const auto p = pulses::allen_eberly(10 * kMHz, 50 * kMHz, 0.5 * kUs, 5 * kUs);
  const double num = commands::single_pulse_transition(p, 0.0, 0.5e-9);
  CHECK(std::abs(num - commands::analytic_transition(10 * kMHz, 50 * kMHz, 0.0, 0.5 * kUs)) < 1e-3);
}

TEST_CASE("pulse-scan: one grid point, file output and reruns") {
  const auto dir = scratch_dir("scan1");
  const json doc = {
      {"pulse", {{"model", "allen_eberly"}, {"peak_rabi_mhz", 10.0}, {"chirp_range_mhz", 50.0},
                 {"char_time_us", 0.5}, {"duration_us", 5.0}}},
      {"scan", {{"peak_rabi_mhz", {10.0}}, {"chirp_range_mhz", {50.0}}}},
      {"simulation", {{"dt_ns", 0.5}}},
      {"output", {{"dir", dir.string()}}}};
  const auto cfg = write_json(dir, "scan.json", doc);
  const auto r1 = commands::run("pulse-scan", cfg.string(), {});
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r1.files.size() == 1);
  const auto text = slurp(r1.files[0]);
  CHECK(text.find("peak_rabi_mhz,chirp_range_mhz,p_numeric,p_analytic\n") != std::string::npos);
  const auto rows = commands::pulse_scan_rows(scenario::load_scenario(cfg.string()));
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(rows[0].p_numeric - rows[0].p_analytic) < 1e-3);
  const auto r2 = commands::run("pulse-scan", cfg.string(), {});
  CHECK(slurp(r2.files[0]) == text);
}

TEST_CASE("pulse-scan: the high-fidelity band lies between the two boundary curves") {
  const json doc = {
      {"pulse", {{"model", "allen_eberly"}, {"peak_rabi_mhz", 10.0}, {"chirp_range_mhz", 50.0},
                 {"char_time_us", 0.1}, {"duration_us", 1.0}}},
      {"scan", {{"peak_rabi_mhz", {{"start", 1.0}, {"stop", 20.0}, {"n", 20}}},
                {"chirp_range_mhz", {{"start", 2.5}, {"stop", 100.0}, {"n", 40}}}}},
      {"simulation", {{"dt_ns", 0.25}}}};
  const auto sc = scenario::parse_scenario(doc);
  const double T = 0.1 * kUs, eps = 0.01;
  int in_n = 0, in_ok = 0, out_n = 0, out_ok = 0;
  for (const auto& r : commands::pulse_scan_rows(sc)) {
    // adiabaticity 2 Omega0^2 T / R = 3.33 above, sufficient sweep range below
    const double hi = 2.0 * r.peak_rabi * r.peak_rabi * T / 3.33;
    const double lo = r.peak_rabi * std::sqrt(2.0 / eps - 4.0) / std::sinh(5.0);
    const bool ok = r.p_numeric >= 0.99;
    if (r.chirp_range > 1.3 * lo && r.chirp_range < hi / 1.3) {
      ++in_n;
      in_ok += ok;
    } else if (r.chirp_range > 1.3 * hi || r.chirp_range < lo / 1.3) {
      ++out_n;
      out_ok += ok;
    }
  }
  REQUIRE(in_n > 100);
  REQUIRE(out_n > 100);
  CHECK(in_ok >= 0.9 * in_n);
  CHECK(out_ok <= 0.05 * out_n);
}

TEST_CASE("dd-run without noise or signal stays at full contrast") {
  const auto dir = scratch_dir("ddflat");
  auto doc = rect_doc();
  doc["output"] = {{"dir", dir.string()}, {"fit", "none"}};
  const auto cfg = write_json(dir, "flat.json", doc);
  const auto sc = scenario::load_scenario(cfg.string());
  const auto d = commands::dd_run_data(sc);
  // an X-Y pair is a pi rotation about z, so pairs alternate between |1_y> and |-1_y>
  REQUIRE(d.result.mean.size() == 9);
  for (std::size_t k = 0; k < d.result.mean.size(); ++k) {
    CHECK(std::abs(d.result.mean[k] - (k % 2 == 0 ? 1.0 : 0.0)) < 1e-3);
  }
  doc["simulation"]["schedule"] = {{"kind", "every_block"}, {"block_pulses", 8}};
  for (double v : commands::dd_run_data(scenario::parse_scenario(doc)).result.mean) {
    CHECK(std::abs(v - 1.0) < 1e-3);
  }
  const auto r = commands::run("dd-run", cfg.string(), {});
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.files.size() == 2);
  const auto side = json::parse(slurp(r.files[1]));
  CHECK(side["config_digest"] == sc.digest());
  CHECK(side["seed"] == 0);
}

TEST_CASE("cli exit codes") {
  const auto dir = scratch_dir("cli");
  const std::string scen = CHIRPDD_SCENARIOS;
  CHECK(cli("analyze " + scen + "/analyze_transition.json --out-dir " + dir.string()) == 0);
  CHECK(fs::exists(dir / "analyze_transition.json"));
  CHECK(cli("analyze " + scen + "/analyze_transition.json --threads 0") == 2);
  CHECK(cli("no-such-command x.json") == 2);
  auto doc = rect_doc();
  doc["noise"] = {{"sead", 1}};
  CHECK(cli("dd-run " + write_json(dir, "typo.json", doc).string()) == 2);
  doc = rect_doc();
  doc["output"] = {{"dir", dir.string()}};
  CHECK(cli("pulse-scan " + write_json(dir, "noscan.json", doc).string()) == 2);
}
