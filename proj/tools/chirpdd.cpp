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

// chirpdd: scenario-driven pulse and dynamical-decoupling simulations.
//
//   chirpdd <command> <scenario.json> [--seed N] [--realizations N] [--dt NS]
//           [--out-dir DIR] [--threads N] [--timing]
//
// Commands: pulse-scan, dd-run, analyze, fidelity-scan. Output file paths
// are printed on stdout, progress and errors on stderr.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "chirpdd/commands.hpp"

namespace {

struct Args {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::optional<double> dt_ns;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  bool timing = false;
};

void add_common(CLI::App* sub, Args& a) {
  sub->add_option("config", a.config, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--seed", a.seed, "Master seed");
  sub->add_option("--realizations", a.realizations, "Number of noise realizations")
      ->check(CLI::PositiveNumber);
  sub->add_option("--dt", a.dt_ns, "Integration step in ns")->check(CLI::PositiveNumber);
  sub->add_option("--out-dir", a.out_dir, "Output directory");
  sub->add_option("--threads", a.threads, "Worker threads (default: CHIRPDD_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--timing", a.timing, "Record wall-clock runtime in the outputs");
}

std::optional<int> threads_from_env() {
  const char* v = std::getenv("CHIRPDD_THREADS");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) {
    std::cerr << "warning: ignoring CHIRPDD_THREADS=" << v << '\n';
    return std::nullopt;
  }
  return static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chirped-pulse dynamical decoupling simulator"};
  app.require_subcommand(1);
  Args args;
  for (const char* name : {"pulse-scan", "dd-run", "analyze", "fidelity-scan"}) {
    add_common(app.add_subcommand(name, std::string("Run ") + name), args);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : chirpdd::commands::kConfigError;
  }

  chirpdd::scenario::Overrides o;
  o.seed = args.seed;
  o.realizations = args.realizations;
  o.dt_ns = args.dt_ns;
  o.out_dir = args.out_dir;
  o.threads = args.threads ? args.threads : threads_from_env();

  chirpdd::commands::RunOptions opt;
  opt.timing = args.timing;
  opt.log = &std::cerr;
  const std::string command = app.get_subcommands().front()->get_name();
  const auto res = chirpdd::commands::run(command, args.config, o, opt);
  for (const auto& f : res.files) std::cout << f << '\n';
  return res.exit_code;
}
