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

#include "chirpdd/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "chirpdd/error.hpp"

namespace chirpdd::engine {

using pulses::PulseModel;
using pulses::PulseProfile;
using pulses::SequenceSpec;
using qmath::Complex;
using qmath::Density2;
using qmath::HermitianCoeffs;
using qmath::Unitary2;

namespace {

constexpr double kUnitarityTolerance = 1.0e-8;

struct ActivePulse {
  const PulseProfile* profile = nullptr;
  int repetition = 0;
};

std::vector<ActivePulse> pulse_list(const SequenceSpec& seq) {
  std::vector<ActivePulse> out;
  out.reserve(seq.pulses.size() + 1);
  if (seq.preparation_pulse) out.push_back({&*seq.preparation_pulse, 0});
  for (const auto& p : seq.pulses) out.push_back({&p.profile, p.repetition});
  return out;
}

ActivePulse find_active(const SequenceSpec& seq, double t) {
  if (seq.preparation_pulse && seq.preparation_pulse->contains(t)) {
    return {&*seq.preparation_pulse, 0};
  }
  const auto& ps = seq.pulses;
  auto it = std::upper_bound(ps.begin(), ps.end(), t, [](double v, const pulses::PlacedPulse& q) {
    return v < q.profile.window_start();
  });
  if (it == ps.begin()) return {};
  const auto& q = *(it - 1);
  if (q.profile.model == PulseModel::Instantaneous || !q.profile.contains(t)) return {};
  return {&q.profile, q.repetition};
}

HermitianCoeffs free_hamiltonian(double t, const NoiseSample& noise, const SignalSpec& sig) {
  HermitianCoeffs h;
  h.hz = 0.5 * noise.detuning;
  if (sig.amplitude != 0.0) h.hz += sig.amplitude * std::cos(sig.omega * t + sig.phase);
  return h;
}

Unitary2 instantaneous_rotation(const PulseProfile& p) {
  HermitianCoeffs h;
  h.hx = 0.5 * p.angle * std::cos(p.phase);
  h.hy = 0.5 * p.angle * std::sin(p.phase);
  return qmath::su2_exponential(h, 1.0);
}

double observable_of(const Density2& rho, Observable obs) {
  if (obs == Observable::P1y) return 0.5 + rho.coherence21().imag();
  return rho.population2();
}

Density2 initial_state(const SequenceSpec& seq, const SimulationConfig& cfg) {
  switch (cfg.initial) {
    case InitialState::OneY: return Density2::from_bloch(0.0, 1.0, 0.0);
    case InitialState::OneZ: return Density2{};
    case InitialState::Custom: return cfg.custom_state;
    case InitialState::Auto: break;
  }
  return seq.preparation_pulse ? Density2{} : Density2::from_bloch(0.0, 1.0, 0.0);
}

double end_time(const SequenceSpec& seq, const SimulationConfig& cfg) {
  return cfg.horizon > 0.0 ? cfg.horizon : seq.dd_end;
}

// Product of steps of width <= dt over [a, b] inside one pulse (or gap).
// Noise is read at each step midpoint.
struct Stepper {
  double dt;
  std::uint64_t steps = 0;

  template <typename HamiltonianFn>
  void run(Unitary2& u, double a, double b, HamiltonianFn&& ham) {
    const double len = b - a;
    if (!(len > 0.0)) return;
    const auto n = static_cast<std::uint64_t>(std::max(1.0, std::ceil(len / dt - 1.0e-9)));
    const double h = len / static_cast<double>(n);
    for (std::uint64_t j = 0; j < n; ++j) {
      const double tm = a + (static_cast<double>(j) + 0.5) * h;
      u = qmath::su2_exponential(ham(tm), h) * u;
    }
    steps += n;
  }
};

void check_unitary(const Unitary2& u, std::uint64_t step, double t) {
  const double err = u.unitarity_error();
  if (!(err < kUnitarityTolerance)) {
    std::ostringstream msg;
    msg << "propagator lost unitarity (error " << err << ") at step " << step << ", t = " << t
        << " s";
    throw NumericalError(msg.str());
  }
}

// Shared time loop. `on_sample(k, t, u)` fires at each sample time.
template <typename SampleFn>
Unitary2 time_loop(const SequenceSpec& seq, noise::NoiseStream& stream, const SignalSpec& sig,
                   double dt, double t_end, const std::vector<double>& samples,
                   Stepper& stepper, SampleFn&& on_sample) {
  const auto plist = pulse_list(seq);
  std::vector<double> points{0.0, t_end};
  points.insert(points.end(), samples.begin(), samples.end());
  for (const auto& ap : plist) {
    const auto& p = *ap.profile;
    if (p.model == PulseModel::Instantaneous) {
      points.push_back(p.center);
    } else {
      points.push_back(p.window_start());
      points.push_back(p.window_end());
    }
  }
  std::erase_if(points, [&](double t) { return t < 0.0 || t > t_end; });
  std::sort(points.begin(), points.end());
  const double merge = 1.0e-9 * dt;
  points.erase(std::unique(points.begin(), points.end(),
                           [&](double a, double b) { return b - a <= merge; }),
               points.end());

  Unitary2 u;
  std::size_t next_sample = 0;
  std::size_t cursor = 0;  // first pulse that may still be active
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double t = points[i];
    // Zero-duration pulses at this point act before any sample taken here.
    while (cursor < plist.size() && plist[cursor].profile->window_end() <= t + merge) {
      const auto& p = *plist[cursor].profile;
      if (p.model == PulseModel::Instantaneous) u = instantaneous_rotation(p) * u;
      ++cursor;
    }
    while (next_sample < samples.size() && samples[next_sample] <= t + merge) {
      check_unitary(u, stepper.steps, t);
      on_sample(next_sample, samples[next_sample], u);
      ++next_sample;
    }
    if (i + 1 == points.size()) break;
    const double a = t;
    const double b = points[i + 1];
    const double mid = 0.5 * (a + b);
    const PulseProfile* active = nullptr;
    int rep = 0;
    if (cursor < plist.size()) {
      const auto& cand = plist[cursor];
      if (cand.profile->model != PulseModel::Instantaneous && cand.profile->contains(mid)) {
        active = cand.profile;
        rep = cand.repetition;
      }
    }
    if (active) {
      const double rep_off = stream.repetition_offset(rep);
      stepper.run(u, a, b, [&](double tm) {
        const NoiseSample ns{stream.detuning_at(tm), stream.amplitude_at(tm)};
        return pulse_hamiltonian(tm, *active, ns, rep_off, sig);
      });
    } else {
      stepper.run(u, a, b, [&](double tm) {
        return free_hamiltonian(tm, {stream.detuning_at(tm), 0.0}, sig);
      });
    }
  }
  check_unitary(u, stepper.steps, t_end);
  return u;
}

double neumaier_sum(const double* v, std::size_t n, std::size_t stride) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = v[i * stride];
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace

void SignalSpec::validate() const {
  if (!std::isfinite(amplitude) || amplitude < 0.0) {
    throw std::invalid_argument("SignalSpec: amplitude must be finite and >= 0");
  }
  if (!std::isfinite(omega) || !std::isfinite(phase)) {
    throw std::invalid_argument("SignalSpec: non-finite frequency or phase");
  }
  if (amplitude > 0.0 && !(omega > 0.0)) {
    throw std::invalid_argument("SignalSpec: omega must be > 0 when amplitude > 0");
  }
}

void SimulationConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("SimulationConfig: dt must be > 0");
  if (!(noise_dt >= 0.0)) throw std::invalid_argument("SimulationConfig: noise_dt must be >= 0");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("SimulationConfig: horizon must be >= 0");
  }
  if (n_realizations < 1) throw std::invalid_argument("SimulationConfig: n_realizations must be >= 1");
  if (schedule.kind == SampleSchedule::Kind::EveryBlock && schedule.block_pulses < 1) {
    throw std::invalid_argument("SimulationConfig: block_pulses must be >= 1");
  }
  if (schedule.kind == SampleSchedule::Kind::FixedInterval && !(schedule.interval > 0.0)) {
    throw std::invalid_argument("SimulationConfig: sample interval must be > 0");
  }
}

std::vector<std::string> config_warnings(const SequenceSpec& seq, const SimulationConfig& cfg) {
  std::vector<std::string> out;
  const auto& p = seq.base;
  double scale = std::numeric_limits<double>::infinity();
  if (p.model == PulseModel::AllenEberly) {
    scale = std::min({p.char_time, 1.0 / std::max(p.peak_rabi, 0.5 * p.chirp_range)});
  } else if (p.model == PulseModel::Rectangular) {
    scale = std::min(p.duration, 1.0 / p.peak_rabi);
  }
  if (cfg.dt > 0.1 * scale) {
    std::ostringstream msg;
    msg << "dt = " << cfg.dt << " s exceeds a tenth of the pulse feature scale " << scale << " s";
    out.push_back(msg.str());
  }
  return out;
}

HermitianCoeffs pulse_hamiltonian(double t, const PulseProfile& p, const NoiseSample& noise,
                                  double rep_offset, const SignalSpec& sig) {
  const auto env = pulses::envelope(t, p);
  const double rabi = env.rabi * (1.0 + noise.amplitude + rep_offset);
  const double det = env.detuning - noise.detuning;
  HermitianCoeffs h;
  h.hx = 0.5 * rabi * std::cos(p.phase);
  h.hy = 0.5 * rabi * std::sin(p.phase);
  h.hz = -0.5 * det;
  if (sig.amplitude != 0.0) h.hz += sig.amplitude * std::cos(sig.omega * t + sig.phase);
  return h;
}

HermitianCoeffs hamiltonian_at(double t, const SequenceSpec& seq, const NoiseSample& noise,
                               const SignalSpec& sig) {
  const auto ap = find_active(seq, t);
  if (!ap.profile) return free_hamiltonian(t, noise, sig);
  return pulse_hamiltonian(t, *ap.profile, noise, 0.0, sig);
}

HermitianCoeffs hamiltonian_at(double t, const SequenceSpec& seq, const noise::NoisePath& path,
                               const SignalSpec& sig) {
  NoiseSample ns;
  if (!path.times.empty()) {
    auto it = std::upper_bound(path.times.begin(), path.times.end(), t);
    const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - path.times.begin() - 1));
    ns = {path.detuning[idx], path.amplitude[idx]};
  }
  const auto ap = find_active(seq, t);
  if (!ap.profile) return free_hamiltonian(t, ns, sig);
  double rep_off = 0.0;
  if (static_cast<std::size_t>(ap.repetition) < path.repetition_offsets.size()) {
    rep_off = path.repetition_offsets[static_cast<std::size_t>(ap.repetition)];
  }
  return pulse_hamiltonian(t, *ap.profile, ns, rep_off, sig);
}

std::vector<double> sample_times(const SequenceSpec& seq, const SimulationConfig& cfg) {
  const double t_end = end_time(seq, cfg);
  const double tol = 1.0e-9 * cfg.dt;
  std::vector<double> out;
  using Kind = SampleSchedule::Kind;
  const auto by_pulses = [&](int step) {
    for (int k = 0; k <= seq.pulse_count(); k += step) {
      const double t = seq.dd_start + k * seq.slot_duration();
      if (t > t_end + tol) break;
      out.push_back(std::min(t, t_end));
      if (seq.slot_duration() == 0.0) break;
    }
  };
  switch (cfg.schedule.kind) {
    case Kind::EverySecondPulse: by_pulses(2); break;
    case Kind::EveryBlock: by_pulses(std::max(1, cfg.schedule.block_pulses)); break;
    case Kind::FixedInterval:
      for (long k = 0;; ++k) {
        const double t = seq.dd_start + static_cast<double>(k) * cfg.schedule.interval;
        if (t > t_end + tol) break;
        out.push_back(std::min(t, t_end));
      }
      break;
    case Kind::Explicit:
      for (double t : cfg.schedule.times) {
        if (t >= 0.0 && t <= t_end + tol) out.push_back(std::min(t, t_end));
      }
      std::sort(out.begin(), out.end());
      break;
  }
  return out;
}

Trajectory evolve_realization(const SequenceSpec& seq, noise::NoiseStream& noise,
                              const SignalSpec& sig, const SimulationConfig& cfg) {
  cfg.validate();
  sig.validate();
  Trajectory traj;
  const Density2 rho0 = initial_state(seq, cfg);
  const double t_end = end_time(seq, cfg);
  const auto samples = sample_times(seq, cfg);
  traj.times = samples;
  traj.states.resize(samples.size());
  traj.observable.resize(samples.size());

  const bool has_readout = seq.options.readout != pulses::Preparation::None;
  Stepper stepper{cfg.dt};

  // Readout is a branch: the main propagator continues unchanged, and the
  // noise is frozen at its value at the sample time.
  const auto readout_population = [&](const Unitary2& u, double ts, bool minus) {
    const auto ro = seq.readout_pulse_at(ts, minus);
    const NoiseSample frozen{noise.detuning_at(ts), noise.amplitude_at(ts)};
    const double rep_off = noise.repetition_offset(seq.repetitions - 1);
    Unitary2 v = u;
    Stepper branch{cfg.dt};
    branch.run(v, ro->window_start(), ro->window_end(), [&](double tm) {
      return pulse_hamiltonian(tm, *ro, frozen, rep_off, sig);
    });
    return qmath::density_evolve(rho0, v).population1();
  };

  const Unitary2 u = time_loop(seq, noise, sig, cfg.dt, t_end, samples, stepper,
                               [&](std::size_t k, double ts, const Unitary2& uk) {
    traj.states[k] = qmath::density_evolve(rho0, uk);
    if (!has_readout) {
      traj.observable[k] = observable_of(traj.states[k], cfg.observable);
      return;
    }
    switch (seq.options.readout_sign) {
      case pulses::ReadoutSign::PlusX: traj.observable[k] = readout_population(uk, ts, false); break;
      case pulses::ReadoutSign::MinusX: traj.observable[k] = readout_population(uk, ts, true); break;
      case pulses::ReadoutSign::Differential: {
        const double plus = readout_population(uk, ts, false);
        const double minus = readout_population(uk, ts, true);
        traj.observable[k] = 0.5 * (1.0 + plus - minus);
        break;
      }
    }
  });
  traj.final_unitarity_error = u.unitarity_error();
  traj.steps = stepper.steps;
  return traj;
}

Unitary2 propagate(const SequenceSpec& seq, noise::NoiseStream& noise, const SignalSpec& sig,
                   double dt, double t_end) {
  if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be > 0");
  Stepper stepper{dt};
  return time_loop(seq, noise, sig, dt, t_end, {}, stepper,
                   [](std::size_t, double, const Unitary2&) {});
}

EnsembleResult run_ensemble(const SequenceSpec& seq, const noise::NoiseSpec& noise,
                            const SignalSpec& sig, const SimulationConfig& cfg) {
  cfg.validate();
  sig.validate();
  noise.validate();
  const int n = cfg.n_realizations;
  const auto times = sample_times(seq, cfg);
  const std::size_t m = times.size();
  std::vector<double> values(static_cast<std::size_t>(n) * m);

  int workers = cfg.threads > 0 ? cfg.threads
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, n);

  std::atomic<int> next{0};
  std::mutex err_mu;
  int err_index = n;
  std::exception_ptr err;
  const auto work = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= n) return;
      try {
        noise::NoiseStream stream(noise, static_cast<std::uint64_t>(r), cfg.effective_noise_dt(),
                                  seq.repetitions);
        const auto traj = evolve_realization(seq, stream, sig, cfg);
        std::copy(traj.observable.begin(), traj.observable.end(),
                  values.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(r) * m));
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (r < err_index) {
          err_index = r;
          err = std::current_exception();
        }
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);

  EnsembleResult res;
  res.times = times;
  res.mean.resize(m);
  res.sem.resize(m);
  res.n_realizations = n;
  res.seed = noise.master_seed;
  std::vector<double> sq(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < m; ++k) {
    const double mean = neumaier_sum(values.data() + k, static_cast<std::size_t>(n), m) / n;
    for (int r = 0; r < n; ++r) {
      const double d = values[static_cast<std::size_t>(r) * m + k] - mean;
      sq[static_cast<std::size_t>(r)] = d * d;
    }
    double sem = 0.0;
    if (n > 1) {
      const double var = neumaier_sum(sq.data(), sq.size(), 1) / (n - 1);
      sem = std::sqrt(var / n);
    }
    res.mean[k] = mean;
    res.sem[k] = sem;
  }
  return res;
}

SequenceSpec free_evolution(double duration) {
  if (!(duration > 0.0)) throw std::invalid_argument("free_evolution: duration must be > 0");
  SequenceSpec seq;
  seq.base = pulses::instantaneous(0.0);
  seq.repetitions = 1;
  seq.dd_start = 0.0;
  seq.dd_end = duration;
  return seq;
}

double free_induction_t2star(const noise::NoiseSpec& noise, const SimulationConfig& cfg) {
  if (!(cfg.horizon > 0.0)) throw std::invalid_argument("free_induction_t2star: horizon must be > 0");
  SimulationConfig c = cfg;
  c.initial = InitialState::OneY;
  c.observable = Observable::P1y;
  if (c.schedule.kind != SampleSchedule::Kind::FixedInterval) {
    c.schedule = SampleSchedule::fixed_interval(cfg.horizon / 100.0);
  }
  const auto seq = free_evolution(cfg.horizon);
  const auto res = run_ensemble(seq, noise, SignalSpec{}, c);

  // Gaussian envelope E = exp(-(t/T)^2): least squares of ln E on t^2 through 0.
  double num = 0.0;
  double den = 0.0;
  int decayed = 0;
  for (std::size_t k = 0; k < res.times.size(); ++k) {
    const double t = res.times[k];
    const double e = 2.0 * res.mean[k] - 1.0;
    if (t <= 0.0 || !(e > 0.05) || e >= 1.0) continue;
    if (e < 0.99) ++decayed;
    const double t2 = t * t;
    num += -t2 * std::log(e);
    den += t2 * t2;
  }
  if (decayed < 3 || !(num > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(den / num);
}

}  // namespace chirpdd::engine
