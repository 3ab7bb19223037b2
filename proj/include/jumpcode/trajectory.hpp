#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <thread>
#include <utility>
#include <vector>

#include "jumpcode/dynamics.hpp"
#include "jumpcode/recovery.hpp"
#include "jumpcode/rng.hpp"
#include "jumpcode/state.hpp"

namespace jumpcode {

struct TrajectoryConfig {
  explicit TrajectoryConfig(DecayModel m) : model(std::move(m)) {}

  DecayModel model;
  double t_max = 0.0;
  bool recovery_enabled = false;
  double recovery_delay = 0.0;  // time between detection and recovery
  std::vector<double> sample_times;
  std::uint64_t seed = 0;
  int n_trajectories = 1;

  void validate() const {
    if (t_max < 0.0) throw InvalidDuration("t_max must be >= 0");
    if (recovery_delay < 0.0)
      throw InvalidDuration("recovery delay must be >= 0");
    if (n_trajectories < 1)
      throw InvalidParameters("need at least one trajectory");
    double prev = 0.0;
    for (double ts : sample_times) {
      if (ts < prev)
        throw InvalidParameters("sample times must be sorted and >= 0");
      if (ts > t_max) throw InvalidParameters("sample time exceeds t_max");
      prev = ts;
    }
  }
};

struct JumpRecord {
  double time = 0.0;
  int position = 0;
};

/// Decay rate into each channel: ||L_alpha psi||^2 = kappa_alpha * (total
/// weight of terms with qubit alpha excited). Computed without forming the
/// jumped states.
inline std::vector<double> jump_rates(const StateVector& psi,
                                      const DecayModel& model) {
  if (psi.n() != model.n())
    throw DimensionMismatch("state and decay model disagree on n");
  std::vector<double> rates(static_cast<std::size_t>(psi.n()), 0.0);
  for (const auto& [b, a] : psi.terms()) {
    const double w = std::norm(a);
    for (int alpha = 1; alpha <= psi.n(); ++alpha)
      if (b.bit(alpha))
        rates[static_cast<std::size_t>(alpha - 1)] += w * model.rate(alpha);
  }
  return rates;
}

struct NextJump {
  bool jump = false;       // false: no jump within the horizon
  double waiting_time = 0.0;
  int position = 0;
};

/// Inverse-CDF waiting-time sampler for the conditional (no-jump) dynamics.
/// The squared norm of the conditionally evolved state,
/// S(tau) = sum_b |psi_b|^2 exp(-w_b tau), decreases from 1; the jump fires
/// at the tau where S(tau) = u, located by bisection to relative tolerance
/// 1e-10. If the state still survives past the horizon (S(horizon) > u)
/// there is no jump. The position is then drawn from the per-channel rates
/// of the evolved state using v.
inline NextJump sample_next_jump(const StateVector& psi,
                                 const DecayModel& model, double u, double v,
                                 double horizon) {
  if (!is_normalized(psi)) throw NotNormalized("sampler needs a unit state");
  if (horizon < 0.0) throw InvalidDuration("sampler horizon must be >= 0");
  if (u <= 0.0 || u >= 1.0 || v < 0.0 || v > 1.0)
    throw InvalidParameters("uniform draws outside their range");

  NextJump result;
  if (survival_probability(psi, horizon, model) > u) return result;

  double lo = 0.0, hi = horizon;
  for (int iter = 0; iter < 200 && hi - lo > 1e-10 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (survival_probability(psi, mid, model) > u ? lo : hi) = mid;
  }
  const double tau = 0.5 * (lo + hi);

  const StateVector evolved = conditional_evolve(psi, tau, model);
  const std::vector<double> rates = jump_rates(evolved, model);
  double total = 0.0;
  for (double r : rates) total += r;
  if (total <= 0.0) return result;  // nothing left to decay: no jump

  result.jump = true;
  result.waiting_time = tau;
  const double threshold = v * total;
  double cum = 0.0;
  result.position = static_cast<int>(rates.size());  // fallback: last channel
  for (std::size_t i = 0; i < rates.size(); ++i) {
    cum += rates[i];
    if (cum >= threshold && rates[i] > 0.0) {
      result.position = static_cast<int>(i) + 1;
      break;
    }
  }
  return result;
}

struct TrajectoryResult {
  std::vector<StateVector> samples;  // one per cfg.sample_times entry
  std::vector<JumpRecord> jumps;
};

/// One quantum trajectory: alternating conditional evolution and jumps,
/// with recovery applied `recovery_delay` after each detection. Sampled
/// states are recorded after renormalization, and after any event falling
/// on the sample instant. Deterministic given (cfg.seed, trajectory_index).
inline TrajectoryResult run_trajectory(const StateVector& psi0,
                                       const TrajectoryConfig& cfg,
                                       const RecoveryProvider* recovery,
                                       std::uint64_t trajectory_index = 0) {
  cfg.validate();
  if (!is_normalized(psi0))
    throw NotNormalized("trajectory needs a normalized initial state");
  if (cfg.recovery_enabled && recovery == nullptr)
    throw RecoveryUnavailable("recovery enabled but no provider given");

  UniformRng rng(stream_seed(cfg.seed, trajectory_index));
  TrajectoryResult out;
  out.samples.reserve(cfg.sample_times.size());

  StateVector psi = psi0;
  double t = 0.0;
  std::size_t si = 0;
  // Recoveries scheduled but not yet applied, earliest due first.
  std::priority_queue<std::pair<double, int>,
                      std::vector<std::pair<double, int>>, std::greater<>>
      pending;

  const auto apply_recovery = [&](int alpha) {
    psi = normalize(recovery->get(alpha).apply(psi));
  };

  while (true) {
    while (!pending.empty() && pending.top().first <= t) {
      const int alpha = pending.top().second;
      pending.pop();
      apply_recovery(alpha);
    }
    while (si < cfg.sample_times.size() && cfg.sample_times[si] <= t) {
      out.samples.push_back(psi);
      ++si;
    }
    if (t >= cfg.t_max) break;

    const NextJump next =
        sample_next_jump(psi, cfg.model, rng.u01(), rng.u01(), cfg.t_max - t);
    const double t_jump =
        next.jump ? t + next.waiting_time
                  : std::numeric_limits<double>::infinity();
    const double t_due = pending.empty()
                             ? std::numeric_limits<double>::infinity()
                             : pending.top().first;
    const double t_next = std::min({t_due, t_jump, cfg.t_max});

    // Observations strictly before the next event do not disturb the state.
    while (si < cfg.sample_times.size() && cfg.sample_times[si] < t_next) {
      out.samples.push_back(normalize(
          conditional_evolve(psi, cfg.sample_times[si] - t, cfg.model)));
      ++si;
    }

    psi = normalize(conditional_evolve(psi, t_next - t, cfg.model));
    t = t_next;
    if (t_due <= t_jump && t_due <= cfg.t_max)
      continue;  // recovery fires at the loop head
    if (next.jump && t_jump <= cfg.t_max) {
      out.jumps.push_back({t, next.position});
      psi = normalize(apply_jump(psi, next.position, cfg.model));
      if (cfg.recovery_enabled) {
        if (cfg.recovery_delay == 0.0)
          apply_recovery(next.position);
        else
          pending.emplace(t + cfg.recovery_delay, next.position);
      }
    }
  }
  return out;
}

struct EnsembleResult {
  std::vector<double> sample_times;
  std::vector<double> fidelity_mean;    // one per sample time
  std::vector<double> fidelity_stderr;  // one per sample time
  int n_trajectories = 0;
  std::map<int, std::int64_t> jump_multiplicity;  // #jumps -> #trajectories
};

namespace detail {

// Per-chunk running moments (Welford). Chunks are a fixed partition of the
// trajectory indices and are merged in index order, so the reduction never
// depends on the worker count. Welford keeps the variance exact when every
// sample is identical, where sum-of-squares reductions leave eps-sized
// residue that would surface as a phantom standard error.
struct ChunkStats {
  std::uint64_t count = 0;
  std::vector<double> mean;
  std::vector<double> m2;
  std::map<int, std::int64_t> multiplicity;
};

constexpr std::uint64_t ensemble_chunk = 1024;

}  // namespace detail

/// Mean fidelity against `target` (default: the initial state) over
/// independent trajectories, with standard errors. Trajectories use split
/// RNG streams keyed by index and are reduced chunk by chunk in index
/// order: the result is bit-identical for every worker count.
inline EnsembleResult ensemble_fidelity(
    const StateVector& psi0, const TrajectoryConfig& cfg,
    const RecoveryProvider* recovery,
    const std::optional<StateVector>& target = std::nullopt,
    int n_workers = 1) {
  cfg.validate();
  if (n_workers < 1) throw InvalidParameters("need at least one worker");
  const StateVector target_state = target.value_or(psi0);
  if (!is_normalized(target_state))
    throw NotNormalized("fidelity target must be a unit state");

  const std::size_t n_times = cfg.sample_times.size();
  const std::uint64_t n_traj = static_cast<std::uint64_t>(cfg.n_trajectories);
  const std::uint64_t n_chunks =
      (n_traj + detail::ensemble_chunk - 1) / detail::ensemble_chunk;
  std::vector<detail::ChunkStats> chunks(n_chunks);

  const auto work_chunk = [&](std::uint64_t ci) {
    detail::ChunkStats stats;
    stats.mean.assign(n_times, 0.0);
    stats.m2.assign(n_times, 0.0);
    const std::uint64_t begin = ci * detail::ensemble_chunk;
    const std::uint64_t end = std::min(begin + detail::ensemble_chunk, n_traj);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const TrajectoryResult traj = run_trajectory(psi0, cfg, recovery, idx);
      ++stats.count;
      for (std::size_t s = 0; s < n_times; ++s) {
        const double f = fidelity(traj.samples[s], target_state);
        const double delta = f - stats.mean[s];
        stats.mean[s] += delta / static_cast<double>(stats.count);
        stats.m2[s] += delta * (f - stats.mean[s]);
      }
      ++stats.multiplicity[static_cast<int>(traj.jumps.size())];
    }
    chunks[ci] = std::move(stats);
  };

  if (n_workers == 1 || n_chunks <= 1) {
    for (std::uint64_t ci = 0; ci < n_chunks; ++ci) work_chunk(ci);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> workers;
    const int count = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(n_workers),
                                n_chunks));
    workers.reserve(static_cast<std::size_t>(count));
    for (int w = 0; w < count; ++w)
      workers.emplace_back([&] {
        for (std::uint64_t ci = next.fetch_add(1); ci < n_chunks;
             ci = next.fetch_add(1))
          work_chunk(ci);
      });
    for (auto& th : workers) th.join();
  }

  EnsembleResult result;
  result.sample_times = cfg.sample_times;
  result.n_trajectories = cfg.n_trajectories;
  result.fidelity_mean.assign(n_times, 0.0);
  result.fidelity_stderr.assign(n_times, 0.0);
  std::uint64_t count = 0;
  std::vector<double> mean(n_times, 0.0), m2(n_times, 0.0);
  for (const auto& stats : chunks) {
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(stats.count);
    const double nab = na + nb;
    for (std::size_t s = 0; s < n_times; ++s) {
      const double delta = stats.mean[s] - mean[s];
      mean[s] += delta * nb / nab;
      m2[s] += stats.m2[s] + delta * delta * na * nb / nab;
    }
    count += stats.count;
    for (const auto& [m, c] : stats.multiplicity)
      result.jump_multiplicity[m] += c;
  }
  const double n = static_cast<double>(n_traj);
  for (std::size_t s = 0; s < n_times; ++s) {
    result.fidelity_mean[s] = mean[s];
    if (n_traj > 1)
      result.fidelity_stderr[s] = std::sqrt(std::max(0.0, m2[s]) /
                                            ((n - 1.0) * n));
  }
  return result;
}

/// Monte-Carlo estimate of the density matrix at t_max: the average of
/// |psi><psi| over trajectories of the raw dissipative dynamics. Intended
/// as the bridge to the integrator oracle, hence the small-n guard and the
/// recovery-free precondition.
inline DensityMatrix trajectory_average_density(const StateVector& psi0,
                                                const TrajectoryConfig& cfg) {
  cfg.validate();
  if (psi0.n() > 4)
    throw TooLargeForOracle("trajectory averaging is limited to n <= 4");
  if (cfg.recovery_enabled)
    throw InvalidParameters(
        "trajectory averaging compares raw dynamics; disable recovery");
  TrajectoryConfig local = cfg;
  local.sample_times = {cfg.t_max};
  DensityMatrix rho(psi0.n());
  for (std::uint64_t idx = 0;
       idx < static_cast<std::uint64_t>(cfg.n_trajectories); ++idx) {
    const TrajectoryResult traj = run_trajectory(psi0, local, nullptr, idx);
    const StateVector& psi = traj.samples.front();
    for (const auto& [br, ar] : psi.terms())
      for (const auto& [bc, ac] : psi.terms())
        rho.at(br.bits(), bc.bits()) += ar * std::conj(ac);
  }
  const double inv = 1.0 / static_cast<double>(cfg.n_trajectories);
  for (auto& z : rho.entries()) z *= inv;
  return rho;
}

}  // namespace jumpcode
