#pragma once

#include <algorithm>
#include <cstdint>
#include <ctime>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cyclesim/baseline_engine.hpp"
#include "cyclesim/rng.hpp"
#include "cyclesim/skip_engine.hpp"

namespace cyclesim {

enum class RunMode { baseline, skipping, verify };

inline const char* run_mode_name(RunMode m) {
  switch (m) {
    case RunMode::baseline: return "baseline";
    case RunMode::skipping: return "skip";
    case RunMode::verify: return "verify";
  }
  return "?";
}

inline std::optional<RunMode> parse_run_mode(std::string_view s) {
  if (s == "baseline") return RunMode::baseline;
  if (s == "skip") return RunMode::skipping;
  if (s == "verify") return RunMode::verify;
  return std::nullopt;
}

// One sweep: repetitions-many random scenarios at every busiest-interval
// point t_min, t_min + step, ... up to t_max. Each network's interval is
// drawn uniformly from the grid between draw_min and the sweep point's
// value, so later points admit slower networks without losing fast ones.
struct ExperimentConfig {
  int networks = 3;
  SimTime draw_min = kMinInterval;  // lower edge of the interval draw
  SimTime t_min = kMinInterval;     // sweep start
  SimTime t_max = 100'000;          // sweep end
  SimTime step = kIntervalGrid;
  int repetitions = 20;
  int n_channels = 2;
  int hop = 1;
  std::int64_t master_bytes = 37;
  std::int64_t slave_bytes = 37;
  SimTime ifs = kDefaultIfs;
  int noi_rank = 1;  // 1 picks the longest-interval network as the NoI
  std::uint64_t seed = 1;
  RunMode mode = RunMode::verify;
  // Upper bound on a scenario's simulated timespan. 0 demands the exact
  // full-coverage duration and drops scenarios whose duration overflows.
  SimTime horizon_cap = 2'000'000'000;
};

inline void validate_experiment(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("experiment: " + msg);
  };
  if (cfg.networks < 2) fail("needs at least two networks");
  if (cfg.draw_min < kMinInterval || cfg.draw_min % kIntervalGrid)
    fail("draw floor below the protocol minimum or off the grid");
  if (cfg.t_min < cfg.draw_min || cfg.t_max > kMaxInterval)
    fail("sweep range outside the allowed intervals");
  if (cfg.t_min > cfg.t_max) fail("t_min above t_max");
  if (cfg.t_min % kIntervalGrid || cfg.t_max % kIntervalGrid)
    fail("sweep endpoints must sit on the interval grid");
  if (cfg.step <= 0 || cfg.step % kIntervalGrid)
    fail("step must be a positive grid multiple");
  if (cfg.repetitions < 1) fail("needs at least one repetition");
  if (cfg.n_channels < 1) fail("needs at least one channel");
  if (cfg.hop < 1 || (cfg.n_channels > 1 && cfg.hop >= cfg.n_channels))
    fail("hop must be in [1, channels)");
  if (cfg.master_bytes < 0 || cfg.slave_bytes < 0) fail("negative payload");
  if (cfg.master_bytes == 0 && cfg.slave_bytes == 0) fail("no payload at all");
  if (cfg.ifs < 0) fail("negative inter-frame space");
  if (cfg.noi_rank < 1 || cfg.noi_rank > cfg.networks)
    fail("noi rank out of range");
  if (cfg.horizon_cap < 0) fail("negative horizon cap");
  SimTime dur = connection_event_duration(cfg.master_bytes, cfg.slave_bytes,
                                          cfg.ifs);
  if (2 * dur >= cfg.draw_min)
    fail("cycle duration too long for the shortest interval");
}

struct Scenario {
  std::vector<NetworkConfig> nets;
  std::uint32_t noi = 0;
  SimTime d_sim = 0;
};

// Draw order is part of the reproducibility contract: all intervals first,
// then one initial channel per network (after the descending sort), then one
// start offset per interfering network. The network of interest starts one
// cycle duration in, so its first cycle is fully inside the timespan.
inline std::optional<Scenario> draw_scenario(Rng& rng,
                                             const ExperimentConfig& cfg,
                                             SimTime t_max) {
  std::uint64_t grid_points =
      std::uint64_t((t_max - cfg.draw_min) / kIntervalGrid) + 1;
  std::vector<SimTime> intervals(cfg.networks);
  for (auto& t : intervals)
    t = cfg.draw_min + kIntervalGrid * SimTime(rng.next_below(grid_points));
  std::sort(intervals.begin(), intervals.end(), std::greater<>());

  Scenario s;
  s.noi = std::uint32_t(cfg.noi_rank - 1);
  s.nets.resize(cfg.networks);
  for (int i = 0; i < cfg.networks; ++i) {
    NetworkConfig& n = s.nets[i];
    n.network_id = std::uint32_t(i);
    n.conn_interval = intervals[i];
    n.master_bytes = cfg.master_bytes;
    n.slave_bytes = cfg.slave_bytes;
    n.ifs = cfg.ifs;
    n.hop = cfg.hop;
    n.n_channels = cfg.n_channels;
    n.initial_channel = int(rng.next_below(std::uint64_t(cfg.n_channels)));
  }
  for (int i = 0; i < cfg.networks; ++i) {
    NetworkConfig& n = s.nets[i];
    n.start_offset = std::uint32_t(i) == s.noi
                         ? n.event_duration()
                         : rng.uniform_int(0, n.conn_interval);
  }

  auto full = optimal_sim_duration(s.nets, cfg.hop, cfg.n_channels);
  if (cfg.horizon_cap > 0)
    s.d_sim = full ? std::min(*full, cfg.horizon_cap) : cfg.horizon_cap;
  else if (full)
    s.d_sim = *full;
  else
    return std::nullopt;
  return s;
}

struct RunResult {
  std::int64_t collisions = 0;
  std::int64_t packets = 0;
  double collision_rate = 0.0;
  std::int64_t events = 0;
  double cpu_seconds = 0.0;
};

inline std::int64_t packets_per_cycle(const NetworkConfig& n) {
  return (n.master_bytes > 0 ? 1 : 0) + (n.slave_bytes > 0 ? 1 : 0);
}

template <typename Engine>
inline RunResult measure_run(Engine& engine, const Scenario& s,
                             bool formula_packets) {
  std::clock_t c0 = std::clock();
  engine.run();
  std::clock_t c1 = std::clock();
  RunResult r;
  r.collisions = engine.ledger().tally(s.noi).collided;
  const NetworkConfig& noi = s.nets[s.noi];
  r.packets = formula_packets ? total_packets(s.d_sim, noi.conn_interval) *
                                    packets_per_cycle(noi)
                              : engine.ledger().tally(s.noi).transmitted;
  r.collision_rate = r.packets ? double(r.collisions) / double(r.packets) : 0.0;
  r.events = engine.stats().events_executed;
  r.cpu_seconds = double(c1 - c0) / CLOCKS_PER_SEC;
  return r;
}

inline RunResult run_single(const Scenario& s, bool skipping,
                            SkipEngineOptions opts = {}) {
  if (skipping) {
    SkipEngine engine(s.nets, s.noi, s.d_sim, std::move(opts));
    return measure_run(engine, s, true);
  }
  BaselineEngine engine(s.nets, s.d_sim);
  return measure_run(engine, s, false);
}

struct VerifyReport {
  bool ok = false;
  RunResult base;
  RunResult skip;
  std::string detail;
};

// Runs both engines on the same scenario and requires the network of
// interest to report the same collided cycles, the same collision count and
// the same packet total. Details name the first few differing packets.
inline VerifyReport verify_equivalence(const Scenario& s,
                                       bool validate_predictions = false,
                                       SkipEngineOptions opts = {}) {
  VerifyReport rep;
  std::set<std::pair<std::int64_t, bool>> base_hits, skip_hits;
  auto collect = [&](std::set<std::pair<std::int64_t, bool>>& into) {
    return [&into, noi = s.noi](std::uint32_t net, std::int64_t k, bool slave,
                                SimTime, bool collided) {
      if (net == noi && collided) into.emplace(k, slave);
    };
  };

  BaselineEngine base(s.nets, s.d_sim);
  base.set_packet_sink(collect(base_hits));
  rep.base = measure_run(base, s, false);

  opts.validate_predictions = opts.validate_predictions || validate_predictions;
  SkipEngine skip(s.nets, s.noi, s.d_sim, std::move(opts));
  skip.set_packet_sink(collect(skip_hits));
  rep.skip = measure_run(skip, s, true);

  std::ostringstream why;
  if (rep.base.collisions != rep.skip.collisions)
    why << "collision counts differ (full " << rep.base.collisions
        << ", skipping " << rep.skip.collisions << "); ";
  if (rep.base.packets != rep.skip.packets)
    why << "packet totals differ (full " << rep.base.packets << ", skipping "
        << rep.skip.packets << "); ";
  if (base_hits != skip_hits) {
    why << "collided packets differ:";
    int listed = 0;
    for (const auto& h : base_hits)
      if (!skip_hits.count(h) && listed++ < 5)
        why << " full-only(cycle " << h.first << (h.second ? " slave)" : " master)");
    for (const auto& h : skip_hits)
      if (!base_hits.count(h) && listed++ < 5)
        why << " skip-only(cycle " << h.first << (h.second ? " slave)" : " master)");
  }
  rep.detail = why.str();
  rep.ok = rep.detail.empty();
  return rep;
}

struct ResultRow {
  int k = 0;
  SimTime t_max = 0;
  int repetition = 0;
  std::string mode;
  RunResult r;
  std::uint64_t seed = 0;
};

struct SweepPoint {
  int k = 0;
  SimTime t_max = 0;
  int runs = 0;
  double mean_rate = 0.0;
  double reduction_min = 0.0, reduction_mean = 0.0, reduction_max = 0.0;
  double speedup_min = 0.0, speedup_mean = 0.0, speedup_max = 0.0;
};

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<SweepPoint> points;
  int skipped_scenarios = 0;
  bool verify_failed = false;
  std::string fail_detail;
};

// Every repetition gets its own deterministic stream: the scenario at
// (k, rep) does not depend on how many other points or repetitions ran.
inline SweepResult run_sweep(
    const ExperimentConfig& cfg,
    const std::function<void(const PredictionTrace&)>& trace = {}) {
  validate_experiment(cfg);
  SweepResult out;
  for (int k = 0;; ++k) {
    SimTime t_max = cfg.t_min + SimTime(k) * cfg.step;
    if (t_max > cfg.t_max) break;
    SweepPoint pt;
    pt.k = k;
    pt.t_max = t_max;
    double rate_sum = 0.0, red_sum = 0.0, sp_sum = 0.0;
    int pair_runs = 0;
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
      std::uint64_t stream =
          mix_seed(cfg.seed, std::uint64_t(k), std::uint64_t(rep));
      Rng rng(stream);
      auto sc = draw_scenario(rng, cfg, t_max);
      if (!sc) {
        ++out.skipped_scenarios;
        continue;
      }
      SkipEngineOptions opts;
      opts.trace = trace;
      if (cfg.mode == RunMode::baseline) {
        RunResult r = run_single(*sc, false);
        rate_sum += r.collision_rate;
        out.rows.push_back({k, t_max, rep, "baseline", r, stream});
        ++pt.runs;
        continue;
      }
      if (cfg.mode == RunMode::skipping) {
        RunResult r = run_single(*sc, true, std::move(opts));
        rate_sum += r.collision_rate;
        out.rows.push_back({k, t_max, rep, "skip", r, stream});
        ++pt.runs;
        continue;
      }
      VerifyReport vr = verify_equivalence(*sc, false, std::move(opts));
      out.rows.push_back({k, t_max, rep, "baseline", vr.base, stream});
      out.rows.push_back({k, t_max, rep, "skip", vr.skip, stream});
      ++pt.runs;
      rate_sum += vr.base.collision_rate;
      double red = double(vr.base.events) / double(std::max<std::int64_t>(
                                                vr.skip.events, 1));
      double sp = vr.base.cpu_seconds /
                  std::max(vr.skip.cpu_seconds, 1.0 / CLOCKS_PER_SEC);
      if (pair_runs == 0) {
        pt.reduction_min = pt.reduction_max = red;
        pt.speedup_min = pt.speedup_max = sp;
      } else {
        pt.reduction_min = std::min(pt.reduction_min, red);
        pt.reduction_max = std::max(pt.reduction_max, red);
        pt.speedup_min = std::min(pt.speedup_min, sp);
        pt.speedup_max = std::max(pt.speedup_max, sp);
      }
      red_sum += red;
      sp_sum += sp;
      ++pair_runs;
      if (!vr.ok) {
        out.verify_failed = true;
        std::ostringstream oss;
        oss << "divergence at point " << k << " repetition " << rep
            << " (seed " << stream << "): " << vr.detail;
        out.fail_detail = oss.str();
        break;
      }
    }
    if (pt.runs > 0) {
      pt.mean_rate = rate_sum / pt.runs;
      if (pair_runs > 0) {
        pt.reduction_mean = red_sum / pair_runs;
        pt.speedup_mean = sp_sum / pair_runs;
      }
    }
    out.points.push_back(pt);
    if (out.verify_failed) break;
  }
  return out;
}

}  // namespace cyclesim
