#pragma once

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cyclesim/csv.hpp"
#include "cyclesim/montecarlo.hpp"

namespace cyclesim {

// Everything the front end collects before a sweep runs. Durations stay as
// raw strings through parsing so both "7500" and "7.5ms" work.
struct CliSetup {
  ExperimentConfig cfg;
  std::string mode_name = "verify";
  std::string draw_min = "7500";
  std::string t_min = "7500";
  std::string t_max = "100000";
  std::string step = "1250";
  std::string horizon_cap = "2000000000";
  std::string out_dir;
  bool trace = false;
};

inline std::string default_out_dir() {
  const char* env = std::getenv("CYCLESIM_OUT");
  return env && *env ? std::string(env) : std::string(".");
}

inline void wire_options(CLI::App& app, CliSetup& s) {
  app.set_config("--config", "", "read options from a key=value file");
  app.add_option("--mode", s.mode_name,
                 "engine selection: baseline, skip or verify")
      ->check(CLI::IsMember({"baseline", "skip", "verify"}))
      ->capture_default_str();
  app.add_option("--networks", s.cfg.networks, "number of networks")
      ->capture_default_str();
  app.add_option("--draw-min", s.draw_min,
                 "lower edge of the per-network interval draw")
      ->capture_default_str();
  app.add_option("--tmin", s.t_min, "sweep start for the busiest interval")
      ->capture_default_str();
  app.add_option("--tmax", s.t_max, "sweep end for the busiest interval")
      ->capture_default_str();
  app.add_option("--step", s.step, "sweep step")->capture_default_str();
  app.add_option("--reps", s.cfg.repetitions, "repetitions per sweep point")
      ->capture_default_str();
  app.add_option("--channels", s.cfg.n_channels, "channels to hop over")
      ->capture_default_str();
  app.add_option("--hop", s.cfg.hop, "hop increment")->capture_default_str();
  app.add_option("--master-bytes", s.cfg.master_bytes,
                 "master payload bytes per cycle")
      ->capture_default_str();
  app.add_option("--slave-bytes", s.cfg.slave_bytes,
                 "slave payload bytes per cycle")
      ->capture_default_str();
  app.add_option("--ifs", s.cfg.ifs, "inter-frame space in microseconds")
      ->capture_default_str();
  app.add_option("--noi-rank", s.cfg.noi_rank,
                 "which network to watch, 1 = longest interval")
      ->capture_default_str();
  app.add_option("--seed", s.cfg.seed, "root seed")->capture_default_str();
  app.add_option("--horizon-cap", s.horizon_cap,
                 "longest simulated timespan per scenario, 0 = exact")
      ->capture_default_str();
  app.add_option("--out", s.out_dir,
                 "output directory for runs.csv and sweep.csv "
                 "(default: $CYCLESIM_OUT or .)");
  app.add_flag("--trace", s.trace, "log every skip prediction to stderr");
}

// Turns the collected strings into a validated ExperimentConfig. Throws
// std::invalid_argument on any usage-level problem.
inline void finalize_setup(CliSetup& s) {
  auto dur = [](const std::string& v, const char* what) {
    auto r = parse_duration_us(v);
    if (!r)
      throw std::invalid_argument(std::string(what) + ": bad duration '" + v +
                                  "'");
    return *r;
  };
  s.cfg.draw_min = dur(s.draw_min, "--draw-min");
  s.cfg.t_min = dur(s.t_min, "--tmin");
  s.cfg.t_max = dur(s.t_max, "--tmax");
  s.cfg.step = dur(s.step, "--step");
  s.cfg.horizon_cap = dur(s.horizon_cap, "--horizon-cap");
  auto mode = parse_run_mode(s.mode_name);
  if (!mode) throw std::invalid_argument("--mode: unknown mode " + s.mode_name);
  s.cfg.mode = *mode;
  if (s.out_dir.empty()) s.out_dir = default_out_dir();
  validate_experiment(s.cfg);
}

// Canonical config-file form; parsing it reproduces the same setup.
inline std::string serialize_config(const CliSetup& s) {
  std::ostringstream o;
  o << "mode=" << run_mode_name(s.cfg.mode) << '\n'
    << "networks=" << s.cfg.networks << '\n'
    << "draw-min=" << s.cfg.draw_min << '\n'
    << "tmin=" << s.cfg.t_min << '\n'
    << "tmax=" << s.cfg.t_max << '\n'
    << "step=" << s.cfg.step << '\n'
    << "reps=" << s.cfg.repetitions << '\n'
    << "channels=" << s.cfg.n_channels << '\n'
    << "hop=" << s.cfg.hop << '\n'
    << "master-bytes=" << s.cfg.master_bytes << '\n'
    << "slave-bytes=" << s.cfg.slave_bytes << '\n'
    << "ifs=" << s.cfg.ifs << '\n'
    << "noi-rank=" << s.cfg.noi_rank << '\n'
    << "seed=" << s.cfg.seed << '\n'
    << "horizon-cap=" << s.cfg.horizon_cap << '\n';
  return o.str();
}

inline std::function<void(const PredictionTrace&)> trace_printer(
    std::ostream& os) {
  return [&os](const PredictionTrace& t) {
    os << "trace: net=" << t.interferer << " exam=" << t.exam_index
       << " t=" << t.exam_time << " phi=" << t.phi << " t_low=" << t.t_low
       << " t_high=" << t.t_high << " d=" << t.d;
    if (t.pred.never)
      os << " -> never";
    else
      os << " -> k_low=" << t.pred.k_low << " k_high=" << t.pred.k_high
         << " offset=" << t.pred.next_offset;
    os << " branch=" << t.pred.branch << '\n';
  };
}

// Full front end, factored for tests. Exit codes: 0 success, 1 usage,
// 2 verification mismatch or engine failure, 3 I/O failure.
inline int run_cli(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
  CliSetup s;
  CLI::App app{"collision simulator for cyclic wireless networks"};
  wire_options(app, s);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  }
  try {
    finalize_setup(s);
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  }

  SweepResult res;
  try {
    res = run_sweep(s.cfg, s.trace ? trace_printer(err) : nullptr);
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return 2;
  }

  try {
    std::filesystem::create_directories(s.out_dir);
    write_file(s.out_dir + "/runs.csv", format_run_csv(res.rows));
    write_file(s.out_dir + "/sweep.csv", format_sweep_csv(res.points));
  } catch (const std::exception& e) {
    err << "io error: " << e.what() << '\n';
    return 3;
  }

  if (res.verify_failed) {
    err << "verification failed: " << res.fail_detail << '\n';
    return 2;
  }
  out << "wrote " << res.rows.size() << " rows over " << res.points.size()
      << " sweep points to " << s.out_dir;
  if (res.skipped_scenarios)
    out << " (" << res.skipped_scenarios << " scenarios dropped: timespan overflow)";
  out << '\n';
  return 0;
}

}  // namespace cyclesim
