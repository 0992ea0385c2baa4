#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cyclesim/montecarlo.hpp"

namespace cyclesim {

inline constexpr const char* kRunCsvHeader =
    "k,t_max_us,repetition,mode,collisions,packets,collision_rate,"
    "events_executed,cpu_time_s,seed";

inline constexpr const char* kSweepCsvHeader =
    "k,t_max_us,runs,mean_collision_rate,reduction_min,reduction_mean,"
    "reduction_max,speedup_min,speedup_mean,speedup_max";

inline std::string format_run_csv(const std::vector<ResultRow>& rows) {
  std::string out(kRunCsvHeader);
  out += '\n';
  char buf[256];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf,
                  "%d,%lld,%d,%s,%lld,%lld,%.9f,%lld,%.6f,%llu\n", row.k,
                  (long long)row.t_max, row.repetition, row.mode.c_str(),
                  (long long)row.r.collisions, (long long)row.r.packets,
                  row.r.collision_rate, (long long)row.r.events,
                  row.r.cpu_seconds, (unsigned long long)row.seed);
    out += buf;
  }
  return out;
}

inline std::string format_sweep_csv(const std::vector<SweepPoint>& points) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  char buf[256];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf,
                  "%d,%lld,%d,%.9f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", p.k,
                  (long long)p.t_max, p.runs, p.mean_rate, p.reduction_min,
                  p.reduction_mean, p.reduction_max, p.speedup_min,
                  p.speedup_mean, p.speedup_max);
    out += buf;
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  f.flush();
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

// Time arguments: a bare integer is microseconds; a number with an "ms"
// suffix may carry up to three decimals ("7.5ms" is 7500). "us" is accepted
// as an explicit microsecond suffix on integers.
inline std::optional<SimTime> parse_duration_us(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::int64_t scale = 1;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "ms") {
    scale = 1000;
    s = s.substr(0, s.size() - 2);
  } else if (s.size() >= 2 && s.substr(s.size() - 2) == "us") {
    s = s.substr(0, s.size() - 2);
  }
  if (s.empty()) return std::nullopt;
  std::int64_t whole = 0, frac = 0, frac_scale = 1;
  std::size_t i = 0;
  bool any = false;
  for (; i < s.size() && s[i] != '.'; ++i) {
    if (!std::isdigit((unsigned char)s[i])) return std::nullopt;
    if (whole > (std::int64_t(1) << 53)) return std::nullopt;
    whole = whole * 10 + (s[i] - '0');
    any = true;
  }
  if (i < s.size()) {  // fractional part
    if (scale == 1) return std::nullopt;  // sub-microsecond times don't exist
    for (++i; i < s.size(); ++i) {
      if (!std::isdigit((unsigned char)s[i])) return std::nullopt;
      if (frac_scale == scale) return std::nullopt;  // too many decimals
      frac = frac * 10 + (s[i] - '0');
      frac_scale *= 10;
      any = true;
    }
  }
  if (!any) return std::nullopt;
  return whole * scale + frac * (scale / frac_scale);
}

}  // namespace cyclesim
