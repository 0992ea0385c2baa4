#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclesim/events.hpp"
#include "cyclesim/intmath.hpp"

namespace cyclesim {

// Connection intervals live on a 1.25 ms grid between 7.5 ms and 10.24 s.
constexpr SimTime kIntervalGrid = 1250;
constexpr SimTime kMinInterval = 7500;
constexpr SimTime kMaxInterval = 10'240'000;
constexpr SimTime kDefaultIfs = 150;
constexpr int kDefaultChannels = 37;

// 1 MHz symbol rate: one byte takes 8 us on air.
constexpr SimTime packet_duration(std::int64_t n_bytes) { return n_bytes * 8; }

// One cyclic exchange: master packet, idle gap, slave packet.
constexpr SimTime connection_event_duration(std::int64_t n_pkg_m,
                                            std::int64_t n_pkg_s,
                                            SimTime d_ifs) {
  return packet_duration(n_pkg_m) + packet_duration(n_pkg_s) + d_ifs;
}

constexpr int next_channel(int ch, int hop, int n_channels) {
  return static_cast<int>((static_cast<std::int64_t>(ch) + hop) % n_channels);
}

// k-fold application of next_channel in O(1), so skipped cycles advance the
// channel state without iterating.
constexpr int channel_at_event(int initial_channel, std::int64_t k, int hop,
                               int n_channels) {
  std::int64_t km = k % n_channels;
  return static_cast<int>((initial_channel + km * hop) % n_channels);
}

struct NetworkConfig {
  std::uint32_t network_id = 0;
  SimTime conn_interval = kMinInterval;  // period between cycle anchors
  SimTime start_offset = 0;              // first anchor timestamp
  std::int64_t master_bytes = 37;
  std::int64_t slave_bytes = 37;
  SimTime ifs = kDefaultIfs;
  int hop = 1;
  int n_channels = kDefaultChannels;
  int initial_channel = 0;

  SimTime master_duration() const { return packet_duration(master_bytes); }
  SimTime slave_duration() const { return packet_duration(slave_bytes); }
  SimTime event_duration() const {
    return connection_event_duration(master_bytes, slave_bytes, ifs);
  }
  SimTime anchor(std::int64_t k) const { return start_offset + k * conn_interval; }
  int channel_of(std::int64_t k) const {
    return channel_at_event(initial_channel, k, hop, n_channels);
  }
};

inline void validate_network(const NetworkConfig& n) {
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("network " + std::to_string(n.network_id) +
                                ": " + msg);
  };
  if (n.conn_interval < kMinInterval || n.conn_interval > kMaxInterval)
    fail("interval out of range");
  if (n.conn_interval % kIntervalGrid != 0) fail("interval off the 1.25 ms grid");
  if (n.start_offset < 0 || n.start_offset > n.conn_interval)
    fail("start offset outside [0, interval]");
  if (n.master_bytes < 0 || n.slave_bytes < 0) fail("negative packet size");
  if (n.ifs < 0) fail("negative interframe space");
  if (n.n_channels < 1) fail("need at least one channel");
  // A single-channel network hops in place; any positive increment is fine
  // there. Otherwise the increment must stay below the channel count.
  if (n.hop < 1) fail("hop increment must be positive");
  if (n.n_channels > 1 && n.hop >= n.n_channels)
    fail("hop increment must be below the channel count");
  if (n.initial_channel < 0 || n.initial_channel >= n.n_channels)
    fail("initial channel out of range");
}

// Number of cycles a network begins within a horizon: cycle k exists when
// k == 0 or k * T_c < d_sim. This is ceil(d_sim / T_c), with the zero-horizon
// convention that the first cycle always runs. The count depends only on the
// interval, never on the start offset, so skipped cycles can be counted
// without replaying them.
constexpr std::int64_t total_packets(SimTime d_sim, SimTime t_c) {
  return d_sim == 0 ? 1 : ceil_div(d_sim, t_c);
}

// Horizon after which the whole system repeats: the least common multiple of
// sigma * T_c over all networks, where sigma = lcm(n_channels, hop) bounds
// the channel-rotation period, plus one cycle duration of padding so a final
// overlap cannot be truncated. Returns nothing if the lcm overflows.
inline std::optional<SimTime> optimal_sim_duration(
    const std::vector<NetworkConfig>& nets, int hop, int n_channels) {
  sim_check(!nets.empty(), "optimal_sim_duration: no networks");
  auto sigma = checked_lcm(n_channels, hop);
  if (!sigma) return std::nullopt;
  std::int64_t acc = 1;
  SimTime tail = 0;
  for (const auto& n : nets) {
    auto scaled = checked_mul(*sigma, n.conn_interval);
    if (!scaled) return std::nullopt;
    auto l = checked_lcm(acc, *scaled);
    if (!l) return std::nullopt;
    acc = *l;
    tail = std::max(tail, n.event_duration());
  }
  return checked_add(acc, tail);
}

}  // namespace cyclesim
