#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "cyclesim/channels.hpp"
#include "cyclesim/events.hpp"
#include "cyclesim/network.hpp"

namespace cyclesim {

struct EngineStats {
  std::int64_t events_executed = 0;
  std::vector<std::int64_t> conn_events;  // per network

  bool operator==(const EngineStats&) const = default;
};

namespace detail {

// State and event plumbing shared by both engines: the queue, the channel
// occupancy model, the ledger, and the packet sub-event lifecycle. Engines
// differ only in what a cycle anchor schedules next.
class EngineCore {
 public:
  EngineCore(const std::vector<NetworkConfig>& nets, SimTime d_sim)
      : nets_(nets),
        d_sim_(d_sim),
        channels_(max_channels(nets)),
        ledger_(nets.size()) {
    sim_check(d_sim >= 0, "engine: negative horizon");
    for (std::size_t i = 0; i < nets.size(); ++i) {
      validate_network(nets[i]);
      sim_check(nets[i].network_id == i, "engine: ids must match positions");
    }
    stats_.conn_events.assign(nets.size(), 0);
  }

  // Cycle k of every network begins iff k == 0 or k * T_c < d_sim; the
  // per-network executed count is then exactly total_packets(d_sim, T_c),
  // independent of start offsets.
  std::int64_t scheduled_events(std::uint32_t net) const {
    return total_packets(d_sim_, nets_[net].conn_interval);
  }

  void enqueue(const SimEvent& e) {
    sim_check(e.t >= now_, "enqueue: scheduling into the past");
    q_.enqueue(e);
  }

  // The four per-packet events. Emitted from the anchor so they always exist
  // for an executed cycle, whatever engine drives the anchors.
  void enqueue_packet_events(const NetworkConfig& n, std::int64_t k) {
    SimTime t0 = n.anchor(k);
    if (n.master_bytes > 0) {
      enqueue({t0, EventKind::master_begin_access, n.network_id, k});
      enqueue({t0, EventKind::master_begin_check, n.network_id, k});
      SimTime t1 = t0 + n.master_duration();
      enqueue({t1, EventKind::master_end_check, n.network_id, k});
      enqueue({t1, EventKind::master_end_release, n.network_id, k});
    }
    if (n.slave_bytes > 0) {
      SimTime t2 = t0 + n.master_duration() + n.ifs;
      enqueue({t2, EventKind::slave_begin_access, n.network_id, k});
      enqueue({t2, EventKind::slave_begin_check, n.network_id, k});
      SimTime t3 = t2 + n.slave_duration();
      enqueue({t3, EventKind::slave_end_check, n.network_id, k});
      enqueue({t3, EventKind::slave_end_release, n.network_id, k});
    }
  }

  // Runs the queue dry, calling on_head for every cycle anchor.
  template <typename HeadFn>
  void drain(HeadFn&& on_head) {
    while (auto e = q_.dequeue_next()) {
      sim_check(e->t >= now_, "drain: time went backwards");
      now_ = e->t;
      ++stats_.events_executed;
      const NetworkConfig& n = nets_[e->network_id];
      std::int64_t k = e->conn_event_index;
      bool slave = false;
      switch (e->kind) {
        case EventKind::conn_event_head:
          ++stats_.conn_events[e->network_id];
          enqueue_packet_events(n, k);
          on_head(*e);
          continue;
        case EventKind::slave_begin_access:
          slave = true;
          [[fallthrough]];
        case EventKind::master_begin_access:
          channels_.channel_access(n.channel_of(k), n.network_id,
                                   packet_id(k, slave));
          continue;
        case EventKind::slave_begin_check:
        case EventKind::slave_end_check:
          slave = true;
          [[fallthrough]];
        case EventKind::master_begin_check:
        case EventKind::master_end_check:
          channels_.collision_check(n.channel_of(k), n.network_id,
                                    packet_id(k, slave));
          continue;
        case EventKind::slave_end_release:
          slave = true;
          [[fallthrough]];
        case EventKind::master_end_release: {
          Occupant o = channels_.channel_release(n.channel_of(k), n.network_id,
                                                 packet_id(k, slave));
          ledger_.record_transmission(n.network_id, o.collided);
          if (sink_) {
            SimTime start = n.anchor(k);
            if (slave) start += n.master_duration() + n.ifs;
            sink_(n.network_id, k, slave, start, o.collided);
          }
          continue;
        }
      }
    }
    sim_check(channels_.all_clear(), "drain: channel left occupied");
  }

  static std::int64_t packet_id(std::int64_t k, bool slave) {
    return k * 2 + (slave ? 1 : 0);
  }

  const std::vector<NetworkConfig>& nets_;
  SimTime d_sim_;
  EventQueue q_;
  ChannelList channels_;
  CollisionLedger ledger_;
  EngineStats stats_;
  PacketSink sink_;
  SimTime now_ = 0;

 private:
  static std::size_t max_channels(const std::vector<NetworkConfig>& nets) {
    std::size_t m = 1;
    for (const auto& n : nets) m = std::max(m, std::size_t(n.n_channels));
    return m;
  }
};

}  // namespace detail

// Next-event engine: executes every cycle of every network. Each anchor
// schedules its successor, so the queue stays small.
class BaselineEngine {
 public:
  BaselineEngine(std::vector<NetworkConfig> nets, SimTime d_sim)
      : nets_(std::move(nets)), core_(nets_, d_sim) {}

  void set_packet_sink(PacketSink sink) { core_.sink_ = std::move(sink); }

  const EngineStats& run() {
    for (const auto& n : nets_) {
      core_.enqueue({n.anchor(0), EventKind::conn_event_head, n.network_id, 0});
    }
    core_.drain([this](const SimEvent& e) {
      const NetworkConfig& n = nets_[e.network_id];
      std::int64_t next = e.conn_event_index + 1;
      if (next < core_.scheduled_events(e.network_id)) {
        core_.enqueue({n.anchor(next), EventKind::conn_event_head,
                       n.network_id, next});
      }
    });
    return core_.stats_;
  }

  const EngineStats& stats() const { return core_.stats_; }
  const CollisionLedger& ledger() const { return core_.ledger_; }
  const ChannelList& channels() const { return core_.channels_; }
  std::int64_t scheduled_events(std::uint32_t net) const {
    return core_.scheduled_events(net);
  }

 private:
  std::vector<NetworkConfig> nets_;
  detail::EngineCore core_;
};

}  // namespace cyclesim
