#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cyclesim/events.hpp"
#include "cyclesim/intmath.hpp"

namespace cyclesim {

// One in-flight packet on a channel. The collided flag lives here while the
// packet transmits and is folded into the ledger on release, so memory stays
// proportional to concurrent transmissions, not to run length.
struct Occupant {
  std::uint32_t network_id = 0;
  std::int64_t packet_id = 0;  // conn_event_index * 2, +1 for the slave packet
  bool collided = false;
};

class ChannelList {
 public:
  explicit ChannelList(std::size_t n_channels)
      : chans_(n_channels), accesses_(n_channels, 0), releases_(n_channels, 0) {}

  // Puts the packet on the channel; returns how many other packets were
  // already there. Double access by the same packet is a logic error.
  std::size_t channel_access(std::size_t ch, std::uint32_t net,
                             std::int64_t packet) {
    for (const auto& c : chans_) {
      for (const auto& o : c) {
        sim_check(!(o.network_id == net && o.packet_id == packet),
                  "channel_access: packet already transmitting");
      }
    }
    auto& occ = chans_.at(ch);
    std::size_t prior = occ.size();
    occ.push_back(Occupant{net, packet, false});
    ++accesses_.at(ch);
    return prior;
  }

  // Flags the packet and everything sharing its channel if the channel holds
  // more than one packet. Returns whether a collision was found.
  bool collision_check(std::size_t ch, std::uint32_t net, std::int64_t packet) {
    auto& occ = chans_.at(ch);
    bool found_self = false;
    for (const auto& o : occ) {
      if (o.network_id == net && o.packet_id == packet) found_self = true;
    }
    sim_check(found_self, "collision_check: packet not on channel");
    if (occ.size() < 2) return false;
    for (auto& o : occ) o.collided = true;
    return true;
  }

  // Removes the packet and hands back its record (with the collided flag).
  Occupant channel_release(std::size_t ch, std::uint32_t net,
                           std::int64_t packet) {
    auto& occ = chans_.at(ch);
    for (auto it = occ.begin(); it != occ.end(); ++it) {
      if (it->network_id == net && it->packet_id == packet) {
        Occupant out = *it;
        occ.erase(it);
        ++releases_.at(ch);
        return out;
      }
    }
    throw std::logic_error("channel_release: packet not on channel");
  }

  const std::vector<Occupant>& occupants(std::size_t ch) const {
    return chans_.at(ch);
  }

  bool all_clear() const {
    for (const auto& c : chans_)
      if (!c.empty()) return false;
    return true;
  }

  std::int64_t access_count(std::size_t ch) const { return accesses_.at(ch); }
  std::int64_t release_count(std::size_t ch) const { return releases_.at(ch); }
  std::size_t channel_count() const { return chans_.size(); }

 private:
  std::vector<std::vector<Occupant>> chans_;
  std::vector<std::int64_t> accesses_;
  std::vector<std::int64_t> releases_;
};

struct NetworkTally {
  std::int64_t transmitted = 0;
  std::int64_t collided = 0;

  bool operator==(const NetworkTally&) const = default;
};

// Per-network transmitted/collided packet counts. A packet is recorded
// exactly once, when it finishes, however many interferers overlapped it.
class CollisionLedger {
 public:
  explicit CollisionLedger(std::size_t n_networks) : tallies_(n_networks) {}

  void record_transmission(std::uint32_t net, bool collided) {
    auto& t = tallies_.at(net);
    ++t.transmitted;
    if (collided) ++t.collided;
  }

  const NetworkTally& tally(std::uint32_t net) const {
    return tallies_.at(net);
  }
  std::size_t network_count() const { return tallies_.size(); }

  bool operator==(const CollisionLedger&) const = default;

 private:
  std::vector<NetworkTally> tallies_;
};

// Observer for finished packets, used by tests and divergence dumps.
// Arguments: network, connection event ordinal, slave flag, start time,
// collided flag.
using PacketSink = std::function<void(std::uint32_t, std::int64_t, bool,
                                      SimTime, bool)>;

}  // namespace cyclesim
