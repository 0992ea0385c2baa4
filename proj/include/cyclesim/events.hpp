#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <tuple>
#include <vector>

#include "cyclesim/intmath.hpp"

namespace cyclesim {

// Simulated time in integer microseconds. Every protocol duration is an
// integer number of microseconds, which keeps hyperperiod arithmetic and
// engine-equivalence checks exact.
using SimTime = std::int64_t;

// Event kinds double as delta-cycle ranks: among events sharing a timestamp,
// the higher rank runs first. The phase order
//   end-check > end-release > begin-access > begin-check
// makes packet intervals half-open: a packet ending exactly when another
// begins is released before the newcomer accesses the channel, so
// back-to-back packets never count as overlapping. Master and slave variants
// get distinct adjacent ranks so the queue order is a total order on kinds.
enum class EventKind : std::uint8_t {
  slave_begin_check = 0,
  master_begin_check = 1,
  slave_begin_access = 2,
  master_begin_access = 3,
  slave_end_release = 4,
  master_end_release = 5,
  slave_end_check = 6,
  master_end_check = 7,
  conn_event_head = 8,
};

constexpr int delta_rank(EventKind k) { return static_cast<int>(k); }

struct SimEvent {
  SimTime t = 0;
  EventKind kind = EventKind::conn_event_head;
  std::uint32_t network_id = 0;
  std::int64_t conn_event_index = 0;

  int delta() const { return delta_rank(kind); }
};

// Dequeue order: ascending time; at equal time descending delta; then
// (network_id, kind, conn_event_index) so runs are fully deterministic.
struct LaterInQueue {
  static std::tuple<SimTime, int, std::uint32_t, int, std::int64_t> key(
      const SimEvent& e) {
    return {e.t, -delta_rank(e.kind), e.network_id,
            static_cast<int>(e.kind), e.conn_event_index};
  }
  bool operator()(const SimEvent& a, const SimEvent& b) const {
    return key(a) > key(b);
  }
};

class EventQueue {
 public:
  void enqueue(const SimEvent& e) { q_.push(e); }

  std::optional<SimEvent> dequeue_next() {
    if (q_.empty()) return std::nullopt;
    SimEvent e = q_.top();
    q_.pop();
    return e;
  }

  std::size_t size() const { return q_.size(); }
  bool empty() const { return q_.empty(); }

 private:
  std::priority_queue<SimEvent, std::vector<SimEvent>, LaterInQueue> q_;
};

}  // namespace cyclesim
