#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cyclesim/baseline_engine.hpp"
#include "cyclesim/skip_predictor.hpp"

namespace cyclesim {

// One prediction as issued by the engine, for tracing and debugging.
struct PredictionTrace {
  std::uint32_t interferer = 0;
  std::int64_t exam_index = 0;  // interferer cycle index the exam ran at
  SimTime exam_time = 0;
  std::int64_t phi = 0;
  std::int64_t t_low = 0;
  std::int64_t t_high = 0;
  std::int64_t d = 0;
  SkipPrediction pred;
};

struct SkipEngineOptions {
  // Re-derive every prediction's window by brute force and throw on any gap.
  // Slow; meant for tests and verify runs.
  bool validate_predictions = false;
  std::function<void(const PredictionTrace&)> trace;
};

// Accelerated engine. One network is the network of interest; its collision
// tally must come out identical to the full next-event engine's. Every other
// network forms a pair with it, and per pair only the cycles that could
// overlap (plus the prediction target cycles) are executed. Cycles strictly
// inside a prediction window are skipped without touching the queue.
//
// Interferer collision tallies are intentionally partial: interferer cycles
// are executed only when some prediction needs them.
class SkipEngine {
 public:
  SkipEngine(std::vector<NetworkConfig> nets, std::uint32_t noi,
             SimTime d_sim, SkipEngineOptions opts = {})
      : nets_(std::move(nets)), noi_(noi), opts_(std::move(opts)),
        core_(nets_, d_sim) {
    if (noi_ >= nets_.size())
      throw std::invalid_argument("skip engine: no such network of interest");
    pairs_.resize(nets_.size());
    for (const auto& n : nets_) {
      if (n.network_id == noi_) continue;
      PairState& ps = pairs_[n.network_id];
      ps.net = n.network_id;
      const NetworkConfig& noi_net = nets_[noi_];
      ps.noi_is_high = noi_net.conn_interval > n.conn_interval;
      ps.t_low = std::min(n.conn_interval, noi_net.conn_interval);
      ps.t_high = std::max(n.conn_interval, noi_net.conn_interval);
      ps.d = std::max(n.event_duration(), noi_net.event_duration());
      if (2 * ps.d >= ps.t_low)
        throw std::invalid_argument(
            "skip engine: cycle duration too close to the shorter interval");
    }
  }

  void set_packet_sink(PacketSink sink) { core_.sink_ = std::move(sink); }

  const EngineStats& run() {
    schedule_noi_head(0);
    for (const auto& n : nets_) {
      if (n.network_id == noi_) continue;
      core_.enqueue({n.anchor(0), EventKind::conn_event_head, n.network_id, 0});
      // First exam runs up front, before any event executes: every target it
      // schedules lies at wall time >= 0, so nothing can land in the past.
      run_exam(pairs_[n.network_id], 0, 0);
    }
    core_.drain([this](const SimEvent& e) {
      if (e.network_id == noi_) return;  // no chaining; pairs own the schedule
      PairState& ps = pairs_[e.network_id];
      if (!ps.done && e.conn_event_index == ps.next_exam_index)
        run_exam(ps, e.conn_event_index, e.t);
    });
    return core_.stats_;
  }

  const EngineStats& stats() const { return core_.stats_; }
  const CollisionLedger& ledger() const { return core_.ledger_; }
  const ChannelList& channels() const { return core_.channels_; }
  std::int64_t scheduled_events(std::uint32_t net) const {
    return core_.scheduled_events(net);
  }
  std::int64_t noi_scheduled_events() const {
    return core_.scheduled_events(noi_);
  }

 private:
  struct PairState {
    std::uint32_t net = 0;
    bool done = false;
    bool noi_is_high = false;
    std::int64_t t_low = 0;
    std::int64_t t_high = 0;
    std::int64_t d = 0;
    std::int64_t noi_ref_index = 0;    // cycle paired against the next exam
    std::int64_t next_exam_index = -1;  // interferer cycle of the next exam
  };

  void schedule_noi_head(std::int64_t k) {
    if (!noi_scheduled_.insert(k).second) return;
    core_.enqueue(
        {nets_[noi_].anchor(k), EventKind::conn_event_head, noi_, k});
  }

  void run_exam(PairState& ps, std::int64_t exam_index, SimTime exam_time) {
    const NetworkConfig& inf = nets_[ps.net];
    const NetworkConfig& noi = nets_[noi_];
    SimTime t_inf = inf.anchor(exam_index);
    SimTime t_ref = noi.anchor(ps.noi_ref_index);
    std::int64_t phi = ps.noi_is_high ? t_inf - t_ref : t_ref - t_inf;
    ExamSide side = ps.noi_is_high ? ExamSide::low : ExamSide::high;
    SkipPrediction pred =
        predict_next_pair(phi, ps.t_low, ps.t_high, ps.d, side);
    if (opts_.trace)
      opts_.trace({ps.net, exam_index, exam_time, phi, ps.t_low, ps.t_high,
                   ps.d, pred});
    if (opts_.validate_predictions) {
      std::string why;
      if (!prediction_window_safe(phi, ps.t_low, ps.t_high, ps.d, pred, &why))
        throw std::logic_error("skip engine: unsafe prediction: " + why);
    }
    if (pred.never) {
      ps.done = true;
      return;
    }
    std::int64_t k_inf = ps.noi_is_high ? pred.k_low : pred.k_high;
    std::int64_t k_noi = ps.noi_is_high ? pred.k_high : pred.k_low;
    sim_check(k_inf >= 1 && k_noi >= 1, "exam: prediction made no progress");
    if (!ps.noi_is_high && pred.extra_low >= 0) {
      // A grazing cycle of the network of interest sits inside the window;
      // it must execute even if the pair is otherwise finished.
      std::int64_t extra = ps.noi_ref_index + pred.extra_low;
      if (extra < noi_scheduled_events()) schedule_noi_head(extra);
    }
    std::int64_t next_inf = exam_index + k_inf;
    std::int64_t next_ref = ps.noi_ref_index + k_noi;
    if (next_inf >= core_.scheduled_events(ps.net) ||
        next_ref >= noi_scheduled_events()) {
      ps.done = true;
      return;
    }
    ps.noi_ref_index = next_ref;
    ps.next_exam_index = next_inf;
    schedule_noi_head(next_ref);
    core_.enqueue(
        {inf.anchor(next_inf), EventKind::conn_event_head, ps.net, next_inf});
  }

  std::vector<NetworkConfig> nets_;
  std::uint32_t noi_;
  SkipEngineOptions opts_;
  detail::EngineCore core_;
  std::vector<PairState> pairs_;
  std::unordered_set<std::int64_t> noi_scheduled_;
};

}  // namespace cyclesim
