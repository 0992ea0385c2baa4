#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

#include "cyclesim/intmath.hpp"

namespace cyclesim {

// Two cyclic event trains, periods t_low <= t_high. Watching consecutive
// long-train events, the short train's nearest-event offset drifts linearly:
// by +gamma per long interval (growing), by -gamma (shrinking), or not at all
// (constant, when t_high is an exact multiple of t_low). gamma is always the
// smaller residue, at most t_low / 2.
enum class DriftMode { constant, growing, shrinking };

struct GammaProcess {
  std::int64_t t_low = 0;
  std::int64_t t_high = 0;
  std::int64_t gamma = 0;
  DriftMode mode = DriftMode::constant;
};

inline GammaProcess compute_gamma(std::int64_t t_low, std::int64_t t_high) {
  sim_check(0 < t_low && t_low <= t_high, "compute_gamma: bad periods");
  std::int64_t r = t_high % t_low;
  if (r == 0) return {t_low, t_high, 0, DriftMode::constant};
  if (2 * r < t_low) return {t_low, t_high, r, DriftMode::shrinking};
  return {t_low, t_high, t_low - r, DriftMode::growing};
}

// Which train the examining network (the one whose event is being executed
// right now) belongs to. Grazing re-anchors are emitted differently per side
// so that every event involved in an overlap is actually executed.
enum class ExamSide { low, high };

// One prediction: advance the long train by k_high intervals and the short
// train by k_low intervals to the next pair of events that could overlap or
// that re-anchors the relationship. Everything strictly inside that window
// is guaranteed free of overlaps (given the +-d tolerance) and safe to skip.
struct SkipPrediction {
  bool never = false;            // the trains can never overlap (constant mode)
  std::int64_t k_low = 0;        // short-train intervals to advance
  std::int64_t k_high = 0;       // long-train intervals to advance
  std::int64_t extra_low = -1;   // additional short-train index to execute, or -1
  std::int64_t next_offset = 0;  // offset of the target pair, = phi at the next exam
  bool overlap_at_target = false;
  DriftMode mode = DriftMode::constant;
  const char* branch = "";
  std::int64_t rebase_steps = 0;  // short-train re-anchoring applied up front
  std::int64_t march_steps = 0;   // residue steps walked beyond column 1
};

// Core predictor.
//
// Inputs: phi = (next short-train event time) - (current long-train event
// time); d = conservative overlap half-width (max of both cycle durations);
// side = which train the examining network drives.
//
// Model: delta(i, j) = phi + j * t_low - i * t_high is the offset between
// short event j and long event i; events can only overlap when
// |delta| <= d. Per long-train column i the residues delta(i, .) form one
// class mod t_low, so with 2d < t_low at most one j per column can land in
// the window. The canonical representative psi_i in [-d, t_low - d) steps by
// +-gamma between wraps, which makes the first in-window column a closed
// form. The prediction stops at the window hit, or at the first wrap of the
// residue orbit (a re-anchor: no overlap there, but the relationship must be
// re-examined), so every prediction is finite and time always advances.
inline SkipPrediction predict_next_pair(std::int64_t phi, std::int64_t t_low,
                                        std::int64_t t_high, std::int64_t d,
                                        ExamSide side = ExamSide::high) {
  sim_check(t_low >= 1 && t_low <= t_high, "predict: bad periods");
  sim_check(d >= 0 && 2 * d < t_low, "predict: window too wide for periods");
  sim_check(phi >= -(t_high + d) && phi <= t_high + d,
            "predict: offset out of range");

  SkipPrediction p;
  GammaProcess gp = compute_gamma(t_low, t_high);
  p.mode = gp.mode;

  // Re-anchor the short train so its reference event sits at offset >= -d.
  std::int64_t j_base = 0;
  std::int64_t phi0 = phi;
  if (phi < -d) {
    j_base = ceil_div(-d - phi, t_low);
    phi0 = phi + j_base * t_low;  // lands in [-d, t_low - d)
  }
  p.rebase_steps = j_base;

  if (j_base > 0 && phi0 <= d) {
    // The re-anchored short event overlaps the current long event. The short
    // event must execute; then hop one long interval ahead.
    p.k_high = 1;
    if (side == ExamSide::high) {
      std::int64_t s = ceil_div(t_high - d - phi0, t_low);
      p.k_low = j_base + s;
      p.extra_low = j_base;
      p.next_offset = phi0 + s * t_low - t_high;
    } else {
      // The short train is the examining side: its next executed event IS the
      // grazing one, so no extra schedule is needed.
      p.k_low = j_base;
      p.next_offset = phi0 - t_high;
    }
    p.overlap_at_target = p.next_offset >= -d && p.next_offset <= d;
    p.branch = "graze";
    return p;
  }

  auto canon = [&](std::int64_t x) { return floor_mod(x + d, t_low) - d; };

  if (gp.mode == DriftMode::constant) {
    std::int64_t psi = canon(phi0);
    if (psi > d) {
      p.never = true;
      p.branch = "constant-never";
      return p;
    }
    std::int64_t num = psi + t_high - phi0;
    sim_check(num % t_low == 0, "predict: misaligned constant residue");
    std::int64_t j1 = num / t_low;
    sim_check(j1 >= 0, "predict: constant skip went negative");
    if (j1 == 0) {
      // The short event matching the next long event is the current reference
      // itself (phi ~ t_high, only reachable when the examining side is the
      // long train). Advance both trains one interval; the overlap pair
      // (long+1, short+0) is already fully scheduled.
      p.k_high = 1;
      p.k_low = 1;
      p.next_offset = psi + t_low;
      p.branch = "constant-row";
    } else {
      p.k_high = 1;
      p.k_low = j_base + j1;
      p.next_offset = psi;
      p.overlap_at_target = true;
      p.branch = "constant-hit";
    }
    return p;
  }

  // Drifting orbit: walk from column 1 to the end of the current monotone
  // segment of the canonical residue.
  const std::int64_t g = gp.gamma;
  const bool growing = gp.mode == DriftMode::growing;
  std::int64_t psi0 = canon(phi0);
  std::int64_t psi1 = growing ? psi0 + g : psi0 - g;
  bool entry_wrap = false;
  if (psi1 >= t_low - d) {
    psi1 -= t_low;
    entry_wrap = true;
  } else if (psi1 < -d) {
    psi1 += t_low;
    entry_wrap = true;
  }

  std::int64_t icol = 0;
  std::int64_t v = 0;
  bool hit = false;
  if (psi1 >= -d && psi1 <= d) {
    icol = 1;
    v = psi1;
    hit = true;
    p.branch = growing ? "grow-hit" : "shrink-hit";
  } else if (entry_wrap) {
    // Wrapped straight past the window: re-anchor at column 1.
    icol = 1;
    v = psi1;
    p.branch = growing ? "grow-wrap" : "shrink-wrap";
  } else if (growing) {
    // psi1 in (d, t_low - d): climbs away from the window, first candidate is
    // the wrap back to the bottom of the strip.
    std::int64_t m = ceil_div(t_low - d - psi1, g);
    v = psi1 + m * g - t_low;  // in [-d, gamma - d)
    icol = 1 + m;
    hit = v <= d;
    p.branch = hit ? "grow-hit" : "grow-wrap";
  } else {
    // Shrinking from psi1 in (d, t_low - d): descends toward the window.
    std::int64_t m = ceil_div(psi1 - d, g);
    v = psi1 - m * g;  // in (d - gamma, d]
    icol = 1 + m;
    if (v >= -d) {
      hit = true;
      p.branch = "shrink-hit";
    } else {
      // Jumped clean over the window; the column's canonical residue is one
      // short period up, which may itself land in the window.
      v += t_low;
      hit = v <= d;
      p.branch = hit ? "shrink-hit" : "shrink-wrap";
    }
  }
  p.march_steps = icol - 1;

  std::int64_t num = v + icol * t_high - phi0;
  sim_check(num % t_low == 0, "predict: misaligned drift residue");
  std::int64_t j = num / t_low;
  sim_check(j >= 0, "predict: drift target behind the reference");
  if (j == 0) {
    // The partner of the long train's next event is the current short
    // reference itself (phi ~ t_high). Both events are already scheduled, so
    // advance past the pair; later short events cannot reach back to it.
    sim_check(icol == 1 && j_base == 0, "predict: malformed row pairing");
    p.k_high = 1;
    p.k_low = 1;
    p.next_offset = v + t_low;
    p.branch = "row-hit";
    return p;
  }
  p.k_high = icol;
  p.k_low = j_base + j;
  p.next_offset = v;
  p.overlap_at_target = hit;
  return p;
}

// Mode-specific entry points. Each asserts the classification it is named
// for, then runs the shared predictor.
inline SkipPrediction predict_constant(std::int64_t phi, std::int64_t t_low,
                                       std::int64_t t_high, std::int64_t d,
                                       ExamSide side = ExamSide::high) {
  sim_check(compute_gamma(t_low, t_high).mode == DriftMode::constant,
            "predict_constant: drifting pair");
  return predict_next_pair(phi, t_low, t_high, d, side);
}

inline SkipPrediction predict_growing(std::int64_t phi, std::int64_t t_low,
                                      std::int64_t t_high, std::int64_t d,
                                      std::int64_t gamma,
                                      ExamSide side = ExamSide::high) {
  GammaProcess gp = compute_gamma(t_low, t_high);
  sim_check(gp.mode == DriftMode::growing && gp.gamma == gamma,
            "predict_growing: not a growing pair");
  return predict_next_pair(phi, t_low, t_high, d, side);
}

inline SkipPrediction predict_shrinking(std::int64_t phi, std::int64_t t_low,
                                        std::int64_t t_high, std::int64_t d,
                                        std::int64_t gamma,
                                        ExamSide side = ExamSide::high) {
  GammaProcess gp = compute_gamma(t_low, t_high);
  sim_check(gp.mode == DriftMode::shrinking && gp.gamma == gamma,
            "predict_shrinking: not a shrinking pair");
  return predict_next_pair(phi, t_low, t_high, d, side);
}

// Intro-level safe-skip count for a shrinking offset well above the window:
// a lower bound on the full predictor, kept as a cross-check.
inline std::int64_t skip_quick_bound(std::int64_t phi, std::int64_t d,
                                     std::int64_t gamma) {
  sim_check(phi > d && gamma > 0, "skip_quick_bound: preconditions");
  return floor_div(phi - d, gamma);
}

struct OracleHit {
  std::int64_t k_low = 0;
  std::int64_t k_high = 0;
};

// Brute-force reference: steps long-train columns one at a time and reports
// the first (short, long) index pair whose events lie within +-d of each
// other, ignoring the current pair (0, 0). max_steps = 0 walks one full
// hyperperiod, after which the offsets repeat.
inline std::optional<OracleHit> oracle_next_overlap(std::int64_t phi,
                                                    std::int64_t t_low,
                                                    std::int64_t t_high,
                                                    std::int64_t d,
                                                    std::int64_t max_steps = 0) {
  sim_check(t_low >= 1 && t_low <= t_high, "oracle: bad periods");
  sim_check(2 * d < t_low, "oracle: window too wide");
  if (max_steps <= 0) max_steps = t_low / std::gcd(t_low, t_high) + 1;
  for (std::int64_t i = 0; i <= max_steps; ++i) {
    std::int64_t psi = floor_mod(phi - i * t_high + d, t_low) - d;
    if (psi > d) continue;
    std::int64_t num = psi + i * t_high - phi;
    if (num % t_low != 0) continue;  // defensive; exact by construction
    std::int64_t j = num / t_low;
    if (j < 0) continue;       // partner predates the short train's reference
    if (i == 0 && j == 0) continue;  // the current pair
    return OracleHit{j, i};
  }
  return std::nullopt;
}

// Checks one prediction against the column residues it claims to cover:
// no in-window pair may exist strictly inside the executed corners (0, 0),
// (k_high, k_low) and the optional extra short-train index. Used by the
// engine's validation option and by the property tests.
inline bool prediction_window_safe(std::int64_t phi, std::int64_t t_low,
                                   std::int64_t t_high, std::int64_t d,
                                   const SkipPrediction& p,
                                   std::string* why = nullptr) {
  auto complain = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::int64_t k_high = p.never ? t_low / std::gcd(t_low, t_high) + 1 : p.k_high;
  for (std::int64_t i = 0; i <= k_high; ++i) {
    std::int64_t psi = floor_mod(phi - i * t_high + d, t_low) - d;
    if (psi > d) continue;
    std::int64_t num = psi + i * t_high - phi;
    std::int64_t j = num / t_low;
    if (j < 0 || (i == 0 && j == 0)) continue;
    if (p.never)
      return complain("never-prediction but overlap at column " +
                      std::to_string(i));
    if (j > p.k_low) continue;  // beyond the window; later exams own it
    bool covered_i = i == 0 || i == p.k_high;
    bool covered_j = j == 0 || j == p.k_low || j == p.extra_low;
    if (!covered_i || !covered_j)
      return complain("overlap at skipped pair (long " + std::to_string(i) +
                      ", short " + std::to_string(j) + ")");
  }
  return true;
}

}  // namespace cyclesim
