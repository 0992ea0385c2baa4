#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace cyclesim {

// Logic-error check that stays active in release builds. Scheduling into the
// past, misaligned residues and similar bugs must abort the run loudly, never
// produce a plausible-looking result.
inline void sim_check(bool ok, const char* what) {
  if (!ok) throw std::logic_error(what);
}

// Floor/ceil division for a positive divisor and any signed dividend.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && a < 0) ? q - 1 : q;
}

constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && a > 0) ? q + 1 : q;
}

constexpr std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
  return a - floor_div(a, b) * b;
}

inline std::optional<std::int64_t> checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) return std::nullopt;
  return out;
}

inline std::optional<std::int64_t> checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) return std::nullopt;
  return out;
}

// lcm with overflow detection; both arguments must be positive.
inline std::optional<std::int64_t> checked_lcm(std::int64_t a, std::int64_t b) {
  std::int64_t g = std::gcd(a, b);
  return checked_mul(a / g, b);
}

}  // namespace cyclesim
