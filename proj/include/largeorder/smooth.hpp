#pragma once

#include <cstdint>
#include <vector>

#include "largeorder/arith.hpp"

namespace largeorder {

/// Number of y-smooth integers in [1, x], by enumeration. Intended for
/// x up to about 1e7.
std::uint64_t psi_brute(std::uint64_t x, std::uint64_t y);

/// Largest-prime-factor table for repeated Psi queries up to a fixed limit.
class PsiTable {
 public:
  explicit PsiTable(std::uint64_t limit);

  std::uint64_t limit() const { return static_cast<std::uint64_t>(largest_.size()) - 1; }

  /// Largest prime factor of n (1 for n == 1).
  std::uint32_t largest_prime_factor(std::uint64_t n) const { return largest_.at(n); }

  std::uint64_t psi(std::uint64_t x, std::uint64_t y) const;

  /// Psi(x, y) for every x in [0, limit]; entry 0 is 0.
  std::vector<std::uint32_t> psi_row(std::uint64_t y) const;

 private:
  std::vector<std::uint32_t> largest_;
};

/// x / (log x)^(log x / log y) in double precision, natural logarithms.
/// Requires x >= 4 and x >= y >= 2.
double psi_lower_bound(double x, double y);

struct SmoothBoundInput {
  Int M;  // current order, >= 2
  Int B;  // smoothness bound, >= 3
};

/// Certified value of the integer Z with tildeZ < Z < tildeZ + 2, where
/// tildeZ = 2M * (log 2M)^(log 2M / (log B - 1)).
struct ZBound {
  Int Z;
  /// Enclosure of tildeZ, floors of the interval endpoints.
  Int floor_lo;
  Int floor_hi;
  /// Working precision (bits) of the final, successful evaluation.
  long precision = 0;
  /// Number of precision doublings that were needed.
  int escalations = 0;
  /// z = log tildeZ, rounded to double.
  double log_tilde_z = 0.0;
};

/// Computes Z with directed-rounding interval arithmetic, doubling the
/// working precision until the enclosure pins the answer.
ZBound compute_Z(const SmoothBoundInput& input);

/// log of tildeZ / (log tildeZ)^(log tildeZ / log B) minus log M. The
/// sandwich M < ... < 4M holds iff this lies strictly in (0, log 4).
double tilde_z_sandwich_log_ratio(const SmoothBoundInput& input);

}  // namespace largeorder
