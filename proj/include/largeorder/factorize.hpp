#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "largeorder/arith.hpp"

namespace largeorder {

struct PrimePower {
  Int prime;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime-power decomposition with primes strictly increasing and every
/// exponent at least 1. The empty list represents 1.
class Factorization {
 public:
  Factorization() = default;

  /// Validates ordering and exponents; primality is the caller's contract.
  explicit Factorization(std::vector<PrimePower> entries);

  const std::vector<PrimePower>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  /// Exponent of `prime`, 0 if absent.
  unsigned exponent_of(const Int& prime) const;

  /// Product of the prime powers.
  Int value() const;

  /// Removes one copy of `prime`, dropping the entry when its exponent hits 0.
  void divide_by(const Int& prime);

  /// Product of two factorizations.
  Factorization multiplied_by(const Factorization& other) const;

  /// e.g. "2^3 * 3^2 * 5", or "1" when empty.
  std::string to_string() const;

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  std::vector<PrimePower> entries_;
};

Int value_of(const Factorization& f);

/// Complete factorization of m >= 1 by trial division: 2, then odd
/// candidates up to the square root of the shrinking cofactor. When
/// `divisions` is non-null it receives the number of remainder tests.
Factorization trial_division_factor(const Int& m, std::uint64_t* divisions = nullptr);

/// Per-prime maximum of exponents; represents lcm(value_of(u), value_of(v)).
Factorization lcm_factorizations(const Factorization& u, const Factorization& v);

}  // namespace largeorder
