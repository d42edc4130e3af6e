#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "largeorder/arith.hpp"
#include "largeorder/engine.hpp"

namespace largeorder::oracle {

// Deliberately naive references. Everything here runs on 64-bit machine
// words and shares no code with the optimized paths it checks.

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n);
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
bool is_prime(std::uint64_t n);

/// Exact multiplicative order by repeated multiplication.
std::uint64_t ord(std::uint64_t alpha, std::uint64_t n);

/// The order if it is at most `limit`, otherwise nullopt. Costs O(limit).
std::optional<std::uint64_t> ord_up_to(std::uint64_t alpha, std::uint64_t n, std::uint64_t limit);

/// ord_N(alpha) for an invertible residue.
std::uint64_t ord_oracle(const Residue& alpha);

/// Least primitive root modulo a prime p.
std::uint64_t primitive_root_oracle(std::uint64_t p);

struct VerificationReport {
  Int n;
  Int d;
  SearchOutcome outcome;
  bool pass = false;
  std::string detail;
};

/// Checks the outcome against the contract by brute force: a divisor must
/// satisfy 1 < d < N and d | N; an element must be a unit of order > D.
VerificationReport verify_outcome(const Int& n, const Int& d, const SearchOutcome& outcome);

}  // namespace largeorder::oracle
