#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace largeorder {

using Int = mpz_class;

/// Raised when a caller violates a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an internal consistency check fails. Seeing one is a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Tally of modular multiplications (squarings included).
struct OpCounter {
  std::uint64_t multiplications = 0;
};

/// An element of Z_N, always stored as its representative in [0, N).
class Residue {
 public:
  /// Throws PreconditionError unless modulus >= 2 and 0 <= value < modulus.
  Residue(Int value, Int modulus);

  /// Reduces an arbitrary integer into [0, modulus).
  static Residue reduce(const Int& value, const Int& modulus);

  const Int& value() const { return value_; }
  const Int& modulus() const { return modulus_; }

  bool is_one() const { return value_ == 1; }

  friend bool operator==(const Residue& a, const Residue& b) {
    return a.value_ == b.value_ && a.modulus_ == b.modulus_;
  }

 private:
  Int value_;
  Int modulus_;
};

/// Modular multiplication context for a fixed modulus. Operations write into
/// caller-owned storage so hot loops do not allocate.
class ModRing {
 public:
  explicit ModRing(Int modulus, OpCounter* counter = nullptr);

  const Int& modulus() const { return modulus_; }

  /// out = a * b mod N. `out` may alias either operand.
  void mul(Int& out, const Int& a, const Int& b) const;
  void sqr(Int& out, const Int& a) const;

  /// base^exponent mod N by left-to-right binary powering.
  Int pow(const Int& base, const Int& exponent) const;

 private:
  Int modulus_;
  OpCounter* counter_;
};

/// base^exponent in Z_N. exponent 0 yields 1 for every base.
Residue mod_pow(const Residue& base, const Int& exponent, OpCounter* counter = nullptr);

/// Greatest common divisor of two nonnegative integers, not both zero.
Int gcd(const Int& a, const Int& b);

struct GcdCofactors {
  Int g;
  Int s;
  Int t;  // g == s*a + t*b
};

/// gcd together with Bezout cofactors.
GcdCofactors gcd_ext(const Int& a, const Int& b);

/// floor(n^(1/k)) for n >= 1, k >= 2, computed with integer Newton steps.
Int integer_root(const Int& n, unsigned k);

/// ceil(n^(1/k)) for n >= 1, k >= 2.
Int ceil_root(const Int& n, unsigned k);

/// Number of bits in the binary representation of n > 0.
std::size_t bit_length(const Int& n);

/// True iff 2^exponent < n, decided without forming 2^exponent.
bool pow2_less_than(const Int& exponent, const Int& n);

/// Parses a base-10 integer, rejecting anything else.
Int parse_decimal(const std::string& text);

/// Converts to uint64, throwing std::out_of_range if it does not fit.
std::uint64_t to_u64(const Int& n);

}  // namespace largeorder
