#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "largeorder/arith.hpp"
#include "largeorder/factorize.hpp"

namespace largeorder {

/// A unit alpha of Z_N together with its exact multiplicative order and the
/// factorization of that order.
struct OrderedElement {
  Residue alpha;
  Int order;
  Factorization order_factorization;

  /// The identity of Z_N, order 1.
  static OrderedElement identity(const Int& modulus);
};

struct ExactOrder {
  Int order;
  Factorization factorization;
};

struct ExceedsBound {};

/// Outcome of a bounded order search.
using BoundedOrderResult = std::variant<ExactOrder, ExceedsBound>;

inline bool is_exact(const BoundedOrderResult& r) { return std::holds_alternative<ExactOrder>(r); }

struct OrderSearchOptions {
  /// Each search up to T must use at most budget_constant * sqrt(T) group
  /// multiplications.
  unsigned budget_constant = 24;
  /// Restrict baby steps to exponents coprime to a small primorial after
  /// raising alpha to the smooth part of the search range.
  bool primorial_steps = false;
};

/// Accumulated instrumentation over any number of bounded searches.
struct OrderSearchStats {
  std::uint64_t calls = 0;
  std::uint64_t multiplications = 0;
  /// Largest observed multiplications / sqrt(T).
  double worst_budget_ratio = 0.0;
  std::uint64_t budget_violations = 0;

  void merge(const OrderSearchStats& other);
};

/// Largest T accepted by the bounded searches.
inline constexpr std::uint64_t kMaxSearchBound = std::uint64_t{1} << 62;

/// Decides whether ord_N(alpha) <= T by babystep-giantstep and, if so,
/// returns the exact order with its factorization.
BoundedOrderResult order_search_up_to_T(const Residue& alpha, std::uint64_t T,
                                        const OrderSearchOptions& options = {},
                                        OrderSearchStats* stats = nullptr);

/// Reduces an annihilating exponent e (alpha^e == 1) to the exact order by
/// stripping primes of `f` in increasing order.
ExactOrder refine_order(const Residue& alpha, const Int& e, const Factorization& f,
                        OpCounter* counter = nullptr);

/// Runs order_search_up_to_T for T = 1, 2, 4, ..., 2^ceil(log2 D). Returns
/// ExactOrder only when the order is at most D.
BoundedOrderResult order_bounded(const Residue& alpha, const Int& D,
                                 const OrderSearchOptions& options = {},
                                 OrderSearchStats* stats = nullptr);

/// The pieces of an lcm combination: combined = alpha_part * beta_part where
/// the two parts have coprime orders whose product is lcm(u, v).
struct LcmCombination {
  OrderedElement combined;
  OrderedElement alpha_part;
  OrderedElement beta_part;
};

LcmCombination combine_orders_with_parts(const OrderedElement& a, const OrderedElement& b,
                                         OpCounter* counter = nullptr);

/// An element whose order is lcm(ord(a), ord(b)).
OrderedElement combine_orders(const OrderedElement& a, const OrderedElement& b,
                              OpCounter* counter = nullptr);

/// gcd(beta^(m/r) - 1, N) for a single prime r | m. Requires ord_N(beta) == m.
Int split_at_prime(const Residue& beta, const Int& m, const Int& r, OpCounter* counter = nullptr);

struct OrderSplit {
  Int divisor;
  Int prime;  // the r that produced it
};

/// Tries every prime r | m in increasing order and returns the first
/// gcd(beta^(m/r) - 1, N) different from 1. Requires ord_N(beta) == m >= 2.
std::optional<OrderSplit> try_split_via_order(const Residue& beta, const Int& m,
                                              const Factorization& f,
                                              OpCounter* counter = nullptr);

}  // namespace largeorder
