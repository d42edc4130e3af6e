#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "largeorder/arith.hpp"
#include "largeorder/order.hpp"

namespace largeorder {

/// A unit whose order exceeds the requested bound. `known_order` is filled
/// when the engine computed the exact order along the way.
struct LargeOrderElement {
  Residue alpha;
  std::optional<Int> known_order;
};

/// d with 1 < d < N and d | N.
struct NontrivialDivisor {
  Int d;
};

using SearchOutcome = std::variant<LargeOrderElement, NontrivialDivisor>;

struct EngineConfig {
  /// Inputs below this are answered by direct computation.
  Int small_n_threshold = 65536;
  unsigned bsgs_constant = 24;
  bool enable_primorial_optimization = false;
  /// Record per-iteration details in EngineTrace::iterations.
  bool trace = false;
};

/// Where find_large_order produced its answer.
enum class ExitPoint {
  SmallN,           // delegated to small_n_fallback
  EvenN,            // N even, d = 2
  SmallD,           // 2^D < N, alpha = 2
  BetaDividesN,     // a loop value divides N
  OrderExceedsD,    // bounded search failed, alpha = beta
  GcdSplit,         // gcd(beta^(m/r) - 1, N)
  MExceedsD,        // accumulated order passed D
  ProgressionScan,  // d = kM + 1 divides N
  Fallback,         // defensive_fallback
};

enum class Branch {
  DividesN,
  BetaToMSkip,
  OrderExceeds,
  GcdSplit,
  LcmUpdate,
  MExceeds,
};

std::string to_string(ExitPoint e);
std::string to_string(Branch b);

struct IterationRecord {
  Int beta;
  Branch branch;
  std::optional<Int> m;  // set whenever the bounded search found the order
  Int M_after;
  Int alpha_after;
};

struct EngineTrace {
  ExitPoint exit = ExitPoint::SmallN;
  std::vector<IterationRecord> iterations;  // only filled when config.trace

  Int B;  // loop bound, 0 if the loop was not reached
  bool reached_final_stage = false;
  Int M_final;
  Int alpha_final;
  std::optional<Int> Z;
  std::optional<Int> k_hit;

  std::uint64_t fallback_invocations = 0;
  std::uint64_t multiplications = 0;  // outside the bounded searches
  OrderSearchStats order_stats;
};

struct EngineResult {
  SearchOutcome outcome;
  EngineTrace trace;
};

/// Either a unit of Z_N with order > D or a nontrivial divisor of N.
/// Requires N >= 3 and 1 <= D < N - 1.
EngineResult find_large_order(const Int& n, const Int& d, const EngineConfig& config = {});

/// Direct answer for small N: the least prime factor if N is composite,
/// otherwise the least beta with ord_N(beta) > D.
SearchOutcome small_n_fallback(const Int& n, const Int& d);

struct ProgressionHit {
  Int divisor;
  Int k;
};

/// Tests d = kM + 1 for k = 1 .. floor(Z / M) in increasing order and
/// returns the first with 1 < d < N and d | N.
std::optional<ProgressionHit> final_progression_scan(const Int& n, const Int& M, const Int& Z);

/// Unconditional answer by trial division of N, then (N prime) by a scan for
/// an element of order > D.
SearchOutcome defensive_fallback(const Int& n, const Int& d, const OrderSearchOptions& options = {},
                                 OrderSearchStats* stats = nullptr);

}  // namespace largeorder
