#include "largeorder/engine.hpp"

#include "largeorder/oracle.hpp"
#include "largeorder/smooth.hpp"

namespace largeorder {

std::string to_string(ExitPoint e) {
  switch (e) {
    case ExitPoint::SmallN: return "small_n";
    case ExitPoint::EvenN: return "even_n";
    case ExitPoint::SmallD: return "small_d";
    case ExitPoint::BetaDividesN: return "beta_divides_n";
    case ExitPoint::OrderExceedsD: return "order_exceeds_d";
    case ExitPoint::GcdSplit: return "gcd_split";
    case ExitPoint::MExceedsD: return "m_exceeds_d";
    case ExitPoint::ProgressionScan: return "progression_scan";
    case ExitPoint::Fallback: return "fallback";
  }
  return "unknown";
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::DividesN: return "divides_n";
    case Branch::BetaToMSkip: return "beta_to_m_skip";
    case Branch::OrderExceeds: return "m_exceeds";
    case Branch::GcdSplit: return "gcd_split";
    case Branch::LcmUpdate: return "lcm_update";
    case Branch::MExceeds: return "M_exceeds";
  }
  return "unknown";
}

namespace {

void require_inputs(const Int& n, const Int& d) {
  if (n < 3) {
    throw PreconditionError("N must be at least 3");
  }
  if (d < 1) {
    throw PreconditionError("D must be at least 1");
  }
  if (d >= n - 1) {
    throw PreconditionError("D must be less than N - 1");
  }
}

}  // namespace

SearchOutcome small_n_fallback(const Int& n, const Int& d) {
  require_inputs(n, d);
  const std::uint64_t nn = to_u64(n);
  const std::uint64_t dd = to_u64(d);
  for (std::uint64_t p = 2; p <= nn / p; ++p) {
    if (nn % p == 0) {
      return NontrivialDivisor{Int(static_cast<unsigned long>(p))};
    }
  }
  // N is prime, so a primitive root (order N - 1 > D) exists below N.
  for (std::uint64_t beta = 2; beta < nn; ++beta) {
    if (!oracle::ord_up_to(beta, nn, dd)) {
      return LargeOrderElement{Residue(Int(static_cast<unsigned long>(beta)), n), std::nullopt};
    }
  }
  throw InternalError("small_n_fallback: no element of order > D modulo prime " + n.get_str());
}

std::optional<ProgressionHit> final_progression_scan(const Int& n, const Int& M, const Int& Z) {
  if (M < 2) {
    throw PreconditionError("progression scan requires M >= 2");
  }
  if (Z <= 2 * M) {
    throw PreconditionError("progression scan requires Z > 2M");
  }
  const Int k_max = Z / M;
  Int candidate = M + 1;
  for (Int k = 1; k <= k_max; ++k, candidate += M) {
    // Candidates only grow; none from here on can be a proper divisor.
    if (candidate >= n) {
      break;
    }
    if (mpz_divisible_p(n.get_mpz_t(), candidate.get_mpz_t()) != 0) {
      return ProgressionHit{candidate, k};
    }
  }
  return std::nullopt;
}

SearchOutcome defensive_fallback(const Int& n, const Int& d, const OrderSearchOptions& options,
                                 OrderSearchStats* stats) {
  require_inputs(n, d);
  if (mpz_even_p(n.get_mpz_t()) != 0) {
    return NontrivialDivisor{Int(2)};
  }
  for (Int p = 3; p * p <= n; p += 2) {
    if (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t()) != 0) {
      return NontrivialDivisor{p};
    }
  }
  for (Int beta = 2; beta < n; ++beta) {
    const Residue candidate(beta, n);
    if (!is_exact(order_bounded(candidate, d, options, stats))) {
      return LargeOrderElement{candidate, std::nullopt};
    }
  }
  throw InternalError("defensive_fallback: no element of order > D modulo prime " + n.get_str());
}

EngineResult find_large_order(const Int& n, const Int& d, const EngineConfig& config) {
  require_inputs(n, d);
  if (config.small_n_threshold < 3) {
    throw PreconditionError("small_n_threshold must be at least 3");
  }

  EngineTrace trace;
  OpCounter counter;
  const OrderSearchOptions options{config.bsgs_constant, config.enable_primorial_optimization};

  auto done = [&](SearchOutcome outcome, ExitPoint exit) {
    trace.exit = exit;
    trace.multiplications = counter.multiplications;
    return EngineResult{std::move(outcome), std::move(trace)};
  };

  if (mpz_even_p(n.get_mpz_t()) != 0) {
    return done(NontrivialDivisor{Int(2)}, ExitPoint::EvenN);
  }
  if (pow2_less_than(d, n)) {
    // 2, 4, ..., 2^D are all below N and none is 1.
    return done(LargeOrderElement{Residue(Int(2), n), std::nullopt}, ExitPoint::SmallD);
  }
  if (n < config.small_n_threshold) {
    return done(small_n_fallback(n, d), ExitPoint::SmallN);
  }

  const Int B = ceil_root(d, 3);
  trace.B = B;
  const ModRing ring(n, &counter);
  OrderedElement current = OrderedElement::identity(n);

  auto record = [&](const Int& beta, Branch branch, const std::optional<Int>& m) {
    if (config.trace) {
      trace.iterations.push_back(
          IterationRecord{beta, branch, m, current.order, current.alpha.value()});
    }
  };

  for (Int beta = 2; beta <= B; ++beta) {
    if (mpz_divisible_p(n.get_mpz_t(), beta.get_mpz_t()) != 0) {
      record(beta, Branch::DividesN, std::nullopt);
      return done(NontrivialDivisor{beta}, ExitPoint::BetaDividesN);
    }
    if (ring.pow(beta, current.order) == 1) {
      record(beta, Branch::BetaToMSkip, std::nullopt);
      continue;
    }

    const Residue b(beta, n);
    BoundedOrderResult search = order_bounded(b, d, options, &trace.order_stats);
    auto* exact = std::get_if<ExactOrder>(&search);
    if (exact == nullptr) {
      record(beta, Branch::OrderExceeds, std::nullopt);
      return done(LargeOrderElement{b, std::nullopt}, ExitPoint::OrderExceedsD);
    }

    if (auto split = try_split_via_order(b, exact->order, exact->factorization, &counter)) {
      record(beta, Branch::GcdSplit, exact->order);
      return done(NontrivialDivisor{std::move(split->divisor)}, ExitPoint::GcdSplit);
    }

    current = combine_orders(current, OrderedElement{b, exact->order, exact->factorization},
                             &counter);
    if (current.order > d) {
      record(beta, Branch::MExceeds, exact->order);
      return done(LargeOrderElement{current.alpha, current.order}, ExitPoint::MExceedsD);
    }
    record(beta, Branch::LcmUpdate, exact->order);
  }

  trace.reached_final_stage = true;
  trace.M_final = current.order;
  trace.alpha_final = current.alpha.value();

  // The smooth-number bound needs log B > 1; with B = 2 go straight to the
  // fallback.
  if (B >= 3) {
    const ZBound zb = compute_Z(SmoothBoundInput{current.order, B});
    trace.Z = zb.Z;
    if (auto hit = final_progression_scan(n, current.order, zb.Z)) {
      trace.k_hit = hit->k;
      return done(NontrivialDivisor{std::move(hit->divisor)}, ExitPoint::ProgressionScan);
    }
  }

  ++trace.fallback_invocations;
  return done(defensive_fallback(n, d, options, &trace.order_stats), ExitPoint::Fallback);
}

}  // namespace largeorder
