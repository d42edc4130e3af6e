#include <random>

#include <gtest/gtest.h>

#include "largeorder/factorize.hpp"
#include "largeorder/oracle.hpp"
#include "largeorder/order.hpp"

using namespace largeorder;

namespace {

Factorization fac(std::initializer_list<std::pair<unsigned long, unsigned>> pairs) {
  std::vector<PrimePower> v;
  for (const auto& [p, e] : pairs) {
    v.push_back(PrimePower{Int(p), e});
  }
  return Factorization(std::move(v));
}

Residue res(unsigned long a, unsigned long n) { return Residue(Int(a), Int(n)); }

OrderedElement ordered(unsigned long a, unsigned long n) {
  const Residue r = res(a, n);
  const auto m = oracle::ord_oracle(r);
  return OrderedElement{r, Int(static_cast<unsigned long>(m)),
                        trial_division_factor(Int(static_cast<unsigned long>(m)))};
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> ps;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) {
        n /= p;
      }
    }
  }
  if (n > 1) {
    ps.push_back(n);
  }
  return ps;
}

}  // namespace

TEST(OrderSearch, Examples) {
  auto r = order_search_up_to_T(res(1, 11), 5);
  ASSERT_TRUE(is_exact(r));
  EXPECT_EQ(std::get<ExactOrder>(r).order, 1);
  EXPECT_TRUE(std::get<ExactOrder>(r).factorization.empty());

  r = order_search_up_to_T(res(3, 7), 10);
  ASSERT_TRUE(is_exact(r));
  EXPECT_EQ(std::get<ExactOrder>(r).order, 6);
  EXPECT_EQ(std::get<ExactOrder>(r).factorization, fac({{2, 1}, {3, 1}}));

  EXPECT_FALSE(is_exact(order_search_up_to_T(res(2, 7), 2)));
}

TEST(OrderSearch, RejectsNonUnits) {
  EXPECT_THROW(order_search_up_to_T(res(3, 9), 5), PreconditionError);
  EXPECT_THROW(order_search_up_to_T(res(0, 9), 5), PreconditionError);
  EXPECT_THROW(order_search_up_to_T(res(2, 9), 0), PreconditionError);
}

class OrderSearchModes : public ::testing::TestWithParam<bool> {};

TEST_P(OrderSearchModes, MatchesOracleExhaustively) {
  const OrderSearchOptions opts{24, GetParam()};
  OrderSearchStats stats;
  for (std::uint64_t n = 2; n <= 400; ++n) {
    for (std::uint64_t a = 1; a < n; ++a) {
      if (oracle::gcd_u64(a, n) != 1) {
        continue;
      }
      const std::uint64_t m = oracle::ord(a, n);
      for (std::uint64_t T : {1, 2, 3, 5, 8, 37, 100, 401}) {
        const auto r = order_search_up_to_T(res(a, n), T, opts, &stats);
        ASSERT_EQ(is_exact(r), m <= T) << a << " mod " << n << " T=" << T;
        if (m <= T) {
          const auto& e = std::get<ExactOrder>(r);
          ASSERT_EQ(e.order, Int(static_cast<unsigned long>(m)));
          ASSERT_EQ(value_of(e.factorization), e.order);
        }
      }
    }
  }
  EXPECT_EQ(stats.budget_violations, 0u);
  EXPECT_LE(stats.worst_budget_ratio, 24.0);
}

TEST_P(OrderSearchModes, LargeBoundsOnPrimes) {
  const OrderSearchOptions opts{24, GetParam()};
  OrderSearchStats stats;
  for (std::uint64_t p : {1'000'003UL, 999'983UL, 65'537UL, 7'919UL}) {
    for (std::uint64_t a : {2UL, 3UL, 5UL, p - 1}) {
      const std::uint64_t m = oracle::ord(a, p);
      for (std::uint64_t T : {m - 1, m, m + 1, 4 * m, 1'000'000UL}) {
        if (T == 0) {
          continue;
        }
        const auto r = order_search_up_to_T(res(a, p), T, opts, &stats);
        ASSERT_EQ(is_exact(r), m <= T) << a << " mod " << p << " T=" << T;
        if (m <= T) {
          ASSERT_EQ(std::get<ExactOrder>(r).order, Int(static_cast<unsigned long>(m)));
        }
      }
    }
  }
  EXPECT_EQ(stats.budget_violations, 0u);
}

INSTANTIATE_TEST_SUITE_P(Plain, OrderSearchModes, ::testing::Values(false));
INSTANTIATE_TEST_SUITE_P(Primorial, OrderSearchModes, ::testing::Values(true));

TEST(OrderSearch, BudgetOnLargeModulus) {
  const Int p("18446744073709551557");
  OrderSearchStats stats;
  for (std::uint64_t T = 1; T <= (1UL << 22); T *= 4) {
    EXPECT_FALSE(is_exact(order_search_up_to_T(Residue(2, p), T, {}, &stats)));
  }
  EXPECT_EQ(stats.budget_violations, 0u);
  EXPECT_LE(stats.worst_budget_ratio, 24.0);
}

TEST(RefineOrder, Examples) {
  EXPECT_EQ(refine_order(res(1, 7), 12, fac({{2, 2}, {3, 1}})).order, 1);
  EXPECT_TRUE(refine_order(res(1, 7), 12, fac({{2, 2}, {3, 1}})).factorization.empty());
  const ExactOrder two = refine_order(res(2, 7), 6, fac({{2, 1}, {3, 1}}));
  EXPECT_EQ(two.order, 3);
  EXPECT_EQ(two.factorization, fac({{3, 1}}));
  EXPECT_EQ(refine_order(res(3, 7), 6, fac({{2, 1}, {3, 1}})).order, 6);
}

TEST(RefineOrder, RejectsNonAnnihilatingExponent) {
  EXPECT_THROW(refine_order(res(3, 7), 3, fac({{3, 1}})), InternalError);
  EXPECT_THROW(refine_order(res(3, 7), 6, fac({{3, 1}})), PreconditionError);
}

TEST(OrderBounded, Examples) {
  auto r = order_bounded(res(1, 5), 1);
  ASSERT_TRUE(is_exact(r));
  EXPECT_EQ(std::get<ExactOrder>(r).order, 1);

  EXPECT_FALSE(is_exact(order_bounded(res(2, 91), 8)));

  r = order_bounded(res(2, 217), 15);
  ASSERT_TRUE(is_exact(r));
  EXPECT_EQ(std::get<ExactOrder>(r).order, 15);
  EXPECT_EQ(std::get<ExactOrder>(r).factorization, fac({{3, 1}, {5, 1}}));
}

TEST(OrderBounded, ExactOnlyWithinBound) {
  // The last budget 2^ceil(log2 D) can exceed D; orders in (D, 2^k] must
  // still be reported as exceeding D.
  for (std::uint64_t n = 3; n <= 300; ++n) {
    for (std::uint64_t a = 2; a < n; ++a) {
      if (oracle::gcd_u64(a, n) != 1) {
        continue;
      }
      const std::uint64_t m = oracle::ord(a, n);
      for (std::uint64_t d : {1, 3, 5, 6, 9, 17, 100}) {
        ASSERT_EQ(is_exact(order_bounded(res(a, n), Int(d))), m <= d)
            << a << " mod " << n << " D=" << d;
      }
    }
  }
}

TEST(CombineOrders, Examples) {
  const OrderedElement id = OrderedElement::identity(Int(13));
  const OrderedElement c = combine_orders(id, id);
  EXPECT_EQ(c.order, 1);
  EXPECT_TRUE(c.alpha.is_one());

  const LcmCombination l = combine_orders_with_parts(ordered(5, 13), ordered(4, 13));
  EXPECT_EQ(l.combined.alpha.value(), 2);
  EXPECT_EQ(l.combined.order, 12);
  EXPECT_EQ(l.beta_part.alpha.value(), 3);

  const OrderedElement g = combine_orders(ordered(6, 7), ordered(2, 7));
  EXPECT_EQ(g.alpha.value(), 5);
  EXPECT_EQ(g.order, 6);
}

TEST(CombineOrders, RejectsMixedModuli) {
  EXPECT_THROW(combine_orders(ordered(2, 7), ordered(2, 11)), PreconditionError);
}

TEST(CombineOrders, RandomInstancesMatchOracle) {
  std::mt19937_64 rng(2024);
  int done = 0;
  while (done < 1000) {
    const std::uint64_t n = 3 + rng() % 9998;
    const std::uint64_t a = 1 + rng() % (n - 1);
    const std::uint64_t b = 1 + rng() % (n - 1);
    if (oracle::gcd_u64(a, n) != 1 || oracle::gcd_u64(b, n) != 1) {
      continue;
    }
    const OrderedElement A = ordered(a, n);
    const OrderedElement B = ordered(b, n);
    const LcmCombination l = combine_orders_with_parts(A, B);
    const std::uint64_t u = A.order.get_ui();
    const std::uint64_t v = B.order.get_ui();
    const std::uint64_t w = u / oracle::gcd_u64(u, v) * v;
    ASSERT_EQ(oracle::ord_oracle(l.combined.alpha), w);
    ASSERT_EQ(l.combined.order, Int(static_cast<unsigned long>(w)));
    ASSERT_EQ(value_of(l.combined.order_factorization), l.combined.order);
    const std::uint64_t x = oracle::ord_oracle(l.alpha_part.alpha);
    const std::uint64_t y = oracle::ord_oracle(l.beta_part.alpha);
    ASSERT_EQ(oracle::gcd_u64(x, y), 1u);
    ASSERT_EQ(x * y, w);
    ++done;
  }
}

TEST(SplitViaOrder, Examples) {
  EXPECT_FALSE(try_split_via_order(res(2, 7), 3, fac({{3, 1}})).has_value());

  const auto s = try_split_via_order(res(2, 217), 15, fac({{3, 1}, {5, 1}}));
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->divisor, 31);
  EXPECT_EQ(s->prime, 3);

  EXPECT_EQ(split_at_prime(res(2, 217), 15, 5), 7);
  EXPECT_EQ(split_at_prime(res(2, 217), 15, 3), 31);
}

TEST(SplitViaOrder, RejectsWrongOrder) {
  EXPECT_THROW(try_split_via_order(res(2, 7), 1, Factorization{}), PreconditionError);
  // 2 has order 3 mod 7, so 2^(6/2) == 1.
  EXPECT_THROW(split_at_prime(res(2, 7), 6, 2), InternalError);
}

TEST(SplitViaOrder, EquivalentToEqualLocalOrders) {
  for (std::uint64_t n = 9; n <= 10'000; n += 2) {
    const auto ps = prime_divisors(n);
    if (ps.size() == 1 && ps[0] == n) {
      continue;
    }
    for (std::uint64_t beta : {2UL, 3UL, 5UL, n - 2, n / 2 + 1}) {
      if (beta < 2 || beta >= n || oracle::gcd_u64(beta, n) != 1) {
        continue;
      }
      const std::uint64_t m = oracle::ord(beta, n);
      if (m < 2) {
        continue;
      }
      bool all_equal = true;
      for (std::uint64_t p : ps) {
        all_equal = all_equal && oracle::ord(beta % p, p) == m;
      }
      const auto split = try_split_via_order(res(beta, n), Int(static_cast<unsigned long>(m)),
                                             trial_division_factor(Int(static_cast<unsigned long>(m))));
      ASSERT_EQ(!split.has_value(), all_equal) << beta << " mod " << n;
      if (split) {
        ASSERT_GT(split->divisor, 1);
        ASSERT_LT(split->divisor, Int(static_cast<unsigned long>(n)));
        ASSERT_EQ(n % split->divisor.get_ui(), 0u);
      }
    }
  }
}
