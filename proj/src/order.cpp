#include "largeorder/order.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>
#include <vector>

namespace largeorder {

OrderedElement OrderedElement::identity(const Int& modulus) {
  return OrderedElement{Residue(Int(1), modulus), Int(1), Factorization()};
}

void OrderSearchStats::merge(const OrderSearchStats& other) {
  calls += other.calls;
  multiplications += other.multiplications;
  worst_budget_ratio = std::max(worst_budget_ratio, other.worst_budget_ratio);
  budget_violations += other.budget_violations;
}

namespace {

std::uint64_t isqrt_ceil(std::uint64_t t) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(t)));
  while (r * r > t) {
    --r;
  }
  while ((r + 1) * (r + 1) <= t) {
    ++r;
  }
  return r * r == t ? r : r + 1;
}

std::uint64_t low_limb(const Int& v) {
  return static_cast<std::uint64_t>(mpz_getlimbn(v.get_mpz_t(), 0));
}

void require_unit(const Residue& alpha) {
  if (alpha.value() == 0 || gcd(alpha.value(), alpha.modulus()) != 1) {
    throw PreconditionError("element " + alpha.value().get_str() + " is not invertible modulo " +
                            alpha.modulus().get_str());
  }
}

/// Residues keyed by value, remembering the exponent that produced them.
/// Keys are hashed on the low limb; equal keys are confirmed by full compare.
class BabyStepTable {
 public:
  explicit BabyStepTable(std::size_t capacity) {
    values_.reserve(capacity);
    index_.reserve(capacity);
  }

  void insert(const Int& value, std::uint64_t exponent) {
    index_.emplace(low_limb(value), static_cast<std::uint32_t>(values_.size()));
    values_.push_back(value);
    exponents_.push_back(exponent);
  }

  std::optional<std::uint64_t> find(const Int& value) const {
    auto [lo, hi] = index_.equal_range(low_limb(value));
    for (auto it = lo; it != hi; ++it) {
      if (values_[it->second] == value) {
        return exponents_[it->second];
      }
    }
    return std::nullopt;
  }

 private:
  std::vector<Int> values_;
  std::vector<std::uint64_t> exponents_;
  std::unordered_multimap<std::uint64_t, std::uint32_t> index_;
};

BoundedOrderResult finish(const Residue& alpha, const Int& e, const Factorization& f,
                          std::uint64_t T, OpCounter* counter) {
  ExactOrder exact = refine_order(alpha, e, f, counter);
  if (exact.order > static_cast<unsigned long>(T)) {
    return ExceedsBound{};
  }
  return exact;
}

Int from_u64(std::uint64_t v) { return Int(static_cast<unsigned long>(v)); }

/// Plain babystep-giantstep with b = ceil(sqrt(T)) baby steps.
BoundedOrderResult search_plain(const Residue& alpha, std::uint64_t T, OpCounter& counter) {
  const ModRing ring(alpha.modulus(), &counter);
  const std::uint64_t b = isqrt_ceil(T);

  BabyStepTable table(b);
  Int cur = 1;
  table.insert(cur, 0);
  // A repeated residue alpha^j == alpha^j' certifies alpha^(j - j') == 1.
  // Since alpha^0 is stored, the first repeat is the identity itself.
  for (std::uint64_t j = 1; j <= b; ++j) {
    if (j == 1) {
      cur = alpha.value();
    } else {
      ring.mul(cur, cur, alpha.value());
    }
    if (auto prev = table.find(cur)) {
      const Int e = from_u64(j - *prev);
      return finish(alpha, e, trial_division_factor(e), T, &counter);
    }
    if (j < b) {
      table.insert(cur, j);
    }
  }

  // cur == alpha^b. Giant steps alpha^(i*b) matched against alpha^j, j < b.
  const Int giant = cur;
  const std::uint64_t giant_steps = (T + b - 1) / b;
  for (std::uint64_t i = 1; i <= giant_steps; ++i) {
    if (auto j = table.find(cur)) {
      const Int e = from_u64(i * b - *j);
      return finish(alpha, e, trial_division_factor(e), T, &counter);
    }
    if (i < giant_steps) {
      ring.mul(cur, cur, giant);
    }
  }
  return ExceedsBound{};
}

constexpr std::array<unsigned, 9> kSmallPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23};

/// Babystep-giantstep over exponents coprime to a primorial P. alpha is first
/// raised to E, the product of the largest powers <= T of the primes of P,
/// which leaves an order coprime to P whenever ord(alpha) <= T.
BoundedOrderResult search_primorial(const Residue& alpha, std::uint64_t T, OpCounter& counter) {
  // Largest primorial with 64 * P^2 <= T keeps b comfortably above P.
  std::uint64_t P = 1;
  std::size_t prime_count = 0;
  for (unsigned p : kSmallPrimes) {
    const std::uint64_t next = P * p;
    if (next > T / 64 / next) {
      break;
    }
    P = next;
    ++prime_count;
  }
  if (P == 1) {
    return search_plain(alpha, T, counter);
  }

  const ModRing ring(alpha.modulus(), &counter);

  std::vector<PrimePower> smooth_entries;
  Int E = 1;
  for (std::size_t i = 0; i < prime_count; ++i) {
    const std::uint64_t p = kSmallPrimes[i];
    unsigned k = 0;
    std::uint64_t pk = 1;
    while (pk <= T / p) {
      pk *= p;
      ++k;
    }
    smooth_entries.push_back({from_u64(p), k});
    E *= from_u64(pk);
  }
  const Factorization smooth_part(std::move(smooth_entries));

  const Int beta = ring.pow(alpha.value(), E);
  if (beta == 1) {
    return finish(alpha, E, smooth_part, T, &counter);
  }

  std::vector<std::uint64_t> residues;
  std::uint64_t phi = 0;
  for (std::uint64_t r = 1; r < P; ++r) {
    bool coprime = true;
    for (std::size_t i = 0; i < prime_count; ++i) {
      if (r % kSmallPrimes[i] == 0) {
        coprime = false;
        break;
      }
    }
    if (coprime) {
      residues.push_back(r);
      ++phi;
    }
  }

  // b ~ sqrt(T * P / phi(P)), rounded up to a multiple of P.
  const auto target = static_cast<std::uint64_t>(
      std::ceil(std::sqrt(static_cast<long double>(T) * P / phi)));
  const std::uint64_t b = std::max<std::uint64_t>(P, (target + P - 1) / P * P);

  // Powers of beta for every gap between consecutive coprime exponents.
  std::uint64_t max_gap = 0;
  for (std::size_t i = 0; i < residues.size(); ++i) {
    const std::uint64_t next = i + 1 < residues.size() ? residues[i + 1] : P + residues[0];
    max_gap = std::max(max_gap, next - residues[i]);
  }
  std::vector<Int> gap_power(max_gap + 1);
  gap_power[1] = beta;
  for (std::uint64_t g = 2; g <= max_gap; ++g) {
    ring.mul(gap_power[g], gap_power[g - 1], beta);
  }

  BabyStepTable table(b / P * phi);
  Int cur = beta;
  std::uint64_t j = 1;
  std::uint64_t prev = 1;
  for (std::uint64_t block = 0; block < b; block += P) {
    for (std::uint64_t r : residues) {
      j = block + r;
      if (j != 1) {
        ring.mul(cur, cur, gap_power[j - prev]);
      }
      prev = j;
      if (cur == 1) {
        const Int e = from_u64(j) * E;
        return finish(alpha, e, trial_division_factor(from_u64(j)).multiplied_by(smooth_part), T,
                      &counter);
      }
      table.insert(cur, j);
    }
  }

  const Int giant = ring.pow(beta, from_u64(b));
  const std::uint64_t giant_steps = (T + b - 1) / b;
  cur = giant;
  for (std::uint64_t i = 1; i <= giant_steps; ++i) {
    if (auto hit = table.find(cur)) {
      const Int witness = from_u64(i * b - *hit);
      return finish(alpha, witness * E,
                    trial_division_factor(witness).multiplied_by(smooth_part), T, &counter);
    }
    if (i < giant_steps) {
      ring.mul(cur, cur, giant);
    }
  }
  return ExceedsBound{};
}

}  // namespace

BoundedOrderResult order_search_up_to_T(const Residue& alpha, std::uint64_t T,
                                        const OrderSearchOptions& options,
                                        OrderSearchStats* stats) {
  require_unit(alpha);
  if (T == 0) {
    throw PreconditionError("search bound T must be positive");
  }
  if (T > kMaxSearchBound) {
    throw std::out_of_range("search bound exceeds 2^62");
  }

  OpCounter counter;
  BoundedOrderResult result = alpha.is_one() ? BoundedOrderResult{ExactOrder{Int(1), {}}}
                              : options.primorial_steps ? search_primorial(alpha, T, counter)
                                                        : search_plain(alpha, T, counter);

  if (stats != nullptr) {
    const double ratio =
        static_cast<double>(counter.multiplications) / std::sqrt(static_cast<double>(T));
    ++stats->calls;
    stats->multiplications += counter.multiplications;
    stats->worst_budget_ratio = std::max(stats->worst_budget_ratio, ratio);
    if (ratio > options.budget_constant) {
      ++stats->budget_violations;
    }
  }
  return result;
}

ExactOrder refine_order(const Residue& alpha, const Int& e, const Factorization& f,
                        OpCounter* counter) {
  if (e < 1) {
    throw PreconditionError("annihilating exponent must be positive");
  }
  if (f.value() != e) {
    throw PreconditionError("factorization does not match exponent " + e.get_str());
  }
  const ModRing ring(alpha.modulus(), counter);
  if (ring.pow(alpha.value(), e) != 1) {
    throw InternalError("refine_order: alpha^" + e.get_str() + " != 1 mod " +
                        alpha.modulus().get_str());
  }

  Int m = e;
  Factorization mf = f;
  for (const auto& [q, k] : f.entries()) {
    for (unsigned i = 0; i < k; ++i) {
      Int candidate = m / q;
      if (ring.pow(alpha.value(), candidate) != 1) {
        break;
      }
      m = std::move(candidate);
      mf.divide_by(q);
    }
  }
  return ExactOrder{std::move(m), std::move(mf)};
}

BoundedOrderResult order_bounded(const Residue& alpha, const Int& D,
                                 const OrderSearchOptions& options, OrderSearchStats* stats) {
  if (D < 1) {
    throw PreconditionError("order bound D must be positive");
  }
  // 2^ceil(log2 D): the smallest power of two >= D.
  const std::size_t levels = D == 1 ? 0 : bit_length(D - 1);
  if (levels > 62) {
    throw std::out_of_range("order bound exceeds 2^62");
  }
  const std::uint64_t last = std::uint64_t{1} << levels;
  for (std::uint64_t T = 1; T <= last; T *= 2) {
    BoundedOrderResult r = order_search_up_to_T(alpha, T, options, stats);
    if (const auto* exact = std::get_if<ExactOrder>(&r)) {
      // Found in (T/2, T]; T can overshoot D by less than a factor of two.
      if (exact->order > D) {
        return ExceedsBound{};
      }
      return r;
    }
  }
  return ExceedsBound{};
}

LcmCombination combine_orders_with_parts(const OrderedElement& a, const OrderedElement& b,
                                         OpCounter* counter) {
  if (a.alpha.modulus() != b.alpha.modulus()) {
    throw PreconditionError("combine_orders: elements have different moduli");
  }
  const Int& n = a.alpha.modulus();
  const auto& u = a.order_factorization.entries();
  const auto& v = b.order_factorization.entries();

  // Walk the union of primes with zero exponents filled in. Primes where a
  // has the larger (or equal) power stay with a; the rest go to b.
  Int s = 1;
  Int t = 1;
  std::vector<PrimePower> a_keep;
  std::vector<PrimePower> b_keep;
  Int pp;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < u.size() || j < v.size()) {
    Int q;
    unsigned e = 0;
    unsigned f = 0;
    if (j == v.size() || (i < u.size() && u[i].prime < v[j].prime)) {
      q = u[i].prime;
      e = u[i++].exponent;
    } else if (i == u.size() || v[j].prime < u[i].prime) {
      q = v[j].prime;
      f = v[j++].exponent;
    } else {
      q = u[i].prime;
      e = u[i++].exponent;
      f = v[j++].exponent;
    }
    if (e < f) {
      mpz_pow_ui(pp.get_mpz_t(), q.get_mpz_t(), e);
      s *= pp;
      b_keep.push_back({q, f});
    } else {
      mpz_pow_ui(pp.get_mpz_t(), q.get_mpz_t(), f);
      t *= pp;
      a_keep.push_back({q, e});
    }
  }

  const ModRing ring(n, counter);
  Factorization a_order(std::move(a_keep));
  Factorization b_order(std::move(b_keep));
  Residue a_part(ring.pow(a.alpha.value(), s), n);
  Residue b_part(ring.pow(b.alpha.value(), t), n);
  Int gamma;
  ring.mul(gamma, a_part.value(), b_part.value());

  Factorization w = lcm_factorizations(a.order_factorization, b.order_factorization);
  Int w_value = w.value();
  Int a_value = a_order.value();
  Int b_value = b_order.value();
  return LcmCombination{
      OrderedElement{Residue(std::move(gamma), n), std::move(w_value), std::move(w)},
      OrderedElement{std::move(a_part), std::move(a_value), std::move(a_order)},
      OrderedElement{std::move(b_part), std::move(b_value), std::move(b_order)},
  };
}

OrderedElement combine_orders(const OrderedElement& a, const OrderedElement& b,
                              OpCounter* counter) {
  return combine_orders_with_parts(a, b, counter).combined;
}

Int split_at_prime(const Residue& beta, const Int& m, const Int& r, OpCounter* counter) {
  if (r < 2 || m % r != 0) {
    throw PreconditionError("split_at_prime: r must be a prime divisor of m");
  }
  const Int& n = beta.modulus();
  const ModRing ring(n, counter);
  Int x = ring.pow(beta.value(), m / r);
  if (x == 0) {
    throw PreconditionError("split_at_prime: beta is not invertible");
  }
  x -= 1;
  if (x == 0) {
    throw InternalError("split_at_prime: beta^(m/r) == 1, so m is not the exact order");
  }
  Int g = gcd(x, n);
  if (g == n) {
    throw InternalError("split_at_prime: gcd equals N");
  }
  return g;
}

std::optional<OrderSplit> try_split_via_order(const Residue& beta, const Int& m,
                                              const Factorization& f, OpCounter* counter) {
  if (m < 2) {
    throw PreconditionError("try_split_via_order requires m >= 2");
  }
  for (const auto& entry : f.entries()) {
    Int g = split_at_prime(beta, m, entry.prime, counter);
    if (g != 1) {
      return OrderSplit{std::move(g), entry.prime};
    }
  }
  return std::nullopt;
}

}  // namespace largeorder
