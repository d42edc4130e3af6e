#include "largeorder/oracle.hpp"

namespace largeorder::oracle {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % n);
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) {
    return false;
  }
  for (std::uint64_t p = 2; p <= n / p; ++p) {
    if (n % p == 0) {
      return false;
    }
  }
  return true;
}

std::optional<std::uint64_t> ord_up_to(std::uint64_t alpha, std::uint64_t n, std::uint64_t limit) {
  if (n < 2) {
    throw PreconditionError("oracle modulus must be at least 2");
  }
  alpha %= n;
  if (gcd_u64(alpha, n) != 1) {
    throw PreconditionError("oracle: element is not invertible");
  }
  std::uint64_t x = alpha;
  for (std::uint64_t k = 1; k <= limit; ++k) {
    if (x == 1) {
      return k;
    }
    x = mul_mod(x, alpha, n);
  }
  return std::nullopt;
}

std::uint64_t ord(std::uint64_t alpha, std::uint64_t n) {
  // The order never exceeds N - 1.
  auto k = ord_up_to(alpha, n, n);
  if (!k) {
    throw InternalError("oracle: order not found below N");
  }
  return *k;
}

std::uint64_t ord_oracle(const Residue& alpha) {
  return ord(to_u64(alpha.value()), to_u64(alpha.modulus()));
}

std::uint64_t primitive_root_oracle(std::uint64_t p) {
  if (!is_prime(p)) {
    throw PreconditionError("primitive_root_oracle requires a prime");
  }
  if (p == 2) {
    return 1;
  }
  for (std::uint64_t g = 2; g < p; ++g) {
    if (ord(g, p) == p - 1) {
      return g;
    }
  }
  throw InternalError("no primitive root found");
}

VerificationReport verify_outcome(const Int& n, const Int& d, const SearchOutcome& outcome) {
  VerificationReport report{n, d, outcome, false, {}};
  if (const auto* div = std::get_if<NontrivialDivisor>(&outcome)) {
    if (div->d <= 1 || div->d >= n) {
      report.detail = "divisor " + div->d.get_str() + " is not in (1, N)";
    } else if (mpz_divisible_p(n.get_mpz_t(), div->d.get_mpz_t()) == 0) {
      report.detail = "divisor " + div->d.get_str() + " does not divide N";
    } else {
      report.pass = true;
      report.detail = "divisor " + div->d.get_str() + " divides N";
    }
    return report;
  }

  const auto& elem = std::get<LargeOrderElement>(outcome);
  if (elem.alpha.modulus() != n) {
    report.detail = "element modulus differs from N";
    return report;
  }
  const std::uint64_t nn = to_u64(n);
  const std::uint64_t a = to_u64(elem.alpha.value());
  if (a == 0 || gcd_u64(a, nn) != 1) {
    report.detail = "element " + elem.alpha.value().get_str() + " is not a unit";
    return report;
  }
  const std::uint64_t dd = to_u64(d);
  if (auto k = ord_up_to(a, nn, dd)) {
    report.detail = "element " + elem.alpha.value().get_str() + " has order " +
                    std::to_string(*k) + " <= D";
    return report;
  }
  if (elem.known_order) {
    const std::uint64_t claimed = to_u64(*elem.known_order);
    if (ord(a, nn) != claimed) {
      report.detail = "reported order " + elem.known_order->get_str() + " is wrong";
      return report;
    }
  }
  report.pass = true;
  report.detail = "element " + elem.alpha.value().get_str() + " has order > D";
  return report;
}

}  // namespace largeorder::oracle
