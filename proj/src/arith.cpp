#include "largeorder/arith.hpp"

#include <cctype>
#include <limits>

namespace largeorder {

Residue::Residue(Int value, Int modulus) : value_(std::move(value)), modulus_(std::move(modulus)) {
  if (modulus_ < 2) {
    throw PreconditionError("residue modulus must be at least 2");
  }
  if (value_ < 0 || value_ >= modulus_) {
    throw PreconditionError("residue value must lie in [0, modulus)");
  }
}

Residue Residue::reduce(const Int& value, const Int& modulus) {
  if (modulus < 2) {
    throw PreconditionError("residue modulus must be at least 2");
  }
  Int r;
  mpz_mod(r.get_mpz_t(), value.get_mpz_t(), modulus.get_mpz_t());
  return Residue(std::move(r), modulus);
}

ModRing::ModRing(Int modulus, OpCounter* counter) : modulus_(std::move(modulus)), counter_(counter) {
  if (modulus_ < 2) {
    throw PreconditionError("modulus must be at least 2");
  }
}

void ModRing::mul(Int& out, const Int& a, const Int& b) const {
  mpz_mul(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_tdiv_r(out.get_mpz_t(), out.get_mpz_t(), modulus_.get_mpz_t());
  if (counter_ != nullptr) {
    ++counter_->multiplications;
  }
}

void ModRing::sqr(Int& out, const Int& a) const {
  mpz_mul(out.get_mpz_t(), a.get_mpz_t(), a.get_mpz_t());
  mpz_tdiv_r(out.get_mpz_t(), out.get_mpz_t(), modulus_.get_mpz_t());
  if (counter_ != nullptr) {
    ++counter_->multiplications;
  }
}

Int ModRing::pow(const Int& base, const Int& exponent) const {
  if (exponent < 0) {
    throw PreconditionError("exponent must be nonnegative");
  }
  if (exponent == 0) {
    return Int(1);
  }
  Int b;
  mpz_mod(b.get_mpz_t(), base.get_mpz_t(), modulus_.get_mpz_t());

  // Most significant bit first: the leading 1 bit seeds the accumulator.
  const auto top = static_cast<long>(mpz_sizeinbase(exponent.get_mpz_t(), 2)) - 1;
  Int acc = b;
  for (long bit = top - 1; bit >= 0; --bit) {
    sqr(acc, acc);
    if (mpz_tstbit(exponent.get_mpz_t(), static_cast<mp_bitcnt_t>(bit)) != 0) {
      mul(acc, acc, b);
    }
  }
  return acc;
}

Residue mod_pow(const Residue& base, const Int& exponent, OpCounter* counter) {
  const ModRing ring(base.modulus(), counter);
  return Residue(ring.pow(base.value(), exponent), base.modulus());
}

Int gcd(const Int& a, const Int& b) {
  if (a < 0 || b < 0) {
    throw PreconditionError("gcd arguments must be nonnegative");
  }
  if (a == 0 && b == 0) {
    throw PreconditionError("gcd(0, 0) is undefined");
  }
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

GcdCofactors gcd_ext(const Int& a, const Int& b) {
  if (a < 0 || b < 0) {
    throw PreconditionError("gcd arguments must be nonnegative");
  }
  if (a == 0 && b == 0) {
    throw PreconditionError("gcd(0, 0) is undefined");
  }
  GcdCofactors r;
  mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

namespace {

Int pow_ui(const Int& x, unsigned k) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), k);
  return r;
}

}  // namespace

Int integer_root(const Int& n, unsigned k) {
  if (n < 1) {
    throw PreconditionError("integer_root requires n >= 1");
  }
  if (k < 2) {
    throw PreconditionError("integer_root requires k >= 2");
  }
  if (n < 2) {
    return n;
  }

  // Start above the root: 2^ceil(bits/k) > n^(1/k).
  const std::size_t bits = bit_length(n);
  Int x = 1;
  x <<= static_cast<mp_bitcnt_t>((bits + k - 1) / k);

  // Integer Newton is monotonically decreasing from above until it stalls.
  while (true) {
    Int q = n / pow_ui(x, k - 1);
    Int next = ((k - 1) * x + q) / k;
    if (next >= x) {
      break;
    }
    x = std::move(next);
  }
  while (pow_ui(x, k) > n) {
    --x;
  }
  while (pow_ui(x + 1, k) <= n) {
    ++x;
  }
  return x;
}

Int ceil_root(const Int& n, unsigned k) {
  Int r = integer_root(n, k);
  if (pow_ui(r, k) < n) {
    ++r;
  }
  return r;
}

std::size_t bit_length(const Int& n) {
  if (n <= 0) {
    throw PreconditionError("bit_length requires a positive integer");
  }
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

bool pow2_less_than(const Int& exponent, const Int& n) {
  if (exponent < 0) {
    throw PreconditionError("exponent must be nonnegative");
  }
  if (n <= 1) {
    return false;
  }
  // 2^(bits-1) <= n < 2^bits.
  const Int top = static_cast<unsigned long>(bit_length(n) - 1);
  if (exponent < top) {
    return true;
  }
  if (exponent > top) {
    return false;
  }
  // 2^top < n unless n is exactly a power of two.
  return mpz_scan1(n.get_mpz_t(), 0) != static_cast<mp_bitcnt_t>(bit_length(n) - 1);
}

Int parse_decimal(const std::string& text) {
  std::size_t i = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    i = 1;
  }
  if (i == text.size()) {
    throw PreconditionError("expected a decimal integer, got '" + text + "'");
  }
  for (std::size_t j = i; j < text.size(); ++j) {
    if (std::isdigit(static_cast<unsigned char>(text[j])) == 0) {
      throw PreconditionError("expected a decimal integer, got '" + text + "'");
    }
  }
  Int r;
  const std::string digits = text[0] == '+' ? text.substr(1) : text;
  if (r.set_str(digits, 10) != 0) {
    throw PreconditionError("expected a decimal integer, got '" + text + "'");
  }
  return r;
}

std::uint64_t to_u64(const Int& n) {
  if (n < 0 || mpz_sizeinbase(n.get_mpz_t(), 2) > 64) {
    throw std::out_of_range("integer does not fit in 64 bits: " + n.get_str());
  }
  static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
  return static_cast<std::uint64_t>(mpz_get_ui(n.get_mpz_t()));
}

}  // namespace largeorder
