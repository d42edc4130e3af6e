#include "largeorder/factorize.hpp"

#include <algorithm>
#include <sstream>

namespace largeorder {

Factorization::Factorization(std::vector<PrimePower> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].prime < 2) {
      throw PreconditionError("factorization prime must be at least 2");
    }
    if (entries_[i].exponent == 0) {
      throw PreconditionError("factorization exponents must be positive");
    }
    if (i > 0 && entries_[i - 1].prime >= entries_[i].prime) {
      throw PreconditionError("factorization primes must be strictly increasing");
    }
  }
}

unsigned Factorization::exponent_of(const Int& prime) const {
  for (const auto& e : entries_) {
    if (e.prime == prime) {
      return e.exponent;
    }
  }
  return 0;
}

Int Factorization::value() const {
  Int v = 1;
  Int pp;
  for (const auto& e : entries_) {
    mpz_pow_ui(pp.get_mpz_t(), e.prime.get_mpz_t(), e.exponent);
    v *= pp;
  }
  return v;
}

void Factorization::divide_by(const Int& prime) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const PrimePower& e) { return e.prime == prime; });
  if (it == entries_.end()) {
    throw PreconditionError("cannot divide by a prime that is not present");
  }
  if (--it->exponent == 0) {
    entries_.erase(it);
  }
}

Factorization Factorization::multiplied_by(const Factorization& other) const {
  std::vector<PrimePower> out;
  out.reserve(entries_.size() + other.entries_.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < entries_.size() || j < other.entries_.size()) {
    if (j == other.entries_.size() ||
        (i < entries_.size() && entries_[i].prime < other.entries_[j].prime)) {
      out.push_back(entries_[i++]);
    } else if (i == entries_.size() || other.entries_[j].prime < entries_[i].prime) {
      out.push_back(other.entries_[j++]);
    } else {
      out.push_back({entries_[i].prime, entries_[i].exponent + other.entries_[j].exponent});
      ++i;
      ++j;
    }
  }
  return Factorization(std::move(out));
}

std::string Factorization::to_string() const {
  if (entries_.empty()) {
    return "1";
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0) {
      os << " * ";
    }
    os << entries_[i].prime.get_str();
    if (entries_[i].exponent > 1) {
      os << '^' << entries_[i].exponent;
    }
  }
  return os.str();
}

Int value_of(const Factorization& f) { return f.value(); }

namespace {

Factorization factor_u64(std::uint64_t m, std::uint64_t& divisions) {
  std::vector<PrimePower> out;
  auto strip = [&](std::uint64_t d) {
    unsigned e = 0;
    while (true) {
      ++divisions;
      if (m % d != 0) {
        break;
      }
      m /= d;
      ++e;
    }
    if (e > 0) {
      out.push_back({Int(static_cast<unsigned long>(d)), e});
    }
  };
  strip(2);
  for (std::uint64_t d = 3; d <= m / d; d += 2) {
    strip(d);
  }
  if (m > 1) {
    out.push_back({Int(static_cast<unsigned long>(m)), 1});
  }
  return Factorization(std::move(out));
}

Factorization factor_big(Int m, std::uint64_t& divisions) {
  std::vector<PrimePower> out;
  Int d = 2;
  auto strip = [&]() {
    unsigned e = 0;
    while (true) {
      ++divisions;
      if (mpz_divisible_p(m.get_mpz_t(), d.get_mpz_t()) == 0) {
        break;
      }
      mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), d.get_mpz_t());
      ++e;
    }
    if (e > 0) {
      out.push_back({d, e});
    }
  };
  strip();
  for (d = 3; d * d <= m; d += 2) {
    strip();
  }
  if (m > 1) {
    out.push_back({m, 1});
  }
  return Factorization(std::move(out));
}

}  // namespace

Factorization trial_division_factor(const Int& m, std::uint64_t* divisions) {
  if (m < 1) {
    throw PreconditionError("trial_division_factor requires m >= 1");
  }
  std::uint64_t count = 0;
  Factorization f = mpz_sizeinbase(m.get_mpz_t(), 2) <= 64 ? factor_u64(to_u64(m), count)
                                                           : factor_big(m, count);
  if (divisions != nullptr) {
    *divisions = count;
  }
  return f;
}

Factorization lcm_factorizations(const Factorization& u, const Factorization& v) {
  const auto& a = u.entries();
  const auto& b = v.entries();
  std::vector<PrimePower> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].prime < b[j].prime)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].prime < a[i].prime) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].prime, std::max(a[i].exponent, b[j].exponent)});
      ++i;
      ++j;
    }
  }
  return Factorization(std::move(out));
}

}  // namespace largeorder
