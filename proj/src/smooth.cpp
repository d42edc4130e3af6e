#include "largeorder/smooth.hpp"

#include <cmath>

#include <mpfr.h>

namespace largeorder {

PsiTable::PsiTable(std::uint64_t limit) : largest_(limit + 1, 0) {
  if (limit >= (std::uint64_t{1} << 32)) {
    throw PreconditionError("PsiTable limit too large");
  }
  if (limit >= 1) {
    largest_[1] = 1;
  }
  // Primes are visited in increasing order, so the last writer wins.
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (largest_[p] != 0) {
      continue;
    }
    for (std::uint64_t m = p; m <= limit; m += p) {
      largest_[m] = static_cast<std::uint32_t>(p);
    }
  }
}

std::uint64_t PsiTable::psi(std::uint64_t x, std::uint64_t y) const {
  if (x > limit()) {
    throw PreconditionError("psi query beyond table limit");
  }
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= x; ++n) {
    if (largest_[n] <= y) {
      ++count;
    }
  }
  return count;
}

std::vector<std::uint32_t> PsiTable::psi_row(std::uint64_t y) const {
  std::vector<std::uint32_t> row(largest_.size(), 0);
  std::uint32_t count = 0;
  for (std::size_t n = 1; n < largest_.size(); ++n) {
    if (largest_[n] <= y) {
      ++count;
    }
    row[n] = count;
  }
  return row;
}

std::uint64_t psi_brute(std::uint64_t x, std::uint64_t y) {
  if (x < 1 || y < 1) {
    throw PreconditionError("psi_brute requires x >= 1 and y >= 1");
  }
  if (y >= x) {
    return x;
  }
  return PsiTable(x).psi(x, y);
}

double psi_lower_bound(double x, double y) {
  if (!(x >= 4.0) || !(y >= 2.0) || !(x >= y)) {
    throw PreconditionError("psi_lower_bound requires x >= 4 and x >= y >= 2");
  }
  const double lx = std::log(x);
  return std::exp(lx - (lx / std::log(y)) * std::log(lx));
}

namespace {

/// Owning handle for an mpfr_t.
class Real {
 public:
  explicit Real(mpfr_prec_t precision) { mpfr_init2(value_, precision); }
  ~Real() { mpfr_clear(value_); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

 private:
  mpfr_t value_;
};

struct Enclosure {
  Int floor_lo;
  Int floor_hi;
  bool hi_bracket_ok = false;  // floor_hi + 1 < lo + 2
  double z = 0.0;
};

/// Encloses tildeZ = exp((1 + log log 2M / (log B - 1)) * log 2M) at the
/// given precision, every step rounded outward.
Enclosure enclose_tilde_z(const SmoothBoundInput& in, mpfr_prec_t p) {
  Real two_m_lo(p), two_m_hi(p), b_lo(p), b_hi(p);
  const Int two_m = 2 * in.M;
  mpfr_set_z(two_m_lo.get(), two_m.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(two_m_hi.get(), two_m.get_mpz_t(), MPFR_RNDU);
  mpfr_set_z(b_lo.get(), in.B.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(b_hi.get(), in.B.get_mpz_t(), MPFR_RNDU);

  // log 2M
  Real l1_lo(p), l1_hi(p);
  mpfr_log(l1_lo.get(), two_m_lo.get(), MPFR_RNDD);
  mpfr_log(l1_hi.get(), two_m_hi.get(), MPFR_RNDU);

  // log log 2M, positive because 2M >= 4 > e
  Real l2_lo(p), l2_hi(p);
  mpfr_log(l2_lo.get(), l1_lo.get(), MPFR_RNDD);
  mpfr_log(l2_hi.get(), l1_hi.get(), MPFR_RNDU);

  // log B - 1, positive because B >= 3 > e
  Real den_lo(p), den_hi(p);
  mpfr_log(den_lo.get(), b_lo.get(), MPFR_RNDD);
  mpfr_sub_ui(den_lo.get(), den_lo.get(), 1, MPFR_RNDD);
  mpfr_log(den_hi.get(), b_hi.get(), MPFR_RNDU);
  mpfr_sub_ui(den_hi.get(), den_hi.get(), 1, MPFR_RNDU);
  if (mpfr_sgn(den_lo.get()) <= 0 || mpfr_sgn(l2_lo.get()) <= 0) {
    throw InternalError("compute_Z: enclosure lost positivity");
  }

  // z = (1 + l2 / den) * l1; all factors positive.
  Real z_lo(p), z_hi(p);
  mpfr_div(z_lo.get(), l2_lo.get(), den_hi.get(), MPFR_RNDD);
  mpfr_div(z_hi.get(), l2_hi.get(), den_lo.get(), MPFR_RNDU);
  mpfr_add_ui(z_lo.get(), z_lo.get(), 1, MPFR_RNDD);
  mpfr_add_ui(z_hi.get(), z_hi.get(), 1, MPFR_RNDU);
  mpfr_mul(z_lo.get(), z_lo.get(), l1_lo.get(), MPFR_RNDD);
  mpfr_mul(z_hi.get(), z_hi.get(), l1_hi.get(), MPFR_RNDU);

  Real t_lo(p), t_hi(p);
  mpfr_exp(t_lo.get(), z_lo.get(), MPFR_RNDD);
  mpfr_exp(t_hi.get(), z_hi.get(), MPFR_RNDU);
  if (mpfr_inf_p(t_hi.get()) != 0) {
    throw InternalError("compute_Z: exponent range exceeded");
  }

  Enclosure e;
  mpfr_get_z(e.floor_lo.get_mpz_t(), t_lo.get(), MPFR_RNDD);
  mpfr_get_z(e.floor_hi.get_mpz_t(), t_hi.get(), MPFR_RNDD);
  // floor_hi + 1 < lo + 2  <=>  lo > floor_hi - 1
  const Int below = e.floor_hi - 1;
  e.hi_bracket_ok = mpfr_cmp_z(t_lo.get(), below.get_mpz_t()) > 0;
  e.z = mpfr_get_d(z_lo.get(), MPFR_RNDN);
  return e;
}

}  // namespace

ZBound compute_Z(const SmoothBoundInput& input) {
  if (input.M < 2) {
    throw PreconditionError("compute_Z requires M >= 2");
  }
  if (input.B < 3) {
    throw PreconditionError("compute_Z requires B >= 3");
  }
  const auto bits = static_cast<long>(bit_length(input.M));
  const long cap = 64 * bits + 4096;

  ZBound out;
  for (long p = 2 * bits + 64; p <= cap; p *= 2, ++out.escalations) {
    Enclosure e = enclose_tilde_z(input, static_cast<mpfr_prec_t>(p));
    if (e.floor_lo == e.floor_hi) {
      // tildeZ in [k, k+1): k + 1 is strictly inside (tildeZ, tildeZ + 2).
      out.Z = e.floor_lo + 1;
    } else if (e.hi_bracket_ok) {
      out.Z = e.floor_hi + 1;
    } else {
      continue;
    }
    out.floor_lo = std::move(e.floor_lo);
    out.floor_hi = std::move(e.floor_hi);
    out.precision = p;
    out.log_tilde_z = e.z;
    return out;
  }
  throw InternalError("compute_Z: precision cap reached for M=" + input.M.get_str() +
                      " B=" + input.B.get_str());
}

double tilde_z_sandwich_log_ratio(const SmoothBoundInput& input) {
  if (input.M < 2 || input.B < 3) {
    throw PreconditionError("sandwich diagnostic requires M >= 2 and B >= 3");
  }
  const mpfr_prec_t p = 256;
  Real two_m(p), b(p), l1(p), l2(p), den(p), z(p), lz(p), lb(p), t(p), m(p);
  const Int twice = 2 * input.M;
  mpfr_set_z(two_m.get(), twice.get_mpz_t(), MPFR_RNDN);
  mpfr_set_z(b.get(), input.B.get_mpz_t(), MPFR_RNDN);
  mpfr_log(l1.get(), two_m.get(), MPFR_RNDN);
  mpfr_log(l2.get(), l1.get(), MPFR_RNDN);
  mpfr_log(lb.get(), b.get(), MPFR_RNDN);
  mpfr_sub_ui(den.get(), lb.get(), 1, MPFR_RNDN);
  mpfr_div(z.get(), l2.get(), den.get(), MPFR_RNDN);
  mpfr_add_ui(z.get(), z.get(), 1, MPFR_RNDN);
  mpfr_mul(z.get(), z.get(), l1.get(), MPFR_RNDN);

  // log(tildeZ / (log tildeZ)^(log tildeZ / log B)) = z - z * log z / log B
  mpfr_log(lz.get(), z.get(), MPFR_RNDN);
  mpfr_mul(t.get(), z.get(), lz.get(), MPFR_RNDN);
  mpfr_div(t.get(), t.get(), lb.get(), MPFR_RNDN);
  mpfr_sub(t.get(), z.get(), t.get(), MPFR_RNDN);

  mpfr_set_z(m.get(), input.M.get_mpz_t(), MPFR_RNDN);
  mpfr_log(m.get(), m.get(), MPFR_RNDN);
  mpfr_sub(t.get(), t.get(), m.get(), MPFR_RNDN);
  return mpfr_get_d(t.get(), MPFR_RNDN);
}

}  // namespace largeorder
