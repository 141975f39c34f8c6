#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <vector>

#include "mertens/characters.hpp"
#include "mertens/mp.hpp"

namespace mertens {

/// Exact B_n with B_1 = -1/2. Backed by a process-wide cache that grows on
/// demand (tangent-number recurrence, integer arithmetic only).
mpq_class bernoulli_number(int n);

/// B_n rounded to `bits`.
MpReal bernoulli_number_mp(int n, mpfr_prec_t bits);

/// B_n(x) = sum_j C(n, j) B_j x^(n - j).
MpReal bernoulli_poly(int n, const MpReal& x, const PrecisionContext& ctx);

/// Values B_n(a / F) for 0 <= a < F and 0 <= n <= max_n. Row n is held at
/// enough extra precision that F^(n-1) * sum_a c_a B_n(a/F) with |c_a| <= 1
/// is accurate to about 2^-bits in absolute terms.
class BernoulliPolyTable {
 public:
  BernoulliPolyTable(std::int64_t period, int max_n, mpfr_prec_t bits);

  std::int64_t period() const { return period_; }
  int max_n() const { return max_n_; }
  mpfr_prec_t bits() const { return bits_; }
  const MpReal& at(int n, std::int64_t a) const {
    return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(a)];
  }

  /// B_n(chi) with period F = period(); chi's modulus must divide F.
  MpComplex chi_bernoulli(const Character& chi, int n) const;

 private:
  std::int64_t period_;
  int max_n_;
  mpfr_prec_t bits_;
  std::vector<std::vector<MpReal>> rows_;
};

/// B_n(chi) = F^(n-1) sum_{a=0}^{F-1} chi(a) B_n(a / F).
/// Throws InvalidArgument if F is not a positive multiple of chi's modulus.
MpComplex chi_bernoulli(const Character& chi, int n, std::int64_t period, const PrecisionContext& ctx);

}  // namespace mertens
