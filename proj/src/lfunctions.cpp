#include "mertens/lfunctions.hpp"

#include <cmath>
#include <mutex>
#include <string>

#include "mertens/arith.hpp"

namespace mertens {

namespace {

// Shared core of zeta_em. With max_terms < 0, correction terms are added
// until one drops below `tolerance`; T is then the count actually used.
ZetaValue zeta_em_impl(int s, std::int64_t N, int T, mpfr_prec_t bits, const MpReal* tolerance) {
  if (s < 2) throw DomainError("zeta_em: s must be >= 2, got " + std::to_string(s));
  if (N < 1) throw InvalidArgument("zeta_em: N must be positive");
  if (!tolerance && (T < 0 || T % 2 != 0)) throw InvalidArgument("zeta_em: T must be even and non-negative");
  const mpfr_prec_t wb = bits + 32;

  MpReal sum(wb);
  MpReal term(wb);
  for (std::int64_t r = N - 1; r >= 1; --r) {
    mpfr_set_si(term.get(), static_cast<long>(r), MPFR_RNDN);
    mpfr_pow_si(term.get(), term.get(), -s, MPFR_RNDN);
    sum += term;
  }
  MpReal n_pow(static_cast<long>(N), wb);  // N^-s
  mpfr_pow_si(n_pow.get(), n_pow.get(), -s, MPFR_RNDN);

  MpReal integral = n_pow * static_cast<long>(N);
  integral /= static_cast<long>(s - 1);
  sum += integral;
  sum += n_pow / 2L;

  // f_j = s (s+1) ... (s+2j-2) N^(-s-2j+1) / (2j)!
  MpReal f = n_pow * static_cast<long>(s);
  f /= static_cast<long>(N);
  f /= 2L;
  const MpReal n_sq(static_cast<long>(N * N), wb);
  MpReal corr(wb);
  int j = 1;
  for (;; ++j) {
    MpReal t = bernoulli_number_mp(2 * j, wb) * f;
    if (tolerance) {
      if (abs(t) < *tolerance) break;
      if (j > 20000) throw NumericFault("zeta_em: correction terms do not decay");
    } else if (2 * j > T) {
      break;
    }
    sum += t;
    f *= static_cast<long>(s + 2 * j - 1);
    f *= static_cast<long>(s + 2 * j);
    f /= n_sq;
    f /= static_cast<long>((2 * j + 1) * (2 * j + 2));
  }
  // j now indexes the first omitted term
  MpReal bound = abs(bernoulli_number_mp(2 * j, wb) * f);
  ZetaValue out{MpReal(bits), MpReal(bits)};
  out.value.set(sum);
  mpfr_set(out.error_bound.get(), bound.get(), MPFR_RNDU);
  return out;
}

}  // namespace

ZetaValue zeta_em(int s, std::int64_t N, int T, mpfr_prec_t bits) { return zeta_em_impl(s, N, T, bits, nullptr); }

MpReal zeta_em(int s, std::int64_t N, int T, const PrecisionContext& ctx) {
  return zeta_em_impl(s, N, T, ctx.bits(), nullptr).value;
}

MpReal zeta(int s, mpfr_prec_t bits) {
  static std::mutex mutex;
  static std::map<std::pair<int, mpfr_prec_t>, MpReal> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find({s, bits}); it != cache.end()) return it->second;
  }
  const double digits = static_cast<double>(bits) * std::log10(2.0);
  // Partial sum length: large enough that the Bernoulli tail stays short.
  auto N = static_cast<std::int64_t>(std::ceil(digits / 2.0)) + 10;
  // beyond 10^((digits + 10) / s) the terms r^-s no longer matter
  const double negligible_from = std::pow(10.0, (digits + 10) / s);
  if (negligible_from < static_cast<double>(N)) {
    N = std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(negligible_from)));
  }
  const MpReal tol = ten_pow_neg(static_cast<long>(digits) + 8, bits);
  MpReal value = zeta_em_impl(s, N, 0, bits, &tol).value;
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(std::make_pair(s, bits), value);
  return value;
}

MpReal l_principal(std::int64_t q, int s, mpfr_prec_t bits) {
  if (s < 2) throw DomainError("l_principal: s must be >= 2");
  MpReal value = zeta(s, bits);
  for (std::int64_t p : prime_divisors(q)) {
    MpReal f(static_cast<long>(p), bits);
    mpfr_pow_si(f.get(), f.get(), -s, MPFR_RNDN);
    MpReal one(1L, bits);
    value *= one - f;
  }
  return value;
}

MpReal l_principal(std::int64_t q, int s, const PrecisionContext& ctx) { return l_principal(q, s, ctx.bits()); }

// ---------------------------------------------------------------------------
// LSeriesEvaluator

LSeriesEvaluator::LSeriesEvaluator(std::int64_t modulus, EmParams em, mpfr_prec_t bits)
    : modulus_(modulus), em_(em), bits_(bits) {
  if (modulus < 1) throw InvalidArgument("LSeriesEvaluator: modulus must be positive");
  if (em.N < 1 || em.N % modulus != 0) throw InvalidArgument("EmParams: N must be a positive multiple of q");
  if (em.T < 2 || em.T % 2 != 0) throw InvalidArgument("EmParams: T must be even and >= 2");
}

const std::vector<MpReal>& LSeriesEvaluator::class_sums(int s) {
  if (auto it = class_sums_.find(s); it != class_sums_.end()) return it->second;
  const mpfr_prec_t wb = bits_ + 16;
  if (units_.empty()) {
    for (std::int64_t r = 1; r < em_.N; ++r) {
      if (gcd(r, modulus_) == 1) units_.push_back(r);
    }
    inverses_.reserve(units_.size());
    for (std::int64_t r : units_) {
      MpReal inv(1L, wb);
      inv /= static_cast<long>(r);
      inverses_.push_back(std::move(inv));
    }
  }
  if (powers_s_ == 0 || s < powers_s_) {
    powers_.clear();
    powers_.reserve(units_.size());
    for (std::size_t i = 0; i < units_.size(); ++i) powers_.emplace_back(1L, wb);
    powers_s_ = 0;
  }
  while (powers_s_ < s) {
    for (std::size_t i = 0; i < units_.size(); ++i) powers_[i] *= inverses_[i];
    ++powers_s_;
  }
  std::vector<MpReal> sums;
  sums.reserve(static_cast<std::size_t>(modulus_));
  for (std::int64_t b = 0; b < modulus_; ++b) sums.emplace_back(wb);
  // accumulate from the small terms upward
  for (std::size_t i = units_.size(); i-- > 0;) {
    sums[static_cast<std::size_t>(units_[i] % modulus_)] += powers_[i];
  }
  return class_sums_.emplace(s, std::move(sums)).first->second;
}

const std::vector<MpComplex>& LSeriesEvaluator::chi_bernoulli_row(const Character& chi) {
  if (auto it = chi_bernoulli_.find(chi.exponents()); it != chi_bernoulli_.end()) return it->second;
  if (!bernoulli_) bernoulli_ = std::make_unique<BernoulliPolyTable>(modulus_, em_.T, bits_ + 16);
  std::vector<MpComplex> row;
  row.reserve(static_cast<std::size_t>(em_.T + 1));
  row.emplace_back(bits_ + 16);
  const int parity = chi.parity();
  for (int j = 1; j <= em_.T; ++j) {
    // B_j(chi) vanishes unless chi(-1) = (-1)^j
    const bool vanishes = !chi.is_principal() && ((j % 2 == 0) != (parity == 1));
    row.push_back(vanishes ? MpComplex(bits_ + 16) : bernoulli_->chi_bernoulli(chi, j));
  }
  return chi_bernoulli_.emplace(chi.exponents(), std::move(row)).first->second;
}

MpComplex LSeriesEvaluator::evaluate(const Character& chi, int s) {
  if (chi.modulus() != modulus_) throw InvalidArgument("l_em: character modulus does not match evaluator");
  if (chi.is_principal()) throw InvalidArgument("l_em: principal character; use l_principal");
  if (s < 1) throw DomainError("l_em: s must be a positive integer");
  const mpfr_prec_t wb = bits_ + 16;

  const auto& sums = class_sums(s);
  const long L = chi.order();
  std::vector<MpReal> by_exponent;
  by_exponent.reserve(static_cast<std::size_t>(L));
  for (long t = 0; t < L; ++t) by_exponent.emplace_back(wb);
  for (std::int64_t b = 1; b < modulus_; ++b) {
    const auto t = chi.exponent_at(b);
    if (t) by_exponent[static_cast<std::size_t>(*t)] += sums[static_cast<std::size_t>(b)];
  }
  MpComplex total(wb);
  for (long t = 0; t < L; ++t) total.add_product(root_of_unity(t, L, wb), by_exponent[static_cast<std::size_t>(t)]);

  // N^-s sum_{j=1}^T (-1)^(j-1) B_j(chi)/j! * s (s+1) ... (s+j-2) / N^(j-1)
  const auto& bern = chi_bernoulli_row(chi);
  MpComplex corr(wb);
  MpReal coef(1L, wb);
  for (int j = 1; j <= em_.T; ++j) {
    if (j > 1) {
      coef *= static_cast<long>(s + j - 2);
      coef /= static_cast<long>(j);
      coef /= static_cast<long>(em_.N);
    }
    const auto& bj = bern[static_cast<std::size_t>(j)];
    if (bj.re.is_zero() && bj.im.is_zero()) continue;
    if (j % 2 == 1) {
      corr.add_product(bj, coef);
    } else {
      corr.add_product(bj, -coef);
    }
  }
  MpReal n_pow(static_cast<long>(em_.N), wb);
  mpfr_pow_si(n_pow.get(), n_pow.get(), -s, MPFR_RNDN);
  corr *= n_pow;
  total -= corr;

  MpComplex out(bits_);
  out.re.set(total.re);
  out.im.set(total.im);
  return out;
}

MpReal LSeriesEvaluator::error_bound(int s) const {
  const mpfr_prec_t wb = 64 + static_cast<mpfr_prec_t>(em_.T) * 16;
  MpReal b = abs(bernoulli_number_mp(em_.T, wb));
  MpReal q_pow(static_cast<long>(modulus_), wb);
  mpfr_pow_si(q_pow.get(), q_pow.get(), em_.T, MPFR_RNDU);
  b *= q_pow;
  for (int i = 0; i <= em_.T - 2; ++i) b *= static_cast<long>(s + i);
  for (int i = 2; i <= em_.T; ++i) b /= static_cast<long>(i);
  MpReal n_pow(static_cast<long>(em_.N), wb);
  mpfr_pow_si(n_pow.get(), n_pow.get(), 1 - s - em_.T, MPFR_RNDU);
  b *= n_pow;
  return b;
}

MpComplex l_em(const Character& chi, int s, const EmParams& em, const PrecisionContext& ctx) {
  LSeriesEvaluator ev(chi.modulus(), em, ctx.bits());
  return ev.evaluate(chi, s);
}

// ---------------------------------------------------------------------------
// EulerTail

EulerTail::EulerTail(std::int64_t modulus, std::int64_t prime_cutoff, EmParams em, const PrecisionContext& ctx)
    : modulus_(modulus),
      ctx_(ctx),
      primes_(sieve_primes(prime_cutoff)),
      assembly_(prime_cutoff, em),
      evaluator_(modulus, em, ctx.bits()) {
  if (prime_cutoff < 1) throw InvalidArgument("EulerTail: prime cutoff must be positive");
}

const std::vector<MpReal>& EulerTail::prime_powers(int s) {
  if (auto it = prime_powers_.find(s); it != prime_powers_.end()) return it->second;
  const mpfr_prec_t wb = ctx_.bits() + 16;
  std::vector<MpReal> pw;
  pw.reserve(primes_.size());
  for (std::int64_t p : primes_) {
    MpReal x(static_cast<long>(p), wb);
    mpfr_pow_si(x.get(), x.get(), -s, MPFR_RNDN);
    pw.push_back(std::move(x));
  }
  return prime_powers_.emplace(s, std::move(pw)).first->second;
}

MpComplex EulerTail::log_tail(const Character& chi, int s) {
  if (chi.modulus() != modulus_) throw InvalidArgument("log_tail: character modulus does not match");
  const auto key = std::make_pair(chi.exponents(), s);
  if (auto it = log_cache_.find(key); it != log_cache_.end()) return it->second;
  const mpfr_prec_t wb = ctx_.bits() + 16;

  MpComplex lval(wb);
  if (chi.is_principal()) {
    if (s < 2) throw DomainError("log_tail: principal character needs s >= 2");
    lval.re.set(l_principal(modulus_, s, wb));
  } else {
    MpComplex v = evaluator_.evaluate(chi, s);
    lval.re.set(v.re);
    lval.im.set(v.im);
    const MpReal bound = evaluator_.error_bound(s);
    if (abs(lval) < bound * 10L) {
      throw NumericFault("unreliable U: |L(chi, " + std::to_string(s) + ")| mod " + std::to_string(modulus_) +
                         " is below 10x its Euler-Maclaurin error bound");
    }
  }
  assembly_.observe(abs(lval).to_double());

  // L * prod_{p <= P} (1 - chi(p) p^-s) = L_P(chi, s), which is close to 1,
  // so its principal logarithm is the sum of the per-factor principal logs.
  const auto& pw = prime_powers(s);
  MpComplex prod = lval;
  MpComplex factor(wb);
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const auto t = chi.exponent_at(primes_[i]);
    if (!t) continue;
    if (*t == 0) {
      MpReal one(1L, wb);
      factor.re.set(one - pw[i]);
      factor.im.set(0L);
    } else {
      MpComplex w = root_of_unity(*t, chi.order(), wb);
      factor.re.set(1L);
      factor.re -= w.re * pw[i];
      factor.im = -(w.im * pw[i]);
    }
    if (factor.re.sign() <= 0) {
      throw NumericFault("log_tail: Euler factor with non-positive real part at p = " + std::to_string(primes_[i]));
    }
    prod = prod * factor;
  }
  MpComplex lg = complex_log(prod);
  max_abs_log_ = std::max(max_abs_log_, abs(lg).to_double());

  MpComplex out(ctx_.bits());
  out.re.set(lg.re);
  out.im.set(lg.im);
  return log_cache_.emplace(key, std::move(out)).first->second;
}

MpComplex EulerTail::prime_tail_sum(const Character& chi, int m, int K) {
  if (m < 1) throw DomainError("prime_tail_sum: m must be >= 1");
  if (m == 1 && chi.is_principal()) throw DomainError("prime_tail_sum: m = 1 needs a nonprincipal character");
  if (K < 1) throw InvalidArgument("prime_tail_sum: K must be >= 1");
  MpComplex sum(ctx_.bits() + 16);
  for (int k = 1; k <= K; ++k) {
    const int mu = mobius(k);
    if (mu == 0) continue;
    MpComplex term = log_tail(power(chi, k), k * m);
    term /= static_cast<long>(k);
    if (mu > 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  MpComplex out(ctx_.bits());
  out.re.set(sum.re);
  out.im.set(sum.im);
  return out;
}

MpComplex log_l_tail(const Character& chi, int s, std::int64_t prime_cutoff, const EmParams& em,
                     TailAssembly& assembly, const PrecisionContext& ctx) {
  EulerTail tail(chi.modulus(), prime_cutoff, em, ctx);
  MpComplex v = tail.log_tail(chi, s);
  assembly.observe(tail.assembly().U());
  return v;
}

MpComplex prime_tail_sum(const Character& chi, int m, std::int64_t prime_cutoff, int K, const EmParams& em,
                         TailAssembly& assembly, const PrecisionContext& ctx) {
  EulerTail tail(chi.modulus(), prime_cutoff, em, ctx);
  MpComplex v = tail.prime_tail_sum(chi, m, K);
  assembly.observe(tail.assembly().U());
  return v;
}

}  // namespace mertens
