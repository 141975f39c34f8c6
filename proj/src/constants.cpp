#include "mertens/constants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "mertens/arith.hpp"
#include "mertens/bernoulli.hpp"
#include "mertens/characters.hpp"

namespace mertens {

namespace {

constexpr std::int64_t kDefaultCutoff = 9600;
constexpr int kDefaultK = 26;

struct Anchor {
  std::int64_t span;
  int T;
};
constexpr Anchor kLowAnchor{8400, 58};
constexpr Anchor kHighAnchor{27720, 88};

MpReal pow_int(long base, long e, mpfr_prec_t bits, mpfr_rnd_t rnd = MPFR_RNDN) {
  MpReal x(base, bits);
  mpfr_pow_si(x.get(), x.get(), e, rnd);
  return x;
}

// Upper bound for sum_{n > P} n^-m, m >= 2.
MpReal tail_power_bound(std::int64_t P, int m, mpfr_prec_t bits) {
  MpReal b = pow_int(static_cast<long>(P), 1 - m, bits, MPFR_RNDU);
  b /= static_cast<long>(m - 1);
  return b;
}

// Per-character bound on the omitted k > K terms of the Mobius sum at m >= 2:
// 2 P^(1-(K+1)m) / ((K+1) ((K+1)m - 1) (1 - P^-m)).
MpReal mobius_tail_bound(std::int64_t P, int m, int K, mpfr_prec_t bits) {
  const long k1 = K + 1;
  MpReal b = pow_int(static_cast<long>(P), 1 - k1 * m, bits, MPFR_RNDU);
  b *= 2L;
  b /= k1;
  b /= k1 * m - 1;
  MpReal one(1L, bits);
  b /= one - pow_int(static_cast<long>(P), -m, bits);
  return b;
}

int mobius_terms_for(int m, int digits, std::int64_t P) {
  const double need = (digits + 10) * std::log(10.0) / (m * std::log(static_cast<double>(P)));
  return std::max(2, static_cast<int>(std::ceil(need)));
}

std::int64_t smallest_prime_not_dividing(std::int64_t q) {
  for (std::int64_t p = 2;; ++p) {
    bool prime = true;
    for (std::int64_t d = 2; d * d <= p; ++d) {
      if (p % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime && q % p != 0) return p;
  }
}

MpComplex conj_value(const Character& chi, std::int64_t a, mpfr_prec_t bits) {
  const auto t = chi.exponent_at(a);
  const long L = chi.order();
  return root_of_unity((L - *t) % L, L, bits);
}

}  // namespace

std::string to_string(ConstantKind kind) {
  switch (kind) {
    case ConstantKind::M:
      return "M";
    case ConstantKind::B:
      return "B";
    case ConstantKind::C:
      return "C";
  }
  return "?";
}

ConstantKind parse_kind(const std::string& name) {
  if (name == "M") return ConstantKind::M;
  if (name == "B") return ConstantKind::B;
  if (name == "C") return ConstantKind::C;
  throw InvalidArgument("unknown constant kind '" + name + "' (expected M, B or C)");
}

// ---------------------------------------------------------------------------
// bounds and parameters

MpReal bound_E1_cutoff(std::int64_t q, std::int64_t prime_cutoff, int K, mpfr_prec_t bits) {
  if (q < 3) throw InvalidArgument("bound_E1: q must be >= 3");
  if (K < 1) throw InvalidArgument("bound_E1: K must be >= 1");
  MpReal b = pow_int(static_cast<long>(prime_cutoff), 1 - K, bits, MPFR_RNDU);
  b *= 2L * static_cast<long>(euler_phi(q) - 1);
  b /= static_cast<long>(K) * K;
  b /= static_cast<long>(prime_cutoff - 1);
  return b;
}

MpReal bound_E1(std::int64_t q, std::int64_t A, int K, const PrecisionContext& ctx) {
  if (A < 1) throw InvalidArgument("bound_E1: A must be positive");
  return bound_E1_cutoff(q, A * q, K, ctx.bits());
}

MpReal bound_E2(std::int64_t q, int K, std::int64_t N, int T, const MpReal& U, const PrecisionContext& ctx) {
  if (q < 3) throw InvalidArgument("bound_E2: q must be >= 3");
  if (T < 2 || T % 2 != 0) throw InvalidArgument("bound_E2: T must be even and >= 2");
  if (N < 2) throw InvalidArgument("bound_E2: N must be >= 2");
  if (U.sign() <= 0) throw InvalidArgument("bound_E2: U must be positive");
  const mpfr_prec_t bits = std::max<mpfr_prec_t>(ctx.bits(), 128);
  MpReal b = abs(bernoulli_number_mp(T, bits));
  b *= 2L * static_cast<long>(euler_phi(q) - 1);
  b *= pow_int(K + T - 2, T - 2, bits, MPFR_RNDU);
  b *= pow_int(static_cast<long>(q), T, bits, MPFR_RNDU);
  b /= static_cast<long>(N - 1);
  b /= U;
  b /= pow_int(static_cast<long>(N), T - 1, bits, MPFR_RNDD);
  for (int i = 2; i <= T; ++i) b /= static_cast<long>(i);
  return b;
}

Params select_params(std::int64_t q, int digits) {
  if (q < 3) throw InvalidArgument("select_params: q must be >= 3");
  if (digits < 1) throw InvalidArgument("select_params: digits must be positive");
  Params p;
  p.prime_cutoff = q < kDefaultCutoff ? kDefaultCutoff : 2 * q;
  const double smallest = (q % 2 == 1) ? 2.0 : 3.0;
  p.m_max = static_cast<int>(std::ceil((digits + 10) * std::log(10.0) / std::log(smallest)));

  const mpfr_prec_t bits = 128;
  const MpReal goal = ten_pow_neg(digits + 3, bits);
  const MpReal half_goal = goal / 2L;
  p.K = digits == 100 ? kDefaultK : 2;
  while (bound_E1_cutoff(q, p.prime_cutoff, p.K, bits) >= half_goal) ++p.K;

  const bool paper_range = digits == 100 && ((q >= 3 && q <= 10) || (q >= 90 && q <= 100));
  const Anchor anchor = q <= 50 ? kLowAnchor : kHighAnchor;
  p.N = (anchor.span / q + 1) * q;
  p.T = anchor.T;
  if (paper_range) return p;

  const PrecisionContext ctx{digits, 0, bits};
  const MpReal U(0.5, bits);
  for (;;) {
    MpReal total = bound_E1_cutoff(q, p.prime_cutoff, p.K, bits) + bound_E2(q, p.K, p.N, p.T, U, ctx);
    if (total < goal) break;
    p.T += 2;
    p.N += q;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Euler's constant and the Meissel-Mertens constant

std::pair<MpReal, MpReal> gamma_em(std::int64_t N0, int J, mpfr_prec_t bits) {
  if (N0 < 2) throw InvalidArgument("gamma_em: N0 must be >= 2");
  if (J < 0) throw InvalidArgument("gamma_em: J must be non-negative");
  const mpfr_prec_t wb = bits + 32;
  MpReal h(wb);
  for (std::int64_t n = N0; n >= 1; --n) {
    MpReal t(1L, wb);
    t /= static_cast<long>(n);
    h += t;
  }
  MpReal nn(static_cast<long>(N0), wb);
  h -= log(nn);
  MpReal half(1L, wb);
  half /= 2L * static_cast<long>(N0);
  h -= half;
  const MpReal n_sq = nn * nn;
  MpReal n_pow(1L, wb);  // N0^-2j
  for (int j = 1; j <= J; ++j) {
    n_pow /= n_sq;
    MpReal t = bernoulli_number_mp(2 * j, wb) * n_pow;
    t /= static_cast<long>(2 * j);
    h += t;
  }
  n_pow /= n_sq;
  MpReal omitted = abs(bernoulli_number_mp(2 * J + 2, wb) * n_pow);
  omitted /= static_cast<long>(2 * J + 2);
  MpReal value(bits);
  value.set(h);
  MpReal bound(bits);
  bound.set(omitted);
  return {value, bound};
}

MpReal compute_gamma(const PrecisionContext& ctx) {
  static std::mutex mutex;
  static std::map<mpfr_prec_t, MpReal> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(ctx.bits()); it != cache.end()) return it->second;
  }
  const int digits = ctx.total_digits();
  const std::int64_t N0 = std::max(10, digits);
  const MpReal tol = ten_pow_neg(digits + 10, 64);
  // omitted term |B_2J+2| / ((2J+2) N0^(2J+2)) in double-exponent arithmetic
  int J = 1;
  for (;; ++J) {
    MpReal t = abs(bernoulli_number_mp(2 * J + 2, 64));
    t /= pow_int(static_cast<long>(N0), 2 * J + 2, 64);
    if (t < tol) break;
  }
  MpReal value = gamma_em(N0, J, ctx.bits()).first;
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(ctx.bits(), value);
  return value;
}

MpReal meissel_mertens_with_cutoff(std::int64_t P0, const PrecisionContext& ctx) {
  if (P0 < 2) throw InvalidArgument("meissel_mertens: cutoff must be >= 2");
  const mpfr_prec_t wb = ctx.bits() + 32;
  const PrecisionContext wide{ctx.target_digits, ctx.guard_digits, wb};
  const int digits = ctx.total_digits();

  MpReal sum(wb);
  const auto primes = sieve_primes(P0);
  for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
    MpReal inv(1L, wb);
    inv /= static_cast<long>(*it);
    sum += log1p(-inv);
    sum += inv;
  }

  EulerTail tail(1, P0, EmParams{2, 2}, wide);
  const Character trivial = Character::trivial();
  const MpReal tol = ten_pow_neg(digits + 5, 64);
  const double need = (digits + 5) * std::log(10.0) / std::log(static_cast<double>(P0)) + 1.0;
  MpReal tails(wb);
  for (int m = 2;; ++m) {
    if (tail_power_bound(P0, m, 64) < tol) break;
    const int K = std::max(2, static_cast<int>(std::ceil(need / m)));
    MpComplex s = tail.prime_tail_sum(trivial, m, K);
    s /= static_cast<long>(m);
    tails += s.re;
  }
  sum -= tails;
  MpReal out(ctx.bits());
  out.set(sum);
  return out;
}

MpReal compute_meissel_mertens(const PrecisionContext& ctx) {
  static std::mutex mutex;
  static std::map<mpfr_prec_t, MpReal> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(ctx.bits()); it != cache.end()) return it->second;
  }
  MpReal value = meissel_mertens_with_cutoff(1000, ctx);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(ctx.bits(), value);
  return value;
}

int certify_digits(const MpReal& value, const MpReal& total_bound, const PrecisionContext& ctx) {
  MpReal one(1L, 64);
  if (total_bound >= one) return 0;
  MpReal slack(1L, 64);
  const long e = value.is_zero() ? 0 : value.exponent2();
  mpfr_mul_2si(slack.get(), slack.get(), e - static_cast<long>(value.precision()), MPFR_RNDU);
  slack *= 10L;
  MpReal total(64);
  mpfr_add(total.get(), total_bound.get(), slack.get(), MPFR_RNDU);
  if (total >= one) return 0;
  const double x = -log10_of(total);
  int d = static_cast<int>(std::ceil(x)) - 1;
  // guard against rounding of the double logarithm
  while (d > 0 && !(total < ten_pow_neg(d, 64))) --d;
  while (total < ten_pow_neg(d + 1, 64) && d + 1 <= ctx.total_digits()) ++d;
  return std::clamp(d, 0, ctx.total_digits());
}

// ---------------------------------------------------------------------------
// ModulusComputation

ModulusComputation::ModulusComputation(std::int64_t q, Params params, const PrecisionContext& ctx)
    : q_(q),
      params_(params),
      ctx_(ctx),
      group_(build_group(q)),
      phi_(euler_phi(q)),
      tail_(q, params.prime_cutoff, params.em(), ctx) {
  if (params.K < 1) throw InvalidArgument("Params: K must be >= 1");
  if (params.m_max < 2) throw InvalidArgument("Params: m_max must be >= 2");
  for (std::int64_t a = 1; a < q; ++a) {
    if (gcd(a, q) == 1) residues_.push_back(a);
  }
}

const std::vector<MpComplex>& ModulusComputation::m_sums() {
  if (!m_sums_.empty()) return m_sums_;
  std::vector<MpComplex> sums(group_.size(), MpComplex(ctx_.bits()));
  std::vector<bool> done(group_.size(), false);
  for (std::size_t i = 1; i < group_.size(); ++i) {
    const std::size_t j = group_.index_of(conjugate(group_[i]));
    if (done[j]) {
      sums[i] = conj(sums[j]);
    } else {
      sums[i] = tail_.prime_tail_sum(group_[i], 1, params_.K);
    }
    done[i] = true;
  }
  m_sums_ = std::move(sums);
  return m_sums_;
}

const std::vector<MpComplex>& ModulusComputation::power_sums(int m0) {
  if (m0 != 1 && m0 != 2) throw InvalidArgument("power_sums: m0 must be 1 or 2");
  auto& slot = power_sums_[m0 - 1];
  if (!slot.empty()) return slot;

  const mpfr_prec_t wb = ctx_.bits() + 16;
  const std::int64_t P = params_.prime_cutoff;
  const int M = params_.m_max;
  const int digits = ctx_.total_digits();
  const MpReal tiny = ten_pow_neg(digits + 10, wb);

  // W(b) = sum_{m0 <= m <= m_max} (1/m) sum_{p <= P, p = b mod q} p^-m
  std::vector<MpReal> W;
  for (std::int64_t b = 0; b < q_; ++b) W.emplace_back(wb);
  std::size_t used_primes = 0;
  const auto& primes = tail_.primes();
  for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
    const std::int64_t p = *it;
    if (q_ % p == 0) continue;
    ++used_primes;
    MpReal inv(1L, wb);
    inv /= static_cast<long>(p);
    MpReal pw = pow_int(static_cast<long>(p), -m0, wb);
    MpReal acc(wb);
    for (int m = m0; m <= M; ++m) {
      if (pw < tiny) break;
      acc += pw / static_cast<long>(m);
      pw *= inv;
    }
    W[static_cast<std::size_t>(p % q_)] += acc;
  }

  // per-character error, before the (phi - 1) factor
  MpReal err(64);
  // early per-prime cutoff: at most 2 tiny per prime
  err += ten_pow_neg(digits + 10, 64) * static_cast<long>(2 * used_primes);
  // m > m_max for primes <= P: 2 p0^-(M+1) / ((M+1) (1 - 1/p0))
  {
    const std::int64_t p0 = smallest_prime_not_dividing(q_);
    MpReal t = pow_int(static_cast<long>(p0), -(M + 1), 64, MPFR_RNDU);
    t *= 2L * static_cast<long>(p0);
    t /= static_cast<long>(M + 1);
    t /= static_cast<long>(p0 - 1);
    err += t;
  }

  std::vector<MpComplex> sums(group_.size(), MpComplex(ctx_.bits()));
  std::vector<bool> done(group_.size(), false);
  const MpReal tol = ten_pow_neg(digits + 5, 64);
  MpReal e2_weight(64);
  int k_used = 0;
  bool bounds_done = false;
  for (std::size_t i = 1; i < group_.size(); ++i) {
    const Character& chi = group_[i];
    const std::size_t j = group_.index_of(conjugate(chi));
    if (done[j]) {
      sums[i] = conj(sums[j]);
      done[i] = true;
      continue;
    }
    const long L = chi.order();
    std::vector<MpReal> by_exp;
    for (long t = 0; t < L; ++t) by_exp.emplace_back(wb);
    for (std::int64_t b = 1; b < q_; ++b) {
      if (auto t = chi.exponent_at(b)) by_exp[static_cast<std::size_t>(*t)] += W[static_cast<std::size_t>(b)];
    }
    MpComplex total(wb);
    for (long t = 0; t < L; ++t) total.add_product(root_of_unity(t, L, wb), by_exp[static_cast<std::size_t>(t)]);

    for (int m = m0;; ++m) {
      if (m >= 2 && tail_power_bound(P, m, 64) < tol) {
        if (!bounds_done) {
          // remaining tail terms: geometric in m with ratio <= 1/P
          MpReal t = tail_power_bound(P, m, 64);
          t /= static_cast<long>(m);
          t *= static_cast<long>(P);
          t /= static_cast<long>(P - 1);
          err += t;
        }
        break;
      }
      const int K = m == 1 ? params_.K : std::min(params_.K, mobius_terms_for(m, ctx_.target_digits, P));
      MpComplex s = tail_.prime_tail_sum(chi, m, K);
      s /= static_cast<long>(m);
      total += s;
      if (!bounds_done) {
        k_used = std::max(k_used, K);
        e2_weight += MpReal(1.0 / m, 64);
        if (m == 1) {
          MpReal e1 = bound_E1_cutoff(q_, P, K, 64);
          e1 /= static_cast<long>(phi_ - 1);
          err += e1;
        } else {
          err += mobius_tail_bound(P, m, K, 64) / static_cast<long>(m);
        }
      }
    }
    bounds_done = true;
    sums[i].re.set(total.re);
    sums[i].im.set(total.im);
    done[i] = true;
  }

  err *= static_cast<long>(phi_ - 1);
  power_sums_bound_[m0 - 1] = err;
  power_sums_e2_weight_[m0 - 1] = e2_weight;
  k_used_[m0 - 1] = k_used;
  slot = std::move(sums);
  return slot;
}

const MpReal& ModulusComputation::power_sums_bound(int m0) {
  power_sums(m0);
  return power_sums_bound_[m0 - 1];
}

void ModulusComputation::check_real(const MpComplex& z, std::int64_t a, const char* what) const {
  const MpReal limit = ten_pow_neg(ctx_.target_digits - 5, 64);
  if (abs(z.im) >= limit) {
    throw NumericFault(std::string("imaginary residue in ") + what + "(" + std::to_string(q_) + ", " +
                       std::to_string(a) + "): |Im| = " + abs(z.im).to_scientific_up(3));
  }
}

ConstantRecord ModulusComputation::make_record(std::int64_t a, ConstantKind kind, MpReal value, MpReal bound) const {
  ConstantRecord r;
  r.q = q_;
  r.a = a;
  r.kind = kind;
  r.certified_digits = certify_digits(value, bound, ctx_);
  r.value = std::move(value);
  r.error_bound = std::move(bound);
  r.params = params_;
  return r;
}

std::vector<ConstantRecord> ModulusComputation::compute_M() {
  const mpfr_prec_t wb = ctx_.bits() + 16;
  const auto& S = m_sums();

  std::vector<MpReal> class_sum;
  for (std::int64_t b = 0; b < q_; ++b) class_sum.emplace_back(wb);
  MpReal coprime_sum(wb);
  for (auto it = tail_.primes().rbegin(); it != tail_.primes().rend(); ++it) {
    if (q_ % *it == 0) continue;
    MpReal inv(1L, wb);
    inv /= static_cast<long>(*it);
    class_sum[static_cast<std::size_t>(*it % q_)] += inv;
    coprime_sum += inv;
  }
  // M(q) = gamma + B - sum_{p | q} 1/p - sum_{p <= P, p not | q} 1/p
  MpReal Mq(wb);
  Mq.set(compute_gamma(ctx_));
  Mq += compute_meissel_mertens(ctx_);
  for (std::int64_t p : prime_divisors(q_)) {
    MpReal inv(1L, wb);
    inv /= static_cast<long>(p);
    Mq -= inv;
  }
  Mq -= coprime_sum;

  MpReal bound = bound_E1_cutoff(q_, params_.prime_cutoff, params_.K, 64);
  const double U = tail_.assembly().U();
  if (std::isfinite(U)) bound += bound_E2(q_, params_.K, params_.N, params_.T, MpReal(U, 64), ctx_);
  bound /= static_cast<long>(phi_);

  std::vector<ConstantRecord> out;
  for (std::int64_t a : residues_) {
    MpComplex z(wb);
    z.re.set(class_sum[static_cast<std::size_t>(a)] * static_cast<long>(phi_));
    z.re += Mq;
    for (std::size_t i = 1; i < group_.size(); ++i) z.add_product(conj_value(group_[i], a, wb), S[i]);
    check_real(z, a, "M");
    MpReal v(ctx_.bits());
    v.set(z.re / static_cast<long>(phi_));
    out.push_back(make_record(a, ConstantKind::M, std::move(v), bound));
  }
  return out;
}

std::vector<ConstantRecord> ModulusComputation::compute_BC(ConstantKind kind) {
  const mpfr_prec_t wb = ctx_.bits() + 16;
  const int m0 = kind == ConstantKind::C ? 1 : 2;
  const auto& sums = power_sums(m0);

  MpReal base(wb);
  if (kind == ConstantKind::B) {
    // B(q) = B - sum_{p | q} (log(1 - 1/p) + 1/p)
    base.set(compute_meissel_mertens(ctx_));
    for (std::int64_t p : prime_divisors(q_)) {
      MpReal inv(1L, wb);
      inv /= static_cast<long>(p);
      base -= log1p(-inv);
      base -= inv;
    }
  } else {
    // -gamma + log(q / phi(q))
    base.set(-compute_gamma(ctx_));
    MpReal ratio(static_cast<long>(q_), wb);
    ratio /= static_cast<long>(phi_);
    base += log(ratio);
  }

  MpReal bound = power_sums_bound_[m0 - 1];
  const double U = tail_.assembly().U();
  if (std::isfinite(U)) {
    bound += bound_E2(q_, k_used_[m0 - 1], params_.N, params_.T, MpReal(U, 64), ctx_) * power_sums_e2_weight_[m0 - 1];
  }
  bound /= static_cast<long>(phi_);

  std::vector<ConstantRecord> out;
  for (std::int64_t a : residues_) {
    MpComplex z(wb);
    for (std::size_t i = 1; i < group_.size(); ++i) z.add_product(conj_value(group_[i], a, wb), sums[i]);
    check_real(z, a, kind == ConstantKind::C ? "log C" : "B");
    MpReal v = base - z.re;
    v /= static_cast<long>(phi_);
    if (kind == ConstantKind::B) {
      MpReal value(ctx_.bits());
      value.set(v);
      out.push_back(make_record(a, kind, std::move(value), bound));
      continue;
    }
    MpReal value(ctx_.bits());
    value.set(exp(v));
    // |exp(x + d) - exp(x)| <= exp(x) (exp(|d|) - 1) <= exp(x) |d| (1 + |d|) for |d| <= 1
    MpReal one(1L, 64);
    MpReal cb = abs(value) * bound;
    cb *= one + bound;
    ConstantRecord r = make_record(a, kind, std::move(value), cb);
    MpReal lv(ctx_.bits());
    lv.set(v);
    r.log_value = std::move(lv);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ConstantRecord> ModulusComputation::compute(ConstantKind kind) {
  return kind == ConstantKind::M ? compute_M() : compute_BC(kind);
}

std::vector<ConstantRecord> compute_M_all(std::int64_t q, const Params& params, const PrecisionContext& ctx) {
  return ModulusComputation(q, params, ctx).compute(ConstantKind::M);
}

std::vector<ConstantRecord> compute_B_all(std::int64_t q, const Params& params, const PrecisionContext& ctx) {
  return ModulusComputation(q, params, ctx).compute(ConstantKind::B);
}

std::vector<ConstantRecord> compute_C_all(std::int64_t q, const Params& params, const PrecisionContext& ctx) {
  return ModulusComputation(q, params, ctx).compute(ConstantKind::C);
}

}  // namespace mertens
