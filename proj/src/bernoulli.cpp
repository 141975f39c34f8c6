#include "mertens/bernoulli.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "mertens/arith.hpp"

namespace mertens {

namespace {

struct BernoulliCache {
  std::mutex mutex;
  std::vector<mpq_class> values;  // B_0 .. B_{size-1}

  void extend_to(int n) {
    if (static_cast<int>(values.size()) > n) return;
    int target = std::max(n + 1, 2 * static_cast<int>(values.size()));
    target = std::max(target, 64);
    const int half = target / 2 + 1;
    // Tangent numbers T_1..T_half: B_{2k} = (-1)^(k-1) 2k T_k / (2^(2k) (2^(2k) - 1)).
    std::vector<mpz_class> tangent(static_cast<std::size_t>(half + 1));
    tangent[1] = 1;
    for (int k = 2; k <= half; ++k) tangent[k] = (k - 1) * tangent[k - 1];
    for (int k = 2; k <= half; ++k) {
      for (int j = k; j <= half; ++j) tangent[j] = (j - k) * tangent[j - 1] + (j - k + 2) * tangent[j];
    }
    std::vector<mpq_class> out(static_cast<std::size_t>(target));
    out[0] = 1;
    out[1] = mpq_class(-1, 2);
    for (int m = 2; m < target; ++m) {
      if (m % 2 == 1) {
        out[m] = 0;
        continue;
      }
      const int k = m / 2;
      mpz_class pow4 = 1;
      mpz_mul_2exp(pow4.get_mpz_t(), pow4.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * k));
      mpq_class b(mpz_class(2 * k) * tangent[k], pow4 * (pow4 - 1));
      b.canonicalize();
      out[m] = (k % 2 == 1) ? b : mpq_class(-b);
    }
    values = std::move(out);
  }
};

BernoulliCache& cache() {
  static BernoulliCache c;
  return c;
}

// log2 of an upper bound for F^n * max_{0<=x<=1} |B_n(x)|.
double row_magnitude_log2(int n, std::int64_t period) {
  if (n <= 1) return 1.0;
  const double lf = std::lgamma(static_cast<double>(n) + 1.0) / std::log(2.0);
  return n * std::log2(static_cast<double>(period)) + 2.0 + lf - n * std::log2(2.0 * M_PI);
}

mpfr_prec_t row_bits(int n, std::int64_t period, mpfr_prec_t bits) {
  const double extra = std::max(0.0, row_magnitude_log2(n, period)) + 48.0;
  const auto raw = static_cast<mpfr_prec_t>(bits + static_cast<mpfr_prec_t>(std::ceil(extra)));
  return (raw + 127) / 128 * 128;
}

}  // namespace

mpq_class bernoulli_number(int n) {
  if (n < 0) throw InvalidArgument("bernoulli_number: negative index");
  auto& c = cache();
  std::lock_guard<std::mutex> lock(c.mutex);
  c.extend_to(n);
  return c.values[static_cast<std::size_t>(n)];
}

MpReal bernoulli_number_mp(int n, mpfr_prec_t bits) {
  const mpq_class b = bernoulli_number(n);
  MpReal r(bits);
  mpfr_set_q(r.get(), b.get_mpq_t(), MPFR_RNDN);
  return r;
}

MpReal bernoulli_poly(int n, const MpReal& x, const PrecisionContext& ctx) {
  if (n < 0) throw InvalidArgument("bernoulli_poly: negative degree");
  const mpfr_prec_t bits = ctx.bits() + 64;
  // Horner over coefficients C(n, j) B_j, highest power of x first (j = 0).
  MpReal acc(bits);
  MpReal xx(bits);
  xx.set(x);
  mpz_class binom = 1;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) binom = binom * (n - j + 1) / j;
    mpq_class coef = bernoulli_number(j) * binom;
    MpReal c(bits);
    mpfr_set_q(c.get(), coef.get_mpq_t(), MPFR_RNDN);
    acc *= xx;
    acc += c;
  }
  MpReal out(ctx.bits());
  out.set(acc);
  return out;
}

BernoulliPolyTable::BernoulliPolyTable(std::int64_t period, int max_n, mpfr_prec_t bits)
    : period_(period), max_n_(max_n), bits_(bits) {
  if (period < 1) throw InvalidArgument("BernoulliPolyTable: period must be positive");
  rows_.reserve(static_cast<std::size_t>(max_n + 1));
  for (int n = 0; n <= max_n; ++n) {
    const mpfr_prec_t rb = row_bits(n, period, bits);
    std::vector<MpReal> coefs;
    coefs.reserve(static_cast<std::size_t>(n + 1));
    mpz_class binom = 1;
    for (int j = 0; j <= n; ++j) {
      if (j > 0) binom = binom * (n - j + 1) / j;
      const mpq_class coef = bernoulli_number(j) * binom;
      MpReal c(rb);
      mpfr_set_q(c.get(), coef.get_mpq_t(), MPFR_RNDN);
      coefs.push_back(std::move(c));
    }
    std::vector<MpReal> row;
    row.reserve(static_cast<std::size_t>(period));
    for (std::int64_t a = 0; a < period; ++a) {
      MpReal x(static_cast<long>(a), rb);
      x /= static_cast<long>(period);
      MpReal acc(rb);
      for (int j = 0; j <= n; ++j) {
        acc *= x;
        acc += coefs[static_cast<std::size_t>(j)];
      }
      row.push_back(std::move(acc));
    }
    rows_.push_back(std::move(row));
  }
}

MpComplex BernoulliPolyTable::chi_bernoulli(const Character& chi, int n) const {
  const std::int64_t q = chi.modulus();
  if (period_ % q != 0) {
    throw InvalidArgument("chi_bernoulli: period " + std::to_string(period_) + " is not a multiple of modulus " +
                          std::to_string(q));
  }
  if (n < 0 || n > max_n_) throw InvalidArgument("chi_bernoulli: index outside table");
  const auto& row = rows_[static_cast<std::size_t>(n)];
  const mpfr_prec_t rb = row.front().precision();

  // group by root-of-unity exponent: sum_t zeta^t R_t
  const long L = chi.order();
  std::vector<MpReal> partial;
  partial.reserve(static_cast<std::size_t>(L));
  for (long t = 0; t < L; ++t) partial.emplace_back(rb);
  for (std::int64_t a = 0; a < period_; ++a) {
    const auto t = chi.exponent_at(a % q);
    if (!t) continue;
    partial[static_cast<std::size_t>(*t)] += row[static_cast<std::size_t>(a)];
  }
  MpComplex sum(rb);
  for (long t = 0; t < L; ++t) {
    if (partial[static_cast<std::size_t>(t)].is_zero()) continue;
    sum.add_product(root_of_unity(t, L, rb), partial[static_cast<std::size_t>(t)]);
  }
  MpReal scale(static_cast<long>(period_), rb);
  mpfr_pow_si(scale.get(), scale.get(), n - 1, MPFR_RNDN);
  sum *= scale;
  MpComplex out(bits_);
  out.re.set(sum.re);
  out.im.set(sum.im);
  return out;
}

MpComplex chi_bernoulli(const Character& chi, int n, std::int64_t period, const PrecisionContext& ctx) {
  if (period < 1 || period % chi.modulus() != 0) {
    throw InvalidArgument("chi_bernoulli: period must be a positive multiple of the modulus");
  }
  if (n < 0) throw InvalidArgument("chi_bernoulli: negative index");

  using Key = std::tuple<std::int64_t, std::vector<long>, int, std::int64_t, mpfr_prec_t>;
  static std::mutex mutex;
  static std::map<std::pair<std::int64_t, mpfr_prec_t>, std::shared_ptr<const BernoulliPolyTable>> tables;
  static std::map<Key, MpComplex> values;

  const Key key{chi.modulus(), chi.exponents(), n, period, ctx.bits()};
  std::shared_ptr<const BernoulliPolyTable> table;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = values.find(key); it != values.end()) return it->second;
    auto& slot = tables[{period, ctx.bits()}];
    if (!slot || slot->max_n() < n) {
      slot = std::make_shared<const BernoulliPolyTable>(period, std::max(n, slot ? 2 * slot->max_n() : 8),
                                                        ctx.bits());
    }
    table = slot;
  }
  MpComplex v = table->chi_bernoulli(chi, n);
  std::lock_guard<std::mutex> lock(mutex);
  values.emplace(key, v);
  return v;
}

}  // namespace mertens
