#include "mertens/mp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace mertens {

PrecisionContext PrecisionContext::for_digits(int target_digits, int guard_digits) {
  if (target_digits < 1 || guard_digits < 1) throw DomainError("precision: digit counts must be positive");
  PrecisionContext ctx;
  ctx.target_digits = target_digits;
  ctx.guard_digits = guard_digits;
  const double bits = std::ceil((target_digits + guard_digits) * std::log2(10.0));
  const double floor_bits = std::ceil(target_digits * std::log2(10.0)) + 32;
  ctx.working_bits = static_cast<mpfr_prec_t>(std::max(bits, floor_bits));
  return ctx;
}

// ---------------------------------------------------------------------------
// MpReal

MpReal::MpReal(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

MpReal::MpReal(long value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

MpReal::MpReal(double value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_d(value_, value, MPFR_RNDN);
}

MpReal::MpReal(const std::string& decimal, mpfr_prec_t bits, mpfr_rnd_t rnd) {
  mpfr_init2(value_, bits);
  char* end = nullptr;
  mpfr_strtofr(value_, decimal.c_str(), &end, 10, rnd);
  if (decimal.empty() || end == decimal.c_str() || *end != '\0' || !mpfr_number_p(value_)) {
    mpfr_clear(value_);
    throw DomainError("not a decimal number: '" + decimal + "'");
  }
}

MpReal::MpReal(const MpReal& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

MpReal::MpReal(MpReal&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

MpReal& MpReal::operator=(const MpReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

MpReal& MpReal::operator=(MpReal&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

MpReal::~MpReal() { mpfr_clear(value_); }

MpReal& MpReal::set(const MpReal& other) {
  mpfr_set(value_, other.value_, MPFR_RNDN);
  return *this;
}

MpReal& MpReal::set(long value) {
  mpfr_set_si(value_, value, MPFR_RNDN);
  return *this;
}

MpReal& MpReal::operator+=(const MpReal& rhs) {
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
MpReal& MpReal::operator-=(const MpReal& rhs) {
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
MpReal& MpReal::operator*=(const MpReal& rhs) {
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
MpReal& MpReal::operator/=(const MpReal& rhs) {
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
MpReal& MpReal::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
MpReal& MpReal::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

MpReal MpReal::operator-() const {
  MpReal r(precision());
  mpfr_neg(r.value_, value_, MPFR_RNDN);
  return r;
}

std::string MpReal::to_fixed(int digits) const {
  if (digits < 0) throw DomainError("to_fixed: negative digit count");
  const bool negative = mpfr_sgn(value_) < 0;
  std::string out = negative ? "-0." : "0.";
  if (mpfr_zero_p(value_)) return out + std::string(static_cast<std::size_t>(digits), '0');
  if (!mpfr_number_p(value_)) throw DomainError("to_fixed: value is not finite");

  mpfr_exp_t exp10 = 0;
  char* probe = mpfr_get_str(nullptr, &exp10, 10, 2, value_, MPFR_RNDZ);
  mpfr_free_str(probe);
  const long significant = static_cast<long>(exp10) + digits;
  if (exp10 > 0) {
    // |value| >= 1: emit integer part followed by fraction.
    char* s = mpfr_get_str(nullptr, &exp10, 10, static_cast<std::size_t>(std::max(2L, significant)), value_,
                           MPFR_RNDZ);
    std::string mant(s + (negative ? 1 : 0));
    mpfr_free_str(s);
    mant.resize(static_cast<std::size_t>(significant), '0');
    std::string res = negative ? "-" : "";
    res += mant.substr(0, static_cast<std::size_t>(exp10));
    res += '.';
    res += mant.substr(static_cast<std::size_t>(exp10));
    return res;
  }
  if (significant <= 0) return out + std::string(static_cast<std::size_t>(digits), '0');
  char* s = mpfr_get_str(nullptr, &exp10, 10, static_cast<std::size_t>(std::max(2L, significant)), value_,
                         MPFR_RNDZ);
  std::string mant(s + (negative ? 1 : 0));
  mpfr_free_str(s);
  mant.resize(static_cast<std::size_t>(significant));
  out += std::string(static_cast<std::size_t>(-exp10), '0');
  out += mant;
  return out;
}

namespace {

std::string scientific(mpfr_srcptr value, int significant, mpfr_rnd_t rnd) {
  if (mpfr_zero_p(value)) return "0";
  mpfr_exp_t exp10 = 0;
  char* s = mpfr_get_str(nullptr, &exp10, 10, static_cast<std::size_t>(std::max(2, significant)), value, rnd);
  std::string mant(s);
  mpfr_free_str(s);
  std::string sign;
  if (mant[0] == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  std::string res = sign + mant.substr(0, 1);
  if (mant.size() > 1) res += "." + mant.substr(1);
  res += "e" + std::to_string(static_cast<long>(exp10) - 1);
  return res;
}

}  // namespace

std::string MpReal::to_scientific_up(int significant) const { return scientific(value_, significant, MPFR_RNDA); }

std::string MpReal::to_scientific(int significant) const { return scientific(value_, significant, MPFR_RNDN); }

namespace {

mpfr_prec_t max_prec(const MpReal& a, const MpReal& b) { return std::max(a.precision(), b.precision()); }

}  // namespace

MpReal operator+(const MpReal& a, const MpReal& b) {
  MpReal r(max_prec(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
MpReal operator-(const MpReal& a, const MpReal& b) {
  MpReal r(max_prec(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
MpReal operator*(const MpReal& a, const MpReal& b) {
  MpReal r(max_prec(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
MpReal operator/(const MpReal& a, const MpReal& b) {
  MpReal r(max_prec(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
MpReal operator*(const MpReal& a, long b) {
  MpReal r(a.precision());
  mpfr_mul_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}
MpReal operator/(const MpReal& a, long b) {
  MpReal r(a.precision());
  mpfr_div_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}

bool operator<(const MpReal& a, const MpReal& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator>(const MpReal& a, const MpReal& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
bool operator<=(const MpReal& a, const MpReal& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
bool operator>=(const MpReal& a, const MpReal& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
bool operator==(const MpReal& a, const MpReal& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }

MpReal abs(const MpReal& x) {
  MpReal r(x.precision());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}
MpReal exp(const MpReal& x) {
  MpReal r(x.precision());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}
MpReal log(const MpReal& x) {
  if (x.sign() <= 0) throw DomainError("log of a non-positive real");
  MpReal r(x.precision());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}
MpReal log1p(const MpReal& x) {
  MpReal r(x.precision());
  mpfr_log1p(r.get(), x.get(), MPFR_RNDN);
  return r;
}
MpReal sqrt(const MpReal& x) {
  MpReal r(x.precision());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}
MpReal pow_si(const MpReal& x, long n) {
  MpReal r(x.precision());
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}
MpReal atan2(const MpReal& y, const MpReal& x) {
  MpReal r(max_prec(x, y));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}
MpReal max(const MpReal& a, const MpReal& b) { return a < b ? b : a; }

MpReal ten_pow_neg(long d, mpfr_prec_t bits) {
  MpReal r(10L, bits);
  mpfr_pow_si(r.get(), r.get(), -d, MPFR_RNDN);
  return r;
}

double log10_of(const MpReal& x) {
  if (x.is_zero()) return -INFINITY;
  long e = 0;
  const double m = mpfr_get_d_2exp(&e, x.get(), MPFR_RNDN);
  return std::log10(std::fabs(m)) + static_cast<double>(e) * std::log10(2.0);
}

MpReal pi(mpfr_prec_t bits) {
  MpReal r(bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

MpReal pi(const PrecisionContext& ctx) { return pi(ctx.bits()); }

// ---------------------------------------------------------------------------
// MpComplex

MpComplex& MpComplex::operator+=(const MpComplex& rhs) {
  re += rhs.re;
  im += rhs.im;
  return *this;
}
MpComplex& MpComplex::operator-=(const MpComplex& rhs) {
  re -= rhs.re;
  im -= rhs.im;
  return *this;
}
MpComplex& MpComplex::operator*=(const MpComplex& rhs) {
  *this = *this * rhs;
  return *this;
}
MpComplex& MpComplex::operator*=(const MpReal& rhs) {
  re *= rhs;
  im *= rhs;
  return *this;
}
MpComplex& MpComplex::operator/=(long rhs) {
  re /= rhs;
  im /= rhs;
  return *this;
}

void MpComplex::add_product(const MpComplex& a, const MpReal& b) {
  mpfr_fma(re.get(), a.re.get(), b.get(), re.get(), MPFR_RNDN);
  mpfr_fma(im.get(), a.im.get(), b.get(), im.get(), MPFR_RNDN);
}

void MpComplex::add_product(const MpComplex& a, const MpComplex& b) {
  MpReal t(re.precision());
  mpfr_fmms(t.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  re += t;
  mpfr_fmma(t.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  im += t;
}

MpComplex operator+(const MpComplex& a, const MpComplex& b) { return {a.re + b.re, a.im + b.im}; }
MpComplex operator-(const MpComplex& a, const MpComplex& b) { return {a.re - b.re, a.im - b.im}; }

MpComplex operator*(const MpComplex& a, const MpComplex& b) {
  const mpfr_prec_t bits = std::max(a.precision(), b.precision());
  MpComplex r(bits);
  mpfr_fmms(r.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_fmma(r.im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  return r;
}

MpComplex operator*(const MpComplex& a, const MpReal& b) { return {a.re * b, a.im * b}; }

MpComplex conj(const MpComplex& z) { return {z.re, -z.im}; }

MpReal abs(const MpComplex& z) {
  MpReal r(z.precision());
  mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
  return r;
}

MpComplex exp(const MpComplex& z) {
  const mpfr_prec_t bits = z.precision();
  MpReal modulus = exp(z.re);
  MpReal s(bits), c(bits);
  mpfr_sin_cos(s.get(), c.get(), z.im.get(), MPFR_RNDN);
  return {modulus * c, modulus * s};
}

MpComplex pow_si(const MpComplex& z, long n) {
  MpComplex result(z.precision());
  result.re.set(1);
  MpComplex base = z;
  bool invert = n < 0;
  unsigned long e = static_cast<unsigned long>(invert ? -n : n);
  while (e > 0) {
    if (e & 1UL) result = result * base;
    base = base * base;
    e >>= 1;
  }
  if (invert) {
    MpReal norm = result.re * result.re + result.im * result.im;
    result = {result.re / norm, -(result.im / norm)};
  }
  return result;
}

MpComplex complex_log(const MpComplex& z) {
  if (z.re.is_zero() && z.im.is_zero()) throw DomainError("complex_log: argument is zero");
  const mpfr_prec_t bits = z.precision();
  MpReal modulus(bits);
  mpfr_hypot(modulus.get(), z.re.get(), z.im.get(), MPFR_RNDN);
  MpComplex r(bits);
  mpfr_log(r.re.get(), modulus.get(), MPFR_RNDN);
  // atan2(+0, negative) = +pi, so the branch cut lands at (-pi, pi]
  MpReal y = z.im;
  if (y.is_zero()) mpfr_set_zero(y.get(), 1);
  mpfr_atan2(r.im.get(), y.get(), z.re.get(), MPFR_RNDN);
  return r;
}

namespace {

using RootTable = std::vector<MpComplex>;

std::mutex& root_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<long, mpfr_prec_t>, std::shared_ptr<const RootTable>>& root_cache() {
  static std::map<std::pair<long, mpfr_prec_t>, std::shared_ptr<const RootTable>> cache;
  return cache;
}

std::shared_ptr<const RootTable> build_roots(long L, mpfr_prec_t bits) {
  auto table = std::make_shared<RootTable>();
  table->reserve(static_cast<std::size_t>(L));
  const mpfr_prec_t inner = bits + 32;
  MpReal two_pi = pi(inner) * 2L;
  for (long j = 0; j < L; ++j) {
    MpComplex w(bits);
    if ((4 * j) % L == 0) {
      const long quarter = (4 * j) / L;  // 0..3
      static constexpr long cosv[4] = {1, 0, -1, 0};
      static constexpr long sinv[4] = {0, 1, 0, -1};
      w.re.set(cosv[quarter]);
      w.im.set(sinv[quarter]);
    } else {
      MpReal angle = two_pi * j;
      angle /= L;
      MpReal s(inner), c(inner);
      mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
      mpfr_set(w.re.get(), c.get(), MPFR_RNDN);
      mpfr_set(w.im.get(), s.get(), MPFR_RNDN);
    }
    table->push_back(std::move(w));
  }
  return table;
}

}  // namespace

MpComplex root_of_unity(long j, long L, mpfr_prec_t bits) {
  if (L < 1) throw DomainError("root_of_unity: order must be positive");
  std::shared_ptr<const RootTable> table;
  {
    std::lock_guard<std::mutex> lock(root_mutex());
    auto& slot = root_cache()[{L, bits}];
    if (!slot) slot = build_roots(L, bits);
    table = slot;
  }
  const long idx = ((j % L) + L) % L;
  return (*table)[static_cast<std::size_t>(idx)];
}

MpComplex root_of_unity(long j, long L, const PrecisionContext& ctx) { return root_of_unity(j, L, ctx.bits()); }

}  // namespace mertens
