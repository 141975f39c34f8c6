#pragma once

// Arbitrary-precision real and complex values on top of MPFR.
//
// Every MpReal carries its own precision. Binary operators produce a result
// at the larger of the two operand precisions; in-place operators keep the
// precision of the left-hand side. All rounding is to nearest unless a
// function says otherwise.

#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace mertens {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Digit budget for one computation. Immutable once built.
struct PrecisionContext {
  int target_digits = 100;
  int guard_digits = 20;
  mpfr_prec_t working_bits = 0;

  static PrecisionContext for_digits(int target_digits, int guard_digits = 20);

  mpfr_prec_t bits() const { return working_bits; }
  int total_digits() const { return target_digits + guard_digits; }
};

class MpReal {
 public:
  explicit MpReal(mpfr_prec_t bits = 64);
  MpReal(long value, mpfr_prec_t bits);
  MpReal(int value, mpfr_prec_t bits) : MpReal(static_cast<long>(value), bits) {}
  MpReal(double value, mpfr_prec_t bits);
  MpReal(const std::string& decimal, mpfr_prec_t bits, mpfr_rnd_t rnd = MPFR_RNDN);
  explicit MpReal(const PrecisionContext& ctx) : MpReal(ctx.bits()) {}

  MpReal(const MpReal& other);
  MpReal(MpReal&& other) noexcept;
  MpReal& operator=(const MpReal& other);
  MpReal& operator=(MpReal&& other) noexcept;
  ~MpReal();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  /// Assigns keeping this object's precision.
  MpReal& set(const MpReal& other);
  MpReal& set(long value);

  MpReal& operator+=(const MpReal& rhs);
  MpReal& operator-=(const MpReal& rhs);
  MpReal& operator*=(const MpReal& rhs);
  MpReal& operator/=(const MpReal& rhs);
  MpReal& operator*=(long rhs);
  MpReal& operator/=(long rhs);
  MpReal operator-() const;

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  long exponent2() const { return mpfr_get_exp(value_); }

  /// Fixed-point decimal with `digits` digits after the point, truncated
  /// toward zero. Negative values keep their sign ("-0.35...").
  std::string to_fixed(int digits) const;
  /// Scientific notation with `significant` digits, rounded upward in
  /// magnitude (used for error bounds).
  std::string to_scientific_up(int significant) const;
  /// Scientific notation rounded to nearest.
  std::string to_scientific(int significant) const;

 private:
  mpfr_t value_;
};

MpReal operator+(const MpReal& a, const MpReal& b);
MpReal operator-(const MpReal& a, const MpReal& b);
MpReal operator*(const MpReal& a, const MpReal& b);
MpReal operator/(const MpReal& a, const MpReal& b);
MpReal operator*(const MpReal& a, long b);
MpReal operator/(const MpReal& a, long b);

bool operator<(const MpReal& a, const MpReal& b);
bool operator>(const MpReal& a, const MpReal& b);
bool operator<=(const MpReal& a, const MpReal& b);
bool operator>=(const MpReal& a, const MpReal& b);
bool operator==(const MpReal& a, const MpReal& b);

MpReal abs(const MpReal& x);
MpReal exp(const MpReal& x);
MpReal log(const MpReal& x);
MpReal log1p(const MpReal& x);
MpReal sqrt(const MpReal& x);
MpReal pow_si(const MpReal& x, long n);
MpReal atan2(const MpReal& y, const MpReal& x);
MpReal max(const MpReal& a, const MpReal& b);

/// 10^(-d) at the given precision.
MpReal ten_pow_neg(long d, mpfr_prec_t bits);
/// Base-10 logarithm as a double (values far below DBL_MIN are fine).
double log10_of(const MpReal& x);

MpReal pi(const PrecisionContext& ctx);
MpReal pi(mpfr_prec_t bits);

struct MpComplex {
  MpReal re;
  MpReal im;

  explicit MpComplex(mpfr_prec_t bits = 64) : re(bits), im(bits) {}
  MpComplex(MpReal real, MpReal imag) : re(std::move(real)), im(std::move(imag)) {}
  explicit MpComplex(const PrecisionContext& ctx) : MpComplex(ctx.bits()) {}

  mpfr_prec_t precision() const { return re.precision(); }

  MpComplex& operator+=(const MpComplex& rhs);
  MpComplex& operator-=(const MpComplex& rhs);
  MpComplex& operator*=(const MpComplex& rhs);
  MpComplex& operator*=(const MpReal& rhs);
  MpComplex& operator/=(long rhs);

  /// this += a * b, with a complex and b real.
  void add_product(const MpComplex& a, const MpReal& b);
  /// this += a * b, both complex.
  void add_product(const MpComplex& a, const MpComplex& b);
};

MpComplex operator+(const MpComplex& a, const MpComplex& b);
MpComplex operator-(const MpComplex& a, const MpComplex& b);
MpComplex operator*(const MpComplex& a, const MpComplex& b);
MpComplex operator*(const MpComplex& a, const MpReal& b);
MpComplex conj(const MpComplex& z);
MpReal abs(const MpComplex& z);
MpComplex exp(const MpComplex& z);
MpComplex pow_si(const MpComplex& z, long n);

/// Principal branch: imaginary part in (-pi, pi]. Throws DomainError at 0.
MpComplex complex_log(const MpComplex& z);

/// exp(2 pi i j / L). Exact for multiples of a quarter turn; other values
/// come from a per-(L, precision) table that is built once and shared.
MpComplex root_of_unity(long j, long L, const PrecisionContext& ctx);
MpComplex root_of_unity(long j, long L, mpfr_prec_t bits);

}  // namespace mertens
