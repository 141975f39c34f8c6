#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>

#include "mertens/arith.hpp"
#include "mertens/characters.hpp"
#include "mertens/constants.hpp"
#include "mertens/lfunctions.hpp"

using namespace mertens;

namespace {

const PrecisionContext& ctx() {
  static const PrecisionContext c = PrecisionContext::for_digits(50);
  return c;
}

const MpReal& tol() {
  static const MpReal t = ten_pow_neg(48, 64);
  return t;
}

EmParams em_for(std::int64_t q) { return select_params(q, 50).em(); }

// first nonprincipal real character
const Character& quadratic(const CharacterGroup& g) {
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (g[i].order() == 2) return g[i];
  }
  throw std::logic_error("no quadratic character");
}

// sum_{n >= 0} x_n with x_n = 1 / ((2n+1)^2 C(2n, n))
MpReal catalan_oracle() {
  const mpfr_prec_t bits = ctx().bits();
  MpReal s(bits);
  MpReal binom(1L, bits);
  for (long n = 0; n < 400; ++n) {
    if (n > 0) {
      binom *= (2 * n) * (2 * n - 1);
      binom /= n * n;
    }
    s += MpReal(1L, bits) / (binom * ((2 * n + 1) * (2 * n + 1)));
  }
  const MpReal two_plus_root3 = MpReal(2L, bits) + sqrt(MpReal(3L, bits));
  return pi(bits) / 8 * log(two_plus_root3) + s * 3 / 8;
}

// (5/2) sum_{n >= 1} (-1)^(n+1) / (n^3 C(2n, n))
MpReal zeta3_oracle() {
  const mpfr_prec_t bits = ctx().bits();
  MpReal s(bits);
  MpReal binom(1L, bits);
  for (long n = 1; n < 400; ++n) {
    binom *= (2 * n) * (2 * n - 1);
    binom /= n * n;
    const MpReal term = MpReal(1L, bits) / (binom * (n * n * n));
    if (n % 2 == 1) s += term; else s -= term;
  }
  return s * 5 / 2;
}

MpComplex log_euler_factor_inverse(const Character& chi, std::int64_t p, int s) {
  // -log(1 - chi(p) p^-s)
  MpComplex z = evaluate(chi, p, ctx());
  z *= pow_si(MpReal(static_cast<long>(p), ctx().bits()), -s);
  MpComplex one(MpReal(1L, ctx().bits()), MpReal(ctx()));
  const MpComplex l = complex_log(one - z);
  return MpComplex(-l.re, -l.im);
}

}  // namespace

TEST_SUITE("lfunctions") {
  TEST_CASE("zeta at even and odd integers") {
    const MpReal p = pi(ctx());
    CHECK(abs(zeta(2, ctx().bits()) - p * p / 6) < tol());
    CHECK(abs(zeta(4, ctx().bits()) - pow_si(p, 4) / 90) < tol());
    CHECK(abs(zeta(3, ctx().bits()) - zeta3_oracle()) < tol());
    const ZetaValue z = zeta_em(2, 50, 30, ctx().bits());
    CHECK(abs(z.value - p * p / 6) < z.error_bound * 2 + tol());
    CHECK_THROWS_AS(zeta(1, 64), DomainError);
    CHECK_THROWS_AS(zeta_em(2, 10, 3, 64), InvalidArgument);
  }

  TEST_CASE("principal L-values") {
    const MpReal p = pi(ctx());
    // zeta(2) (1 - 1/4) (1 - 1/9)
    CHECK(abs(l_principal(6, 2, ctx()) - p * p / 9) < tol());
    // zeta(4) (1 - 1/16)
    CHECK(abs(l_principal(8, 4, ctx()) - pow_si(p, 4) / 96) < tol());
    CHECK_THROWS_AS(l_principal(5, 1, ctx()), DomainError);
  }

  TEST_CASE("closed forms at s = 1, 2, 3") {
    const MpReal p = pi(ctx());
    const auto g4 = build_group(4);
    const auto g3 = build_group(3);
    const MpComplex l41 = l_em(g4[1], 1, em_for(4), ctx());
    CHECK(abs(l41.re - p / 4) < tol());
    CHECK(abs(l41.im) < tol());
    const MpComplex l31 = l_em(g3[1], 1, em_for(3), ctx());
    CHECK(abs(l31.re - p / (sqrt(MpReal(3L, ctx().bits())) * 3)) < tol());
    const MpComplex l42 = l_em(g4[1], 2, em_for(4), ctx());
    CHECK(abs(l42.re - catalan_oracle()) < tol());
    // L(chi_3, 3) = 4 pi^3 / (81 sqrt 3)
    const MpComplex l33 = l_em(g3[1], 3, em_for(3), ctx());
    CHECK(abs(l33.re - pow_si(p, 3) * 4 / (sqrt(MpReal(3L, ctx().bits())) * 81)) < tol());
    // L(chi_4, 3) = pi^3 / 32
    const MpComplex l43 = l_em(g4[1], 3, em_for(4), ctx());
    CHECK(abs(l43.re - pow_si(p, 3) / 32) < tol());
  }

  TEST_CASE("agrees with direct summation for q <= 20") {
    constexpr long kTerms = 200000;
    for (std::int64_t q = 3; q <= 20; ++q) {
      const auto g = build_group(q);
      LSeriesEvaluator ev(q, em_for(q), ctx().bits());
      for (std::size_t i = 1; i < g.size(); ++i) {
        const Character& chi = g[i];
        std::complex<long double> direct = 0;
        for (long n = 1; n <= kTerms; ++n) {
          const auto e = chi.exponent_at(n % q);
          if (!e) continue;
          const long double ang = 2.0L * 3.14159265358979323846264338327950288L * static_cast<long double>(*e) /
                                  static_cast<long double>(chi.order());
          direct += std::polar(1.0L / (static_cast<long double>(n) * static_cast<long double>(n)), ang);
        }
        const MpComplex l = ev.evaluate(chi, 2);
        REQUIRE(std::abs(static_cast<long double>(l.re.to_double()) - direct.real()) < 1e-8L);
        REQUIRE(std::abs(static_cast<long double>(l.im.to_double()) - direct.imag()) < 1e-8L);
      }
    }
  }

  TEST_CASE("stable under a change of Euler-Maclaurin parameters") {
    for (std::int64_t q : {5, 12, 23}) {
      const auto g = build_group(q);
      const EmParams a = em_for(q);
      const EmParams b{a.N + 7 * q, a.T + 4};
      for (std::size_t i = 1; i < g.size(); ++i) {
        for (int s : {1, 2, 5}) {
          const MpComplex x = l_em(g[i], s, a, ctx());
          const MpComplex y = l_em(g[i], s, b, ctx());
          REQUIRE(abs(x - y) < tol());
        }
      }
    }
  }

  TEST_CASE("evaluator error bound is small for chosen parameters") {
    LSeriesEvaluator ev(7, em_for(7), ctx().bits());
    CHECK(ev.error_bound(1) < ten_pow_neg(50, 64));
    CHECK(ev.error_bound(3) < ev.error_bound(1));
  }

  TEST_CASE("argument errors") {
    const auto g5 = build_group(5);
    const auto g7 = build_group(7);
    LSeriesEvaluator ev(5, em_for(5), ctx().bits());
    CHECK_THROWS_AS(ev.evaluate(g5.principal(), 2), InvalidArgument);
    CHECK_THROWS_AS(ev.evaluate(g7[1], 2), InvalidArgument);
    CHECK_THROWS_AS(ev.evaluate(g5[1], 0), DomainError);
    CHECK_THROWS_AS(LSeriesEvaluator(5, EmParams{12, 10}, 64), InvalidArgument);
    CHECK_THROWS_AS(LSeriesEvaluator(5, EmParams{10, 3}, 64), InvalidArgument);
    CHECK_THROWS_AS(EulerTail(5, 0, em_for(5), ctx()), InvalidArgument);
    EulerTail tail(5, 100, em_for(5), ctx());
    CHECK_THROWS_AS(tail.prime_tail_sum(g5.principal(), 1, 10), DomainError);
    CHECK_THROWS_AS(tail.prime_tail_sum(g5[1], 0, 10), DomainError);
    CHECK_THROWS_AS(tail.prime_tail_sum(g5[1], 1, 0), InvalidArgument);
  }

  TEST_CASE("Euler product tails") {
    const auto g4 = build_group(4);
    const auto g3 = build_group(3);
    TailAssembly asm4(2, em_for(4));
    // chi_4(2) = 0, so nothing is removed
    const MpComplex t = log_l_tail(g4[1], 2, 2, em_for(4), asm4, ctx());
    CHECK(abs(t.re - log(catalan_oracle())) < tol());
    CHECK(abs(t.im) < tol());
    // with 3 removed as well: chi_4(3) = -1
    const MpComplex t4 = log_l_tail(g4[1], 2, 4, em_for(4), asm4, ctx());
    CHECK(abs(t4.re - log(catalan_oracle()) - log(MpReal(10L, ctx().bits()) / 9)) < tol());
    CHECK(std::isfinite(asm4.U()));
    CHECK(asm4.U() > 0.9);

    // log L(chi_3, 3) minus the Euler factors up to 100
    TailAssembly asm3(100, em_for(3));
    const MpComplex t3 = log_l_tail(g3[1], 3, 100, em_for(3), asm3, ctx());
    MpReal ref = log(pow_si(pi(ctx()), 3) * 4 / (sqrt(MpReal(3L, ctx().bits())) * 81));
    for (std::int64_t p : sieve_primes(100)) ref -= log_euler_factor_inverse(g3[1], p, 3).re;
    CHECK(abs(t3.re - ref) < tol());
  }

  TEST_CASE("Euler tails differ by the factors between cutoffs") {
    for (std::int64_t q : {7, 15}) {
      const auto g = build_group(q);
      EulerTail lo(q, 200, em_for(q), ctx());
      EulerTail hi(q, 500, em_for(q), ctx());
      for (std::size_t i = 1; i < g.size(); ++i) {
        for (int s : {1, 2}) {
          MpComplex d = lo.log_tail(g[i], s) - hi.log_tail(g[i], s);
          for (std::int64_t p : sieve_primes(500)) {
            if (p > 200) d -= log_euler_factor_inverse(g[i], p, s);
          }
          REQUIRE(abs(d) < tol());
        }
      }
    }
  }

  TEST_CASE("prime tail sums") {
    const std::int64_t q = 5;
    const auto g = build_group(q);
    EulerTail lo(q, 100, em_for(q), ctx());
    EulerTail hi(q, 1000, em_for(q), ctx());
    for (std::size_t i = 1; i < g.size(); ++i) {
      const Character& chi = g[i];
      // difference of two cutoffs is a finite prime sum
      for (int m : {1, 2}) {
        const int K = m == 1 ? 40 : 20;
        MpComplex d = lo.prime_tail_sum(chi, m, K) - hi.prime_tail_sum(chi, m, K);
        for (std::int64_t p : sieve_primes(1000)) {
          if (p <= 100) continue;
          MpComplex z = evaluate(chi, p, ctx());
          z *= pow_si(MpReal(static_cast<long>(p), ctx().bits()), -m);
          d -= z;
        }
        REQUIRE(abs(d) < tol());
      }
      // m = 3 against a brute-force sum over p <= 10^6
      std::complex<long double> brute = 0;
      for (std::int64_t p : sieve_primes(1000000)) {
        if (p <= 1000) continue;
        const auto e = chi.exponent_at(p % q);
        if (!e) continue;
        const long double ang = 2.0L * 3.14159265358979323846264338327950288L * static_cast<long double>(*e) /
                                static_cast<long double>(chi.order());
        brute += std::polar(std::pow(static_cast<long double>(p), -3.0L), ang);
      }
      const MpComplex s3 = hi.prime_tail_sum(chi, 3, 12);
      REQUIRE(std::abs(static_cast<long double>(s3.re.to_double()) - brute.real()) < 1e-12L);
      REQUIRE(std::abs(static_cast<long double>(s3.im.to_double()) - brute.imag()) < 1e-12L);
    }
    CHECK(hi.max_abs_log_tail() < 0.01);
  }

  TEST_CASE("prime tail sums against brute force at small cutoffs") {
    const auto g4 = build_group(4);
    const auto primes = sieve_primes(10000000);
    EulerTail t4(4, 10, em_for(4), ctx());
    long double brute = 0;
    for (std::int64_t p : primes) {
      if (p <= 10 || p % 2 == 0) continue;
      const long double x = 1.0L / (static_cast<long double>(p) * static_cast<long double>(p));
      brute += p % 4 == 1 ? x : -x;
    }
    const MpComplex s = t4.prime_tail_sum(g4[1], 2, 20);
    // tail beyond 10^7 is below 10^-7 / log(10^7) in magnitude
    CHECK(std::abs(static_cast<long double>(s.re.to_double()) - brute) < 1e-8L);
    CHECK(abs(s.im) < tol());

    // trivial character: sum_{p > 5} p^-3
    EulerTail t1(1, 5, EmParams{10, 20}, ctx());
    long double brute3 = 0;
    for (std::int64_t p : primes) {
      if (p > 5) brute3 += std::pow(static_cast<long double>(p), -3.0L);
    }
    const MpComplex s3 = t1.prime_tail_sum(Character::trivial(), 3, 20);
    CHECK(std::abs(static_cast<long double>(s3.re.to_double()) - brute3) < 1e-14L);
  }

  TEST_CASE("truncation in K is within the stated bound") {
    const std::int64_t q = 7;
    const Params p = select_params(q, 50);
    const auto g = build_group(q);
    EulerTail tail(q, p.prime_cutoff, p.em(), ctx());
    const MpReal bound = bound_E1_cutoff(q, p.prime_cutoff, 6, ctx().bits());
    for (std::size_t i = 1; i < g.size(); ++i) {
      const MpComplex a = tail.prime_tail_sum(g[i], 1, 6);
      const MpComplex b = tail.prime_tail_sum(g[i], 1, 10);
      REQUIRE(abs(a - b) < bound);
    }
  }

  TEST_CASE("single-shot forms match the cached ones") {
    const auto g = build_group(11);
    EulerTail tail(11, 300, em_for(11), ctx());
    TailAssembly a(300, em_for(11));
    const MpComplex x = prime_tail_sum(g[3], 1, 300, 20, em_for(11), a, ctx());
    CHECK(abs(x - tail.prime_tail_sum(g[3], 1, 20)) < tol());
  }
}
