#include <doctest.h>

#include <numeric>

#include "mertens/arith.hpp"

using namespace mertens;

namespace {

bool is_prime_trial(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("arith") {
  TEST_CASE("sieve_primes small limits") {
    CHECK(sieve_primes(10) == std::vector<std::int64_t>{2, 3, 5, 7});
    const auto p30 = sieve_primes(30);
    CHECK(p30.size() == 10);
    CHECK(p30.back() == 29);
    CHECK(sieve_primes(1).empty());
    CHECK(sieve_primes(2) == std::vector<std::int64_t>{2});
  }

  TEST_CASE("sieve_primes(9600) matches trial division") {
    std::int64_t count = 0;
    for (std::int64_t n = 2; n <= 9600; ++n) count += is_prime_trial(n);
    const auto primes = sieve_primes(9600);
    CHECK(static_cast<std::int64_t>(primes.size()) == count);
    CHECK(prime_count(9600) == count);
    for (auto p : primes) REQUIRE(is_prime_trial(p));
  }

  TEST_CASE("prime_count") {
    CHECK(prime_count(100) == 25);
    CHECK(prime_count(1) == 0);
    CHECK(prime_count(4) == 2);
    CHECK(prime_count(0) == 0);
  }

  TEST_CASE("mobius") {
    CHECK(mobius(1) == 1);
    CHECK(mobius(12) == 0);
    CHECK(mobius(30) == -1);
    CHECK(mobius(6) == 1);
    for (std::int64_t l = 1; l <= 1000; ++l) {
      int s = 0;
      for (auto d : divisors(l)) s += mobius(d);
      REQUIRE(s == (l == 1 ? 1 : 0));
    }
  }

  TEST_CASE("euler_phi") {
    CHECK(euler_phi(9) == 6);
    CHECK(euler_phi(84) == 24);
    CHECK(euler_phi(1) == 1);
    for (std::int64_t n = 1; n <= 300; ++n) {
      std::int64_t c = 0;
      for (std::int64_t a = 1; a <= n; ++a) c += std::gcd(a, n) == 1;
      REQUIRE(euler_phi(n) == c);
    }
    // multiplicative on coprime pairs
    for (std::int64_t m = 1; m <= 100; m += 7) {
      for (std::int64_t n = 1; n <= 100; n += 3) {
        if (std::gcd(m, n) != 1) continue;
        REQUIRE(euler_phi(m * n) == euler_phi(m) * euler_phi(n));
      }
    }
  }

  TEST_CASE("factorize") {
    CHECK(factorize(84) == Factorization{{2, 2}, {3, 1}, {7, 1}});
    CHECK(factorize(97) == Factorization{{97, 1}});
    CHECK(factorize(9600) == Factorization{{2, 7}, {3, 1}, {5, 2}});
    CHECK_THROWS_AS(factorize(1), InvalidArgument);
    CHECK_THROWS_AS(factorize(0), InvalidArgument);
    for (std::int64_t n = 2; n <= 10000; ++n) {
      const auto f = factorize(n);
      std::int64_t prod = 1;
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (i > 0) REQUIRE(f[i - 1].prime < f[i].prime);
        REQUIRE(f[i].exponent >= 1);
        for (int e = 0; e < f[i].exponent; ++e) prod *= f[i].prime;
      }
      REQUIRE(prod == n);
    }
  }

  TEST_CASE("prime_divisors and divisors") {
    CHECK(prime_divisors(84) == std::vector<std::int64_t>{2, 3, 7});
    CHECK(prime_divisors(1).empty());
    CHECK(divisors(12) == std::vector<std::int64_t>{1, 2, 3, 4, 6, 12});
  }

  TEST_CASE("primitive_root") {
    CHECK(primitive_root(9) == 2);
    CHECK(primitive_root(5) == 2);
    CHECK(primitive_root(7) == 3);
    CHECK_THROWS_AS(primitive_root(8), InvalidArgument);
    CHECK_THROWS_AS(primitive_root(15), InvalidArgument);
    for (std::int64_t pk = 3; pk <= 1000; pk += 2) {
      const auto f = factorize(pk);
      if (f.size() != 1) continue;
      const std::int64_t g = primitive_root(pk);
      const std::int64_t phi = euler_phi(pk);
      // exhaustive order check
      std::int64_t x = 1, order = 0;
      do {
        x = x * g % pk;
        ++order;
      } while (x != 1);
      REQUIRE(order == phi);
      // smallest such generator
      for (std::int64_t h = 2; h < g; ++h) {
        if (std::gcd(h, pk) == 1) REQUIRE(multiplicative_order(h, pk) < phi);
      }
    }
  }

  TEST_CASE("mod_pow and gcd") {
    CHECK(mod_pow(2, 10, 1000) == 24);
    CHECK(mod_pow(3, 0, 7) == 1);
    CHECK(gcd(84, 36) == 12);
    CHECK(multiplicative_order(2, 9) == 6);
  }
}
