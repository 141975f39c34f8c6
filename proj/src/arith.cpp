#include "mertens/arith.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace mertens {

std::vector<std::int64_t> sieve_primes(std::int64_t limit) {
  std::vector<std::int64_t> primes;
  if (limit < 2) return primes;
  // odd-only bit sieve: index i stands for 2i+1
  const std::size_t half = static_cast<std::size_t>(limit / 2 + 1);
  std::vector<bool> composite(half, false);
  primes.push_back(2);
  for (std::size_t i = 1; i < half; ++i) {
    const std::int64_t p = 2 * static_cast<std::int64_t>(i) + 1;
    if (p > limit) break;
    if (composite[i]) continue;
    primes.push_back(p);
    for (std::int64_t m = p * p; m <= limit; m += 2 * p) composite[static_cast<std::size_t>(m / 2)] = true;
  }
  return primes;
}

std::int64_t prime_count(std::int64_t x) {
  return static_cast<std::int64_t>(sieve_primes(x).size());
}

Factorization factorize(std::int64_t n) {
  if (n < 2) throw InvalidArgument("factorize: n must be >= 2, got " + std::to_string(n));
  Factorization f;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.push_back({p, e});
  }
  if (n > 1) f.push_back({n, 1});
  return f;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 2) return out;
  for (const auto& pp : factorize(n)) out.push_back(pp.prime);
  return out;
}

int mobius(std::int64_t n) {
  if (n < 1) throw InvalidArgument("mobius: n must be >= 1");
  if (n == 1) return 1;
  int sign = 1;
  for (const auto& pp : factorize(n)) {
    if (pp.exponent > 1) return 0;
    sign = -sign;
  }
  return sign;
}

std::int64_t euler_phi(std::int64_t n) {
  if (n < 1) throw InvalidArgument("euler_phi: n must be >= 1");
  std::int64_t phi = n;
  for (std::int64_t p : prime_divisors(n)) phi = phi / p * (p - 1);
  return phi;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t mod) {
  using u128 = unsigned __int128;
  std::int64_t result = 1 % mod;
  std::int64_t b = ((base % mod) + mod) % mod;
  while (exp > 0) {
    if (exp & 1) result = static_cast<std::int64_t>(static_cast<u128>(result) * b % mod);
    b = static_cast<std::int64_t>(static_cast<u128>(b) * b % mod);
    exp >>= 1;
  }
  return result;
}

std::int64_t multiplicative_order(std::int64_t g, std::int64_t n) {
  if (gcd(g, n) != 1) throw InvalidArgument("multiplicative_order: gcd(g, n) != 1");
  if (n == 1) return 1;
  std::int64_t order = euler_phi(n);
  for (std::int64_t p : prime_divisors(order)) {
    while (order % p == 0 && mod_pow(g, order / p, n) == 1) order /= p;
  }
  return order;
}

std::int64_t primitive_root(std::int64_t pk) {
  if (pk < 3 || pk % 2 == 0) throw InvalidArgument("primitive_root: expected an odd prime power");
  const auto f = factorize(pk);
  if (f.size() != 1) throw InvalidArgument("primitive_root: expected an odd prime power");
  const std::int64_t phi = euler_phi(pk);
  const auto phi_primes = prime_divisors(phi);
  for (std::int64_t g = 2; g < pk; ++g) {
    if (gcd(g, pk) != 1) continue;
    const bool generator = std::none_of(phi_primes.begin(), phi_primes.end(),
                                        [&](std::int64_t r) { return mod_pow(g, phi / r, pk) == 1; });
    if (generator) return g;
  }
  throw InvalidArgument("primitive_root: no generator found");  // unreachable for odd prime powers
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> small, large;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

}  // namespace mertens
