#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mertens {

/// Raised on out-of-domain integer arguments (n < 2 for factorize, etc).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PrimePower {
  std::int64_t prime;
  int exponent;
  bool operator==(const PrimePower&) const = default;
};

/// Canonical factorization: primes strictly increasing, exponents >= 1.
using Factorization = std::vector<PrimePower>;

/// Plain bit sieve. Returns the primes <= limit in ascending order.
std::vector<std::int64_t> sieve_primes(std::int64_t limit);

std::int64_t prime_count(std::int64_t x);

int mobius(std::int64_t n);
std::int64_t euler_phi(std::int64_t n);

Factorization factorize(std::int64_t n);

/// Distinct prime divisors of n (n >= 1; empty for n == 1).
std::vector<std::int64_t> prime_divisors(std::int64_t n);

/// Smallest generator of (Z / p^e Z)^* for an odd prime power p^e.
std::int64_t primitive_root(std::int64_t pk);

/// Multiplicative order of g modulo n (gcd(g, n) must be 1).
std::int64_t multiplicative_order(std::int64_t g, std::int64_t n);

std::int64_t gcd(std::int64_t a, std::int64_t b);
std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t mod);

/// Positive divisors of n in ascending order.
std::vector<std::int64_t> divisors(std::int64_t n);

}  // namespace mertens
