#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mertens/arith.hpp"

namespace mertens {

template <class F>
void for_each_prime(std::uint64_t limit, F&& f) {
  if (limit < 2) return;
  f(std::uint64_t{2});
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
  while (root * root > limit) --root;
  while ((root + 1) * (root + 1) <= limit) ++root;
  const auto base = sieve_primes(static_cast<std::int64_t>(root));

  // odd numbers only: slot i of a segment starting at lo stands for lo + 2i
  constexpr std::uint64_t kSlots = 1 << 18;
  std::vector<unsigned char> composite(kSlots);
  for (std::uint64_t lo = 3; lo <= limit; lo += 2 * kSlots) {
    const std::uint64_t hi = std::min(limit, lo + 2 * kSlots - 1);
    const std::uint64_t slots = (hi - lo) / 2 + 1;
    std::fill(composite.begin(), composite.begin() + static_cast<std::ptrdiff_t>(slots), 0);
    for (std::int64_t sp : base) {
      const auto p = static_cast<std::uint64_t>(sp);
      if (p == 2) continue;
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t m = start; m <= hi; m += 2 * p) composite[(m - lo) / 2] = 1;
    }
    for (std::uint64_t i = 0; i < slots; ++i) {
      if (!composite[i]) f(lo + 2 * i);
    }
  }
}

}  // namespace mertens
