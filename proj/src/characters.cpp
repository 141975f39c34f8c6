#include "mertens/characters.hpp"

#include <numeric>
#include <string>

#include "mertens/arith.hpp"

namespace mertens {

Character Character::trivial() { return Character(1, {}, {}, {0}, 1); }

Character::Character(std::int64_t modulus, std::vector<long> component_orders, std::vector<long> exponents,
                     std::vector<long> table_over_group_exponent, long group_exponent)
    : modulus_(modulus),
      component_orders_(std::move(component_orders)),
      exponents_(std::move(exponents)),
      order_(group_exponent),
      table_(std::move(table_over_group_exponent)) {
  finish();
}

void Character::finish() {
  long g = order_;
  for (long t : table_) {
    if (t > 0) g = std::gcd(g, t);
  }
  if (g > 1) {
    order_ /= g;
    for (long& t : table_) {
      if (t > 0) t /= g;
    }
  }
  const auto last = static_cast<std::size_t>((modulus_ - 1) % modulus_);
  parity_ = (table_[last] == 0) ? 1 : -1;

  conductor_ = modulus_;
  for (std::int64_t d : divisors(modulus_)) {
    bool induced = true;
    for (std::int64_t r = 1; r < modulus_ && induced; r += d) {
      const long t = table_[static_cast<std::size_t>(r)];
      if (t > 0) induced = false;
    }
    if (induced) {
      conductor_ = d;
      break;
    }
  }
}

std::optional<long> Character::exponent_at(std::int64_t r) const {
  const long t = table_[static_cast<std::size_t>(((r % modulus_) + modulus_) % modulus_)];
  if (t < 0) return std::nullopt;
  return t;
}

std::size_t Character::index() const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    idx = idx * static_cast<std::size_t>(component_orders_[i]) + static_cast<std::size_t>(exponents_[i]);
  }
  return idx;
}

MpComplex evaluate(const Character& chi, std::int64_t r, mpfr_prec_t bits) {
  const auto t = chi.exponent_at(r);
  if (!t) return MpComplex(bits);
  return root_of_unity(*t, chi.order(), bits);
}

MpComplex evaluate(const Character& chi, std::int64_t r, const PrecisionContext& ctx) {
  return evaluate(chi, r, ctx.bits());
}

Character power(const Character& chi, long k) {
  if (k < 0) throw InvalidArgument("power: exponent must be non-negative");
  Character out = chi;
  for (std::size_t i = 0; i < out.exponents_.size(); ++i) {
    out.exponents_[i] = static_cast<long>((static_cast<std::int64_t>(out.exponents_[i]) * k) %
                                          out.component_orders_[i]);
  }
  for (long& t : out.table_) {
    if (t >= 0) t = static_cast<long>((static_cast<std::int64_t>(t) * k) % out.order_);
  }
  out.finish();
  return out;
}

Character conjugate(const Character& chi) { return power(chi, chi.order() - 1); }

std::size_t CharacterGroup::index_of(const Character& chi) const {
  if (chi.modulus() != modulus_) throw InvalidArgument("index_of: character has a different modulus");
  return chi.index();
}

CharacterGroup build_group(std::int64_t q) {
  if (q < 3) throw InvalidArgument("build_group: modulus must be >= 3, got " + std::to_string(q));

  CharacterGroup group;
  group.modulus_ = q;

  // Cyclic decomposition, ordered by component modulus. For each component
  // record the discrete log of every residue of the component modulus.
  std::vector<std::vector<long>> logs;  // logs[c][r mod component modulus]
  for (const auto& pp : factorize(q)) {
    std::int64_t pk = 1;
    for (int i = 0; i < pp.exponent; ++i) pk *= pp.prime;
    if (pp.prime == 2) {
      if (pk == 2) continue;
      std::vector<long> sign_log(static_cast<std::size_t>(pk), -1);
      for (std::int64_t r = 1; r < pk; r += 2) sign_log[static_cast<std::size_t>(r)] = (r % 4 == 3) ? 1 : 0;
      group.components_.push_back({pk, pk - 1, 2});
      logs.push_back(std::move(sign_log));
      if (pk >= 8) {
        const long ord = static_cast<long>(pk / 4);
        std::vector<long> five_log(static_cast<std::size_t>(pk), -1);
        std::int64_t x = 1;
        for (long e = 0; e < ord; ++e) {
          five_log[static_cast<std::size_t>(x)] = e;
          five_log[static_cast<std::size_t>(pk - x)] = e;  // -5^e has the same 5-part
          x = x * 5 % pk;
        }
        group.components_.push_back({pk, 5, ord});
        logs.push_back(std::move(five_log));
      }
    } else {
      const std::int64_t g = primitive_root(pk);
      const long ord = static_cast<long>(euler_phi(pk));
      std::vector<long> dlog(static_cast<std::size_t>(pk), -1);
      std::int64_t x = 1;
      for (long e = 0; e < ord; ++e) {
        dlog[static_cast<std::size_t>(x)] = e;
        x = x * g % pk;
      }
      group.components_.push_back({pk, g, ord});
      logs.push_back(std::move(dlog));
    }
  }

  std::vector<long> orders;
  long lambda = 1;
  for (const auto& c : group.components_) {
    orders.push_back(c.order);
    lambda = std::lcm(lambda, c.order);
  }

  const std::int64_t phi = euler_phi(q);
  group.characters_.reserve(static_cast<std::size_t>(phi));
  std::vector<long> exps(orders.size(), 0);
  for (std::int64_t n = 0; n < phi; ++n) {
    std::vector<long> table(static_cast<std::size_t>(q), -1);
    for (std::int64_t r = 1; r < q; ++r) {
      if (gcd(r, q) != 1) continue;
      std::int64_t t = 0;
      for (std::size_t c = 0; c < orders.size(); ++c) {
        const std::int64_t m = group.components_[c].modulus;
        t += static_cast<std::int64_t>(exps[c]) * logs[c][static_cast<std::size_t>(r % m)] * (lambda / orders[c]);
      }
      table[static_cast<std::size_t>(r)] = static_cast<long>(t % lambda);
    }
    group.characters_.emplace_back(q, orders, exps, std::move(table), lambda);
    // advance the mixed-radix counter, last component fastest
    for (std::size_t c = orders.size(); c-- > 0;) {
      if (++exps[c] < orders[c]) break;
      exps[c] = 0;
    }
  }
  return group;
}

}  // namespace mertens
