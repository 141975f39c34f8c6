#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mertens/mp.hpp"

namespace mertens {

/// One cyclic factor of (Z/qZ)^*. For q = 2^e with e >= 3 there are two
/// factors sharing modulus 2^e, generated by -1 and 5.
struct CyclicComponent {
  std::int64_t modulus;
  std::int64_t generator;
  long order;
};

/// A Dirichlet character stored exactly: chi(r) = exp(2 pi i t_r / L), or 0
/// where gcd(r, q) > 1. L is the order of the character.
class Character {
 public:
  /// The unique character mod 1 (value 1 everywhere).
  static Character trivial();

  Character(std::int64_t modulus, std::vector<long> component_orders, std::vector<long> exponents,
            std::vector<long> table_over_group_exponent, long group_exponent);

  std::int64_t modulus() const { return modulus_; }
  long order() const { return order_; }
  const std::vector<long>& exponents() const { return exponents_; }
  const std::vector<long>& component_orders() const { return component_orders_; }

  /// t_r in [0, L), or nullopt when gcd(r, q) > 1.
  std::optional<long> exponent_at(std::int64_t r) const;
  /// Raw table: -1 marks residues sharing a factor with q.
  const std::vector<long>& table() const { return table_; }

  bool is_principal() const { return order_ == 1; }
  /// chi(q - 1) = chi(-1), either +1 or -1.
  int parity() const { return parity_; }
  std::int64_t conductor() const { return conductor_; }
  /// Position within its group (lexicographic over exponent vectors).
  std::size_t index() const;

  bool operator==(const Character& other) const {
    return modulus_ == other.modulus_ && exponents_ == other.exponents_;
  }

 private:
  friend Character power(const Character& chi, long k);

  void finish();

  std::int64_t modulus_;
  std::vector<long> component_orders_;
  std::vector<long> exponents_;
  long order_ = 1;
  std::vector<long> table_;
  int parity_ = 1;
  std::int64_t conductor_ = 1;
};

MpComplex evaluate(const Character& chi, std::int64_t r, const PrecisionContext& ctx);
MpComplex evaluate(const Character& chi, std::int64_t r, mpfr_prec_t bits);
Character power(const Character& chi, long k);
Character conjugate(const Character& chi);

class CharacterGroup {
 public:
  std::int64_t modulus() const { return modulus_; }
  const std::vector<CyclicComponent>& components() const { return components_; }
  const std::vector<Character>& characters() const { return characters_; }
  std::size_t size() const { return characters_.size(); }
  const Character& operator[](std::size_t i) const { return characters_[i]; }
  const Character& principal() const { return characters_.front(); }
  /// Index of a character of this group (e.g. a power of a member).
  std::size_t index_of(const Character& chi) const;

 private:
  friend CharacterGroup build_group(std::int64_t q);

  std::int64_t modulus_ = 0;
  std::vector<CyclicComponent> components_;
  std::vector<Character> characters_;
};

/// All phi(q) characters mod q. Index 0 is the principal character.
CharacterGroup build_group(std::int64_t q);

}  // namespace mertens
