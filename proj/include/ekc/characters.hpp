#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace ekc {

/// One cyclic factor of (Z/q)^x. Odd prime powers contribute one factor
/// (a primitive root); 2^k contributes {-1} for k >= 2 and {5} for k >= 3.
struct CyclicFactor {
  std::uint64_t prime;
  unsigned exponent;
  std::uint64_t prime_power;
  std::uint64_t local_generator;  // residue mod prime_power
  std::uint64_t generator;        // CRT lift: local_generator mod prime_power, 1 mod q / prime_power
  std::uint64_t order;
};

/// exp(2 pi i k / n), kept exact until the final conversion.
struct RootOfUnity {
  std::uint64_t k;
  std::uint64_t n;
  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
};

/// exp(2 pi i k / n) as a complex double. Quarter turns are exact and
/// unit_root(n - k, n) is the exact conjugate of unit_root(k, n).
std::complex<double> unit_root(std::uint64_t k, std::uint64_t n);

class DirichletCharacter;

/*
  (Z/q)^x as a product of cyclic groups, with a discrete-log table mapping
  every unit to its exponent vector. The table costs q * factors() words, which
  is fine for the moduli this library works with (q up to a few 10^4).
*/
class CharacterGroup : public std::enable_shared_from_this<CharacterGroup> {
 public:
  static std::shared_ptr<const CharacterGroup> build(std::uint64_t q);

  std::uint64_t modulus() const { return q_; }
  std::span<const CyclicFactor> factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }

  /// |(Z/q)^x| = phi(q).
  std::uint64_t order() const { return order_; }

  /// lcm of the factor orders.
  std::uint64_t exponent() const { return exponent_; }

  bool is_unit(std::uint64_t n) const { return unit_[n % q_] != 0; }

  /// Exponent vector of n (which must be a unit) on the cyclic generators.
  std::span<const std::uint32_t> dlog(std::uint64_t n) const;

  /// The character with the given exponent vector, e_i taken mod d_i.
  DirichletCharacter character(std::span<const std::uint32_t> exponents) const;

  /// All phi(q) characters in mixed-radix order of the exponent vector; the
  /// principal character comes first.
  std::vector<DirichletCharacter> characters() const;

  /// Only the characters of conductor q, in the same relative order.
  std::vector<DirichletCharacter> primitive_characters() const;

  /// Number of primitive characters mod q without enumerating them.
  std::uint64_t primitive_count() const;

 private:
  explicit CharacterGroup(std::uint64_t q);

  std::uint64_t q_;
  std::uint64_t order_ = 1;
  std::uint64_t exponent_ = 1;
  std::vector<CyclicFactor> factors_;
  std::vector<std::uint8_t> unit_;
  std::vector<std::uint32_t> dlog_;  // q_ * rank(), row per residue
};

inline std::shared_ptr<const CharacterGroup> build_group(std::uint64_t q) {
  return CharacterGroup::build(q);
}

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const CharacterGroup> group, std::vector<std::uint32_t> exponents);

  const CharacterGroup& group() const { return *group_; }
  std::uint64_t modulus() const { return group_->modulus(); }
  std::span<const std::uint32_t> exponents() const { return exponents_; }

  std::uint64_t order() const { return order_; }
  std::uint64_t conductor() const { return conductor_; }
  int parity() const { return parity_; }
  bool is_principal() const { return order_ == 1; }
  bool is_primitive() const { return conductor_ == modulus(); }
  bool is_real() const { return order_ <= 2; }

  /// chi(n) as an exact root of unity with denominator order(); nullopt when
  /// gcd(n, q) > 1.
  std::optional<RootOfUnity> exact_value(std::uint64_t n) const;

  /// Phase index k with chi(n) = exp(2 pi i k / order()); n must be a unit.
  std::uint64_t phase(std::uint64_t n) const;

  /// Same, from an exponent vector already looked up with group().dlog(n).
  std::uint64_t phase_of(std::span<const std::uint32_t> dlog) const;

  std::complex<double> operator()(std::uint64_t n) const;

  DirichletCharacter conj() const;

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus() == b.modulus() && a.exponents_ == b.exponents_;
  }

 private:
  std::shared_ptr<const CharacterGroup> group_;
  std::vector<std::uint32_t> exponents_;
  std::vector<std::uint64_t> weights_;  // e_i * order / d_i
  std::uint64_t order_ = 1;
  std::uint64_t conductor_ = 1;
  int parity_ = 1;
};

/// Smallest f | q through which chi factors, assembled from per-factor levels.
inline std::uint64_t conductor(const DirichletCharacter& chi) { return chi.conductor(); }

inline std::complex<double> evaluate(const DirichletCharacter& chi, std::uint64_t n) { return chi(n); }

}  // namespace ekc
