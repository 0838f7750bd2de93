#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ekc/arith.hpp"
#include "ekc/characters.hpp"
#include "ekc/special_functions.hpp"

namespace ekc {

struct LValueRecord {
  std::uint64_t modulus;
  std::vector<std::uint32_t> exponents;
  std::complex<double> L1;
  std::complex<double> L1prime;
  std::complex<double> logderiv;  // L'(1, chi) / L(1, chi)
  double err_estimate;
};

/// Guard on |L(1, chi)|; smaller values raise VanishingLValueError.
inline constexpr double kMinAbsL1 = 1e-6;

/*
  L(1, chi) = -(1/q) sum_{a=1}^{q} chi(a) digamma(a/q) for non-principal chi.
  The Hurwitz poles cancel because sum_a chi(a) = 0, so they never enter.
  Principal characters throw RangeError.
*/
std::complex<double> l_at_one(const DirichletCharacter& chi);

/// L'(1, chi) = -log q L(1, chi) - (1/q) sum_a chi(a) gamma1(a/q).
std::complex<double> l_prime_at_one(const DirichletCharacter& chi, unsigned shift = kDefaultShift);

/// Both values, their ratio and an error estimate for one character.
LValueRecord l_values(const DirichletCharacter& chi, unsigned shift = kDefaultShift);

/// Batch version for characters that all share one group; the digamma and
/// Stieltjes tables for the modulus are built once.
std::vector<LValueRecord> l_values(const CharacterGroup& group, std::span<const DirichletCharacter> characters,
                                   unsigned shift = kDefaultShift);

/*
  Phi_chi(x) = 1/(x-1) int_1^x sum_{n <= t} Lambda(n) chi(n) / n dt
             = 1/(x-1) sum_{n <= x} Lambda(n) chi(n) (x - n) / n,
  the integrand being a step function. Requires 2 <= x <= tables.bound().
*/
std::complex<double> phi_chi(const DirichletCharacter& chi, double x, const ArithmeticTables& tables);

/// Phi for several characters of one group in a single pass over prime powers.
std::vector<std::complex<double>> phi_chi(std::span<const DirichletCharacter> characters, double x,
                                          const ArithmeticTables& tables);

}  // namespace ekc
