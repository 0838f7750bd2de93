#include "ekc/lfunc.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ekc/errors.hpp"
#include "ekc/summation.hpp"

namespace ekc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::vector<std::complex<double>> root_table(std::uint64_t order) {
  std::vector<std::complex<double>> roots(order);
  for (std::uint64_t j = 0; j < order; ++j) roots[j] = unit_root(j, order);
  return roots;
}

void require_nonprincipal(const DirichletCharacter& chi) {
  if (chi.is_principal()) {
    throw RangeError("L(s, chi) has a pole at s = 1 for the principal character mod " +
                     std::to_string(chi.modulus()));
  }
}

// Per-modulus inputs shared by every character of the group.
struct ModulusTables {
  ModulusTables(const CharacterGroup& group, unsigned shift)
      : q(group.modulus()), exponent(group.exponent()), roots(root_table(exponent)) {
    for (std::uint64_t a = 1; a <= q; ++a) {
      if (group.is_unit(a)) units.push_back(a);
    }
    digamma = digamma_table(q, units);
    gamma1.reserve(units.size());
    double err1 = 0.0;
    for (const auto a : units) {
      const auto s = stieltjes01(a, q, shift);
      gamma1.push_back(s.gamma1);
      err1 += s.err_estimate;
    }
    double digamma_err = 0.0;
    for (const double d : digamma) digamma_err += 4.0 * kEps * (std::abs(d) + double(q));
    err_L = digamma_err / double(q);
    err_Lprime = std::log(double(q)) * err_L + err1 / double(q);
  }

  std::uint64_t q;
  std::uint64_t exponent;
  std::vector<std::complex<double>> roots;  // roots of unity of order `exponent`
  std::vector<std::uint64_t> units;
  std::vector<double> digamma;
  std::vector<double> gamma1;
  double err_L = 0.0;
  double err_Lprime = 0.0;
};

LValueRecord evaluate_record(const DirichletCharacter& chi, const ModulusTables& t) {
  require_nonprincipal(chi);
  const std::uint64_t stride = t.exponent / chi.order();
  CompensatedSum<std::complex<double>> s0, s1;
  for (std::size_t i = 0; i < t.units.size(); ++i) {
    const auto value = t.roots[chi.phase(t.units[i]) * stride];
    s0 += value * t.digamma[i];
    s1 += value * t.gamma1[i];
  }
  const double q = double(t.q);
  const std::complex<double> L1 = -s0.value() / q;
  const std::complex<double> L1prime = -std::log(q) * L1 - s1.value() / q;
  if (std::abs(L1) < kMinAbsL1) {
    throw VanishingLValueError("|L(1, chi)| = " + std::to_string(std::abs(L1)) + " below guard for a character mod " +
                               std::to_string(t.q));
  }
  const std::complex<double> logderiv = L1prime / L1;
  const double err = (t.err_Lprime + std::abs(logderiv) * t.err_L) / std::abs(L1);
  return {t.q, {chi.exponents().begin(), chi.exponents().end()}, L1, L1prime, logderiv, err};
}

}  // namespace

std::complex<double> l_at_one(const DirichletCharacter& chi) {
  require_nonprincipal(chi);
  const auto& group = chi.group();
  const std::uint64_t q = group.modulus();
  std::vector<std::uint64_t> units;
  for (std::uint64_t a = 1; a <= q; ++a) {
    if (group.is_unit(a)) units.push_back(a);
  }
  const auto digamma = digamma_table(q, units);
  CompensatedSum<std::complex<double>> sum;
  for (std::size_t i = 0; i < units.size(); ++i) sum += chi(units[i]) * digamma[i];
  return -sum.value() / double(q);
}

std::complex<double> l_prime_at_one(const DirichletCharacter& chi, unsigned shift) {
  return l_values(chi, shift).L1prime;
}

LValueRecord l_values(const DirichletCharacter& chi, unsigned shift) {
  require_nonprincipal(chi);
  return evaluate_record(chi, ModulusTables(chi.group(), shift));
}

std::vector<LValueRecord> l_values(const CharacterGroup& group, std::span<const DirichletCharacter> characters,
                                   unsigned shift) {
  std::vector<LValueRecord> out;
  if (characters.empty()) return out;
  const ModulusTables tables(group, shift);
  out.reserve(characters.size());
  for (const auto& chi : characters) {
    if (chi.modulus() != group.modulus()) throw RangeError("character from a different group");
    out.push_back(evaluate_record(chi, tables));
  }
  return out;
}

std::vector<std::complex<double>> phi_chi(std::span<const DirichletCharacter> characters, double x,
                                          const ArithmeticTables& tables) {
  if (x < 2.0) throw RangeError("Phi_chi(x) requires x >= 2");
  std::vector<std::complex<double>> out(characters.size());
  if (characters.empty()) return out;
  const CharacterGroup& group = characters.front().group();

  const auto roots = root_table(group.exponent());
  std::vector<std::uint64_t> strides;
  strides.reserve(characters.size());
  for (const auto& chi : characters) {
    if (&chi.group() != &group) throw RangeError("characters from different groups");
    strides.push_back(group.exponent() / chi.order());
  }

  std::vector<CompensatedSum<std::complex<double>>> sums(characters.size());
  for (const auto& pp : tables.prime_powers_upto(x)) {
    if (!group.is_unit(pp.n)) continue;
    const auto k = group.dlog(pp.n);
    const double weight = pp.log_p * (x - double(pp.n)) / double(pp.n);
    for (std::size_t c = 0; c < characters.size(); ++c) {
      sums[c] += weight * roots[characters[c].phase_of(k) * strides[c]];
    }
  }
  for (std::size_t c = 0; c < characters.size(); ++c) out[c] = sums[c].value() / (x - 1.0);
  return out;
}

std::complex<double> phi_chi(const DirichletCharacter& chi, double x, const ArithmeticTables& tables) {
  return phi_chi(std::span<const DirichletCharacter>(&chi, 1), x, tables).front();
}

}  // namespace ekc
