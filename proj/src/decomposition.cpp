#include "ekc/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ekc/characters.hpp"
#include "ekc/errors.hpp"
#include "ekc/lfunc.hpp"
#include "ekc/special_functions.hpp"
#include "ekc/summation.hpp"

namespace ekc {

namespace {

void check_level(std::uint64_t q, double x, const ArithmeticTables& tables) {
  if (q == 0) throw RangeError("q must be positive");
  if (!(x >= 2.0)) throw RangeError("level x must be at least 2");
  if (x > double(tables.bound())) {
    throw RangeError("level x = " + std::to_string(x) + " exceeds sieve bound " + std::to_string(tables.bound()));
  }
}

// 1/(x-1) int_1^x int_{min(lo,t)}^{min(hi,t)} [u >= n] / u^2 du dt, lo <= hi <= x.
double cut_weight(double n, double lo, double hi, double x) {
  if (n > hi) return 0.0;
  const double m = std::max(n, lo);
  return (hi - m) / m - std::log(hi / m) + (x - hi) * (1.0 / m - 1.0 / hi);
}

}  // namespace

int inner_moebius_sum(std::uint64_t q, std::uint64_t p, std::uint64_t d, ConductorLayers layers) {
  int sum = 0;
  for (const auto f : divisors(q)) {
    if (f % d != 0 || f % p == 0) continue;
    if (layers == ConductorLayers::nontrivial && f == 1) continue;
    sum += moebius(f / d);
  }
  return sum;
}

std::int64_t b_weight(std::uint64_t q, std::uint64_t p, std::uint64_t prime_power, ConductorLayers layers) {
  if (q % p != 0) throw RangeError("b_weight needs p | q");
  std::int64_t w = 0;
  // d must divide some f | q, so only divisors of gcd(p^v - 1, q) contribute
  for (const auto d : divisors(gcd(prime_power - 1, q))) {
    w += static_cast<std::int64_t>(euler_phi(d)) * inner_moebius_sum(q, p, d, layers);
  }
  return w;
}

double b_term(std::uint64_t q, double x, const ArithmeticTables& tables, ConductorLayers layers) {
  check_level(q, x, tables);
  CompensatedSum<double> sum;
  for (const auto& [p, k] : factorize(q)) {
    const double log_p = std::log(double(p));
    for (std::uint64_t pv = p; double(pv) <= x; pv *= p) {
      const std::int64_t w = b_weight(q, p, pv, layers);
      if (w != 0) sum += log_p / double(pv) * (x - double(pv)) * double(w);
    }
  }
  return -sum.value() / (x - 1.0);
}

double nonprincipal_phi_sum(std::uint64_t q, double x, const ArithmeticTables& tables) {
  check_level(q, x, tables);
  const double phi_q = double(euler_phi(q));
  CompensatedSum<double> sum;
  for (const auto& pp : tables.prime_powers_upto(x)) {
    double weight = pp.n % q == 1 % q ? phi_q : 0.0;
    if (q % pp.p != 0) weight -= 1.0;
    if (weight != 0.0) sum += pp.log_p * (x - double(pp.n)) / double(pp.n) * weight;
  }
  return sum.value() / (x - 1.0);
}

double a_term(std::uint64_t q, double x, const ArithmeticTables& tables, ConductorCache& cache) {
  check_level(q, x, tables);
  CompensatedSum<double> sum;
  for (const auto f : contributing_conductors(q)) {
    sum += cache.get(f).total;
    const auto group = CharacterGroup::build(f);
    const auto characters = group->primitive_characters();
    for (const auto& phi : phi_chi(characters, x, tables)) sum += phi.real();
  }
  return sum.value();
}

double gamma2(std::uint64_t q, double x, const ArithmeticTables& tables) {
  check_level(q, x, tables);
  const double phi_q = double(euler_phi(q));
  CompensatedSum<double> sum;
  for (const auto& pp : tables.prime_powers_upto(x)) {
    const double c = pp.log_p * ((pp.n % q == 1 % q ? phi_q : 0.0) - 1.0);
    if (c != 0.0) sum += c * std::log(x / double(pp.n));
  }
  return sum.value() / (x - 1.0);
}

double gamma3(std::uint64_t q, double x, const ArithmeticTables& tables) {
  check_level(q, x, tables);
  CompensatedSum<double> sum;
  for (const auto& pp : tables.prime_powers_upto(x)) {
    if (q % pp.p == 0) sum += pp.log_p * (x - double(pp.n)) / double(pp.n);
  }
  return sum.value() / (x - 1.0);
}

double gamma1j(std::uint64_t q, double x, double x1, const ArithmeticTables& tables, int j) {
  check_level(q, x, tables);
  if (!(double(q) <= x1 && x1 <= x)) throw RangeError("gamma1j requires q <= x1 <= x");
  double lo = 0.0, hi = 0.0;
  switch (j) {
    case 1: lo = 1.0, hi = double(q); break;
    case 2: lo = double(q), hi = x1; break;
    case 3: lo = x1, hi = x; break;
    default: throw RangeError("gamma1j index must be 1, 2 or 3");
  }
  const double phi_q = double(euler_phi(q));
  CompensatedSum<double> sum;
  for (const auto& pp : tables.prime_powers_upto(hi)) {
    const double c = pp.log_p * ((pp.n % q == 1 % q ? phi_q : 0.0) - 1.0);
    if (c != 0.0) sum += c * cut_weight(double(pp.n), lo, hi, x);
  }
  return sum.value() / (x - 1.0);
}

DecompositionReport decompose(std::uint64_t q, double x, double x1, const ArithmeticTables& tables,
                              ConductorCache& cache) {
  check_level(q, x, tables);
  if (!(double(q) <= x1 && x1 <= x)) {
    throw RangeError("decomposition requires q <= x1 <= x (q = " + std::to_string(q) +
                     ", x1 = " + std::to_string(x1) + ", x = " + std::to_string(x) + ")");
  }
  DecompositionReport r{};
  r.q = q;
  r.x = x;
  r.x1 = x1;
  r.A = a_term(q, x, tables, cache);
  r.B = b_term(q, x, tables, ConductorLayers::nontrivial);
  r.g2 = gamma2(q, x, tables);
  r.g3 = gamma3(q, x, tables);
  r.g11 = gamma1j(q, x, x1, tables, 1);
  r.g12 = gamma1j(q, x, x1, tables, 2);
  r.g13 = gamma1j(q, x, x1, tables, 3);
  r.B_with_trivial = b_term(q, x, tables, ConductorLayers::with_trivial);
  r.gamma_q = gamma_q(q, cache).value;

  CompensatedSum<double> rhs(kEulerGamma);
  rhs += r.A;
  rhs += r.B;
  rhs -= r.g2;
  rhs -= r.g3;
  rhs -= r.g11;
  rhs -= r.g12;
  rhs -= r.g13;
  r.residual = r.gamma_q - rhs.value();
  return r;
}

double default_level(std::uint64_t q, std::uint64_t sieve_bound) {
  return std::min(std::max(1e5, double(q) * double(q)), double(sieve_bound));
}

double default_cut(std::uint64_t q, double x, double exponent) {
  return std::clamp(std::pow(double(q), exponent), std::min(double(q), x), x);
}

}  // namespace ekc
