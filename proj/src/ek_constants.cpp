#include "ekc/ek_constants.hpp"

#include <cmath>

#include "ekc/characters.hpp"
#include "ekc/conductor_cache.hpp"
#include "ekc/decomposition.hpp"
#include "ekc/errors.hpp"
#include "ekc/lfunc.hpp"
#include "ekc/summation.hpp"

namespace ekc {

std::string precision_tag(unsigned shift) { return "em" + std::to_string(shift); }

ConductorTotal conductor_total(std::uint64_t conductor, unsigned shift) {
  if (conductor == 0) throw RangeError("conductor must be positive");
  ConductorTotal out{conductor, 0.0, 0.0, 0.0, 0, shift};
  if (conductor == 1 || conductor % 4 == 2) return out;

  const auto group = CharacterGroup::build(conductor);
  const auto characters = group->primitive_characters();
  const auto records = l_values(*group, characters, shift);

  CompensatedSum<double> re, im;
  double err = 0.0;
  for (const auto& r : records) {
    re += r.logderiv.real();
    im += r.logderiv.imag();
    err += r.err_estimate;
  }
  out.total = re.value();
  out.imag_residual = std::abs(im.value());
  out.err_estimate = err;
  out.primitive_count = static_cast<std::uint32_t>(records.size());
  return out;
}

std::vector<std::uint64_t> contributing_conductors(std::uint64_t q) {
  std::vector<std::uint64_t> out;
  for (const auto d : divisors(q)) {
    if (d > 1 && d % 4 != 2) out.push_back(d);
  }
  return out;
}

GammaQ gamma_q(std::uint64_t q, ConductorCache& cache) {
  if (q == 0) throw RangeError("gamma_q requires q >= 1");
  CompensatedSum<double> sum(kEulerGamma);
  double err = 0.0;
  for (const auto f : contributing_conductors(q)) {
    const auto t = cache.get(f);
    sum += t.total;
    err += t.err_estimate;
  }
  return {q, sum.value(), err};
}

double gamma_q_via_primes(std::uint64_t q, double x, const ArithmeticTables& tables) {
  if (q == 0) throw RangeError("gamma_q requires q >= 1");
  return kEulerGamma - nonprincipal_phi_sum(q, x, tables) + b_term(q, x, tables, ConductorLayers::nontrivial);
}

}  // namespace ekc
