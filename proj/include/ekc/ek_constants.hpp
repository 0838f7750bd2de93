#pragma once

#include <cstdint>
#include <string>

#include "ekc/arith.hpp"
#include "ekc/special_functions.hpp"

namespace ekc {

/// Sum over the primitive characters mod one conductor f of L'/L(1, chi).
struct ConductorTotal {
  std::uint64_t conductor;
  double total;          // sum of Re L'/L(1, chi)
  double imag_residual;  // |sum of Im L'/L(1, chi)|, zero up to rounding
  double err_estimate;
  std::uint32_t primitive_count;
  unsigned shift;  // Euler-Maclaurin shift the values were computed with
};

/// Tag naming the numerical settings, e.g. "em50".
std::string precision_tag(unsigned shift);

/*
  T(f) for one conductor. f = 1 and f = 2 (mod 4) have no primitive
  characters of interest and give an empty total.
*/
ConductorTotal conductor_total(std::uint64_t conductor, unsigned shift = kDefaultShift);

struct GammaQ {
  std::uint64_t q;
  double value;
  double err_estimate;
};

class ConductorCache;

/*
  Euler-Kronecker constant of Q(zeta_q):

      gamma_q = gamma + sum_{1 < f | q} sum_{chi primitive mod f} L'/L(1, chi).

  Conductor totals come from (and are added to) `cache`.
*/
GammaQ gamma_q(std::uint64_t q, ConductorCache& cache);

/// The conductors that gamma_q(q) reads: divisors f > 1 with f != 2 (mod 4).
std::vector<std::uint64_t> contributing_conductors(std::uint64_t q);

/*
  L-function-free estimate of gamma_q from prime sums at level x:

      gamma - sum_{chi != chi_0 mod q} Phi_chi(x) + B(q, x),

  which equals gamma_q - A(q, x). The difference shrinks as x grows.
*/
double gamma_q_via_primes(std::uint64_t q, double x, const ArithmeticTables& tables);

}  // namespace ekc
