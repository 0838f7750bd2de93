#pragma once

#include <cstdint>

#include "ekc/arith.hpp"
#include "ekc/conductor_cache.hpp"

namespace ekc {

/*
  Pointwise splitting of gamma_q at a finite level x with a cut point x1
  (q <= x1 <= x):

      gamma_q = gamma + A + B - g2 - g3 - (g11 + g12 + g13).

  With F(u) = phi(q) psi(u; q, 1) - psi(u) and the averaging operator
  M[f] = 1/(x-1) int_1^x f(t) dt:

      A   = sum_{1 < f | q} sum_{chi* prim mod f} (L'/L(1, chi*) + Phi_chi*(x))
      B   = sum_{chi != chi_0 mod q} Phi_chi(x) - sum_{1 < f | q} sum_{chi*} Phi_chi*(x)
      g2  = M[F(t) / t]
      g3  = M[sum_{n <= t, (n, q) > 1} Lambda(n) / n]
      g1j = M[int F(u) / u^2 du] over [1, min(q,t)], [min(q,t), min(x1,t)],
            [min(x1,t), t] for j = 1, 2, 3.

  gamma + A + B telescopes to gamma_q + sum_{chi != chi_0} Phi_chi(x), and
  orthogonality plus partial summation split that Phi sum into exactly
  g2 + g3 + g11 + g12 + g13, so the identity holds for every admissible
  (x, x1). Every step integral is evaluated in closed form by swapping the
  order of integration; nothing here uses quadrature.
*/

/// Which conductors enter the B-type sums over f | q.
enum class ConductorLayers {
  nontrivial,    // 1 < f | q, matching the definition of B above
  with_trivial,  // every f | q, including the trivial character mod 1
};

/*
  Inner Moebius sum  sum_{f | q, d | f, p does not divide f} mu(f / d)  of the
  prime-power weights in B, evaluated literally over the divisors of q.
  With the trivial layer it always lies in {0, 1}.
*/
int inner_moebius_sum(std::uint64_t q, std::uint64_t p, std::uint64_t d,
                      ConductorLayers layers = ConductorLayers::with_trivial);

/// sum_{d | p^v - 1} phi(d) * inner_moebius_sum(q, p, d): the net character
/// weight that the prime power p^v (p | q) carries in B.
std::int64_t b_weight(std::uint64_t q, std::uint64_t p, std::uint64_t prime_power,
                      ConductorLayers layers = ConductorLayers::with_trivial);

/*
  B in closed form:

      -1/(x-1) sum_{p | q} sum_{p^v <= x} (log p / p^v) (x - p^v) b_weight(q, p, p^v).

  With ConductorLayers::nontrivial this is B as used in the identity. With
  ConductorLayers::with_trivial the trivial character mod 1 is also paired
  with chi_0, which subtracts g3; that variant is never positive because its
  weights are nonnegative. The nontrivial B itself can be positive (q = 6).
*/
double b_term(std::uint64_t q, double x, const ArithmeticTables& tables,
              ConductorLayers layers = ConductorLayers::with_trivial);

double a_term(std::uint64_t q, double x, const ArithmeticTables& tables, ConductorCache& cache);
double gamma2(std::uint64_t q, double x, const ArithmeticTables& tables);
double gamma3(std::uint64_t q, double x, const ArithmeticTables& tables);

/// g11 (j = 1), g12 (j = 2) or g13 (j = 3); requires q <= x1 <= x.
double gamma1j(std::uint64_t q, double x, double x1, const ArithmeticTables& tables, int j);

/// sum_{chi != chi_0 mod q} Phi_chi(x) through orthogonality, no characters.
double nonprincipal_phi_sum(std::uint64_t q, double x, const ArithmeticTables& tables);

struct DecompositionReport {
  std::uint64_t q;
  double x;
  double x1;
  double A;
  double B;
  double g2;
  double g3;
  double g11;
  double g12;
  double g13;
  double B_with_trivial;  // b_term(..., with_trivial) = B - g3
  double gamma_q;         // from the L-value route
  double residual;        // gamma_q - (gamma + A + B - g2 - g3 - g11 - g12 - g13)
};

inline constexpr double kIdentityTolerance = 1e-6;

DecompositionReport decompose(std::uint64_t q, double x, double x1, const ArithmeticTables& tables,
                              ConductorCache& cache);

/// Default level: max(1e5, q^2) capped at the sieve bound.
double default_level(std::uint64_t q, std::uint64_t sieve_bound);

/// Cut point q^e clamped to [q, x].
double default_cut(std::uint64_t q, double x, double exponent = 2.0);

}  // namespace ekc
