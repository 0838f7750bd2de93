#pragma once

#include <cstdint>
#include <map>
#include <shared_mutex>
#include <span>
#include <tuple>
#include <vector>

namespace ekc {

/// Euler-Mascheroni constant to 20 digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Default Euler-Maclaurin shift; also the precision tag of cached results.
inline constexpr unsigned kDefaultShift = 50;

/// Accuracy the truncated Euler-Maclaurin expansion must reach.
inline constexpr double kStieltjesTarget = 1e-11;

/// digamma(a/q) for 1 <= a <= q from Gauss's finite cotangent / log-sine formula.
double digamma_rational(std::uint64_t a, std::uint64_t q);

/// digamma(a/q) for each requested numerator (all in [1, q]), sharing the
/// cosine and log-sine tables across the batch.
std::vector<double> digamma_table(std::uint64_t q, std::span<const std::uint64_t> numerators);

/*
  Constant and linear Laurent coefficients of the Hurwitz zeta function at s = 1,

      zeta(s, x) = 1/(s-1) + gamma0(x) - gamma1(x) (s-1) + O((s-1)^2),

  so gamma0(x) = -digamma(x) and gamma0(1) is Euler's constant.
*/
struct StieltjesPair {
  std::uint64_t numerator;
  std::uint64_t denominator;
  double gamma0;
  double gamma1;
  double err_estimate;
};

/// Coefficients at x = a/q in (0, 1] with Euler-Maclaurin shift `shift`.
/// Throws PrecisionError when the truncation estimate exceeds kStieltjesTarget.
StieltjesPair stieltjes01(std::uint64_t a, std::uint64_t q, unsigned shift = kDefaultShift);

/// Same expansion at any positive rational a/q (a >= 1).
StieltjesPair stieltjes(std::uint64_t a, std::uint64_t q, unsigned shift = kDefaultShift);

/// Thread-safe memo of stieltjes01 keyed by the reduced fraction and shift.
class StieltjesMemo {
 public:
  StieltjesPair get(std::uint64_t a, std::uint64_t q, unsigned shift = kDefaultShift);
  std::size_t size() const;

 private:
  using Key = std::tuple<std::uint64_t, std::uint64_t, unsigned>;
  mutable std::shared_mutex mutex_;
  std::map<Key, StieltjesPair> entries_;
};

}  // namespace ekc
