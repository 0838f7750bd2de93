#include "ekc/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include "ekc/arith.hpp"
#include "ekc/characters.hpp"
#include "ekc/errors.hpp"
#include "ekc/summation.hpp"

namespace ekc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// B_2 .. B_12
constexpr std::array<double, 6> kBernoulli = {1.0 / 6.0,   -1.0 / 30.0, 1.0 / 42.0,
                                              -1.0 / 30.0, 5.0 / 66.0,  -691.0 / 2730.0};
constexpr double kBernoulli14 = 7.0 / 6.0;

void check_rational(std::uint64_t a, std::uint64_t q) {
  if (q == 0 || a == 0 || a > q) {
    throw RangeError("rational argument a/q must satisfy 1 <= a <= q, got " + std::to_string(a) + "/" +
                     std::to_string(q));
  }
}

// Shared pieces of Gauss's formula for one denominator.
struct GaussTables {
  explicit GaussTables(std::uint64_t q) : q(q), cosines(q), log_sines((q + 1) / 2) {
    for (std::uint64_t j = 0; j < q; ++j) cosines[j] = unit_root(j, q).real();
    for (std::uint64_t k = 1; k < log_sines.size(); ++k) {
      log_sines[k] = std::log(std::sin(kPi * double(k) / double(q)));
    }
  }

  double digamma(std::uint64_t a) const {
    if (a == q) return -kEulerGamma;
    CompensatedSum<double> sum(-kEulerGamma);
    sum -= std::log(2.0 * double(q));
    sum -= 0.5 * kPi / std::tan(kPi * double(a) / double(q));
    std::uint64_t idx = 0;
    for (std::uint64_t k = 1; k < log_sines.size(); ++k) {
      idx += a;
      if (idx >= q) idx %= q;
      sum += 2.0 * cosines[idx] * log_sines[k];
    }
    return sum.value();
  }

  std::uint64_t q;
  std::vector<double> cosines;
  std::vector<double> log_sines;
};

}  // namespace

double digamma_rational(std::uint64_t a, std::uint64_t q) {
  check_rational(a, q);
  const std::uint64_t g = gcd(a, q);
  a /= g;
  q /= g;
  if (a == q) return -kEulerGamma;
  return GaussTables(q).digamma(a);
}

std::vector<double> digamma_table(std::uint64_t q, std::span<const std::uint64_t> numerators) {
  for (const auto a : numerators) check_rational(a, q);
  const GaussTables tables(q);
  std::vector<double> out;
  out.reserve(numerators.size());
  for (const auto a : numerators) out.push_back(tables.digamma(a));
  return out;
}

StieltjesPair stieltjes(std::uint64_t a, std::uint64_t q, unsigned shift) {
  if (q == 0 || a == 0) throw RangeError("stieltjes requires a positive rational argument");
  if (shift == 0) throw PrecisionError("Euler-Maclaurin shift must be positive", INFINITY);

  const double qd = double(q);
  CompensatedSum<double> g0, g1;
  double magnitude0 = 0.0, magnitude1 = 0.0;
  for (unsigned k = 0; k < shift; ++k) {
    const double v = double(a + std::uint64_t{k} * q) / qd;
    const double inv = 1.0 / v;
    const double term1 = std::log(v) * inv;
    g0 += inv;
    g1 += term1;
    magnitude0 += inv;
    magnitude1 += std::abs(term1);
  }

  const double y = double(a + std::uint64_t{shift} * q) / qd;
  const double L = std::log(y);
  g0 -= L;
  g0 += 0.5 / y;
  g1 -= 0.5 * L * L;
  g1 += 0.5 * L / y;

  // tail: sum_j B_2j/(2j) y^{-2j} in gamma0, times (H_{2j-1} - L) in -gamma1
  const double y2 = 1.0 / (y * y);
  double ypow = 1.0;
  double harmonic = 0.0;  // H_{2j-1}
  unsigned harmonic_upto = 0;
  for (std::size_t j = 1; j <= kBernoulli.size(); ++j) {
    ypow *= y2;
    while (harmonic_upto < 2 * j - 1) harmonic += 1.0 / double(++harmonic_upto);
    const double c = kBernoulli[j - 1] / double(2 * j) * ypow;
    g0 += c;
    g1 -= c * (harmonic - L);
  }
  ypow *= y2;
  while (harmonic_upto < 13) harmonic += 1.0 / double(++harmonic_upto);
  const double truncation = std::abs(kBernoulli14 / 14.0 * ypow) * std::max(1.0, harmonic + std::abs(L));
  const double rounding = 4.0 * kEps * (magnitude0 + magnitude1 + L * L + std::abs(L));

  StieltjesPair out{a, q, g0.value(), g1.value(), truncation + rounding};
  if (truncation > kStieltjesTarget) {
    throw PrecisionError("Euler-Maclaurin shift " + std::to_string(shift) + " too small: estimated error " +
                             std::to_string(truncation),
                         truncation);
  }
  return out;
}

StieltjesPair stieltjes01(std::uint64_t a, std::uint64_t q, unsigned shift) {
  check_rational(a, q);
  return stieltjes(a, q, shift);
}

StieltjesPair StieltjesMemo::get(std::uint64_t a, std::uint64_t q, unsigned shift) {
  check_rational(a, q);
  const std::uint64_t g = gcd(a, q);
  const Key key{a / g, q / g, shift};
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  const auto value = stieltjes01(a / g, q / g, shift);
  std::unique_lock lock(mutex_);
  return entries_.try_emplace(key, value).first->second;
}

std::size_t StieltjesMemo::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

}  // namespace ekc
