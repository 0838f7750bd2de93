#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ekc {

/// A prime power n = p^k (k >= 1) together with log p = Lambda(n).
struct PrimePower {
  std::uint64_t n;
  std::uint32_t p;
  double log_p;
};

/*
  Sieved arithmetic functions on [0, bound]: smallest prime factor, von
  Mangoldt Lambda, Euler phi and Moebius mu, produced by a single linear sieve.
  Immutable after construction, so concurrent reads are safe.

  Memory is about 17 bytes per integer plus the prime-power list; bounds above
  kMaxBound are refused with CapacityError. Chebyshev sums beyond that bound
  are available through psi_streaming / psi_mod_streaming.
*/
class ArithmeticTables {
 public:
  static constexpr std::uint64_t kMaxBound = 100'000'000;

  explicit ArithmeticTables(std::uint64_t bound);

  std::uint64_t bound() const { return bound_; }

  double lambda(std::uint64_t n) const { return lambda_.at(n); }
  std::uint32_t spf(std::uint64_t n) const { return spf_.at(n); }
  std::uint32_t phi(std::uint64_t n) const { return phi_.at(n); }
  int mu(std::uint64_t n) const { return mu_.at(n); }

  std::span<const std::uint32_t> primes() const { return primes_; }

  /// All prime powers <= bound, ascending.
  std::span<const PrimePower> prime_powers() const { return prime_powers_; }

  /// Prime powers n <= x, ascending. x is clamped to the table bound only by
  /// the caller's contract; x > bound throws RangeError.
  std::span<const PrimePower> prime_powers_upto(double x) const;

 private:
  std::uint64_t bound_;
  std::vector<double> lambda_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> phi_;
  std::vector<std::int8_t> mu_;
  std::vector<std::uint32_t> primes_;
  std::vector<PrimePower> prime_powers_;
};

/// Chebyshev psi(x) = sum_{n <= x} Lambda(n), compensated, 1 <= x <= bound.
double psi(const ArithmeticTables& tables, double x);

/// psi(x; q, a) = sum_{n <= x, n = a mod q} Lambda(n), 0 <= a < q.
double psi_mod(const ArithmeticTables& tables, double x, std::uint64_t q, std::uint64_t a);

/// Segmented-sieve versions that never hold more than one 2^20 segment plus
/// the base primes up to sqrt(x).
double psi_streaming(double x);
double psi_mod_streaming(double x, std::uint64_t q, std::uint64_t a);

inline constexpr std::uint64_t kStreamingSegment = std::uint64_t{1} << 20;

/// Ascending list of positive divisors.
std::vector<std::uint64_t> divisors(std::uint64_t n);

/// Prime factorization by trial division, ascending primes with multiplicity.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

std::uint64_t euler_phi(std::uint64_t n);
int moebius(std::uint64_t n);

constexpr std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

}  // namespace ekc
