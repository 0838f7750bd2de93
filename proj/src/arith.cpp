#include "ekc/arith.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ekc/errors.hpp"
#include "ekc/summation.hpp"

namespace ekc {

ArithmeticTables::ArithmeticTables(std::uint64_t bound) : bound_(bound) {
  if (bound < 2) throw RangeError("sieve bound must be at least 2");
  if (bound > kMaxBound) {
    throw CapacityError("sieve bound " + std::to_string(bound) + " exceeds table capacity " +
                        std::to_string(kMaxBound) + "; use the streaming psi routines");
  }
  const std::size_t size = static_cast<std::size_t>(bound) + 1;
  lambda_.assign(size, 0.0);
  spf_.assign(size, 0);
  phi_.assign(size, 0);
  mu_.assign(size, 0);
  primes_.reserve(static_cast<std::size_t>(1.3 * bound / std::log(double(bound))) + 16);

  phi_[1] = 1;
  mu_[1] = 1;
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
      phi_[i] = static_cast<std::uint32_t>(i - 1);
      mu_[i] = -1;
      lambda_[i] = std::log(double(i));
    }
    for (const std::uint32_t p : primes_) {
      const std::uint64_t n = i * p;
      if (p > spf_[i] || n > bound) break;
      spf_[n] = p;
      if (p == spf_[i]) {
        phi_[n] = phi_[i] * p;
        mu_[n] = 0;
        // i is a power of p exactly when Lambda(i) = log p
        lambda_[n] = lambda_[i];
      } else {
        phi_[n] = phi_[i] * (p - 1);
        mu_[n] = static_cast<std::int8_t>(-mu_[i]);
      }
    }
  }

  for (std::uint64_t n = 2; n <= bound; ++n) {
    if (lambda_[n] != 0.0) prime_powers_.push_back({n, spf_[n], lambda_[n]});
  }
}

std::span<const PrimePower> ArithmeticTables::prime_powers_upto(double x) const {
  if (x > double(bound_)) {
    throw RangeError("x = " + std::to_string(x) + " exceeds sieve bound " + std::to_string(bound_));
  }
  const auto end = std::upper_bound(prime_powers_.begin(), prime_powers_.end(), x,
                                    [](double v, const PrimePower& pp) { return v < double(pp.n); });
  return {prime_powers_.data(), static_cast<std::size_t>(end - prime_powers_.begin())};
}

double psi(const ArithmeticTables& tables, double x) {
  if (x < 1.0) throw RangeError("psi requires x >= 1");
  CompensatedSum<double> sum;
  for (const auto& pp : tables.prime_powers_upto(x)) sum += pp.log_p;
  return sum.value();
}

double psi_mod(const ArithmeticTables& tables, double x, std::uint64_t q, std::uint64_t a) {
  if (q == 0 || a >= q) throw RangeError("psi_mod requires q >= 1 and 0 <= a < q");
  if (x < 0.0) throw RangeError("psi_mod requires x >= 0");
  if (x < 2.0) return 0.0;
  CompensatedSum<double> sum;
  for (const auto& pp : tables.prime_powers_upto(x)) {
    if (pp.n % q == a) sum += pp.log_p;
  }
  return sum.value();
}

namespace {

std::vector<std::uint32_t> small_primes(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

// Calls visit(n, log p) for every prime power n <= x: primes via a segmented
// sieve, higher powers from the base primes.
template <typename Visit>
void for_each_prime_power_streaming(std::uint64_t x, Visit&& visit) {
  if (x < 2) return;
  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(double(x)));
  while (root * root > x) --root;
  while ((root + 1) * (root + 1) <= x) ++root;
  const auto base = small_primes(std::max<std::uint64_t>(root, 2));

  std::vector<char> composite(kStreamingSegment);
  for (std::uint64_t lo = 2; lo <= x; lo += kStreamingSegment) {
    const std::uint64_t hi = std::min(x + 1, lo + kStreamingSegment);
    std::fill(composite.begin(), composite.end(), 0);
    for (const std::uint64_t p : base) {
      if (p * p >= hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t m = start; m < hi; m += p) composite[m - lo] = 1;
    }
    for (std::uint64_t n = lo; n < hi; ++n) {
      if (!composite[n - lo]) visit(n, std::log(double(n)));
    }
  }
  for (const std::uint64_t p : base) {
    if (p > root) break;
    const double lp = std::log(double(p));
    for (std::uint64_t pk = p * p; pk <= x; pk *= p) {
      visit(pk, lp);
      if (pk > x / p) break;
    }
  }
}

}  // namespace

double psi_streaming(double x) {
  if (x < 1.0) throw RangeError("psi requires x >= 1");
  CompensatedSum<double> sum;
  for_each_prime_power_streaming(static_cast<std::uint64_t>(std::floor(x)),
                                 [&](std::uint64_t, double lp) { sum += lp; });
  return sum.value();
}

double psi_mod_streaming(double x, std::uint64_t q, std::uint64_t a) {
  if (q == 0 || a >= q) throw RangeError("psi_mod requires q >= 1 and 0 <= a < q");
  if (x < 2.0) return 0.0;
  CompensatedSum<double> sum;
  for_each_prime_power_streaming(static_cast<std::uint64_t>(std::floor(x)),
                                 [&](std::uint64_t n, double lp) {
                                   if (n % q == a) sum += lp;
                                 });
  return sum.value();
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    unsigned k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    out.emplace_back(p, k);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  if (n == 0) throw RangeError("divisors of 0");
  std::vector<std::uint64_t> out{1};
  for (const auto& [p, k] : factorize(n)) {
    const std::size_t existing = out.size();
    std::uint64_t pk = 1;
    for (unsigned j = 0; j < k; ++j) {
      pk *= p;
      for (std::size_t i = 0; i < existing; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t result = n;
  for (const auto& [p, k] : factorize(n)) result = result / p * (p - 1);
  return result;
}

int moebius(std::uint64_t n) {
  int result = 1;
  for (const auto& [p, k] : factorize(n)) {
    if (k > 1) return 0;
    result = -result;
  }
  return result;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  if (mod == 1) return 0;
  unsigned __int128 result = 1;
  unsigned __int128 b = base % mod;
  while (exp > 0) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

}  // namespace ekc
