#include "ekc/characters.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include "ekc/arith.hpp"
#include "ekc/errors.hpp"

namespace ekc {

std::complex<double> unit_root(std::uint64_t k, std::uint64_t n) {
  if (n == 0) throw RangeError("root of unity of order 0");
  k %= n;
  if ((4 * k) % n == 0) {
    switch (4 * k / n) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  if (2 * k > n) return std::conj(unit_root(n - k, n));
  // Fold into the first octant so sinl/cosl never range-reduce. Angles are
  // counted in units of pi / (4n).
  std::uint64_t m = 8 * k;
  const bool past_quarter = m > 2 * n;
  if (past_quarter) m -= 2 * n;
  const bool past_eighth = m > n;
  if (past_eighth) m = 2 * n - m;
  const long double angle =
      std::numbers::pi_v<long double> / 4.0L * static_cast<long double>(m) / static_cast<long double>(n);
  double c = static_cast<double>(std::cos(angle));
  double s = static_cast<double>(std::sin(angle));
  if (past_eighth) std::swap(c, s);
  if (past_quarter) return {-s, c};
  return {c, s};
}

namespace {

// Smallest g whose multiplicative order modulo the odd prime power m is phi(m).
std::uint64_t primitive_root(std::uint64_t p, std::uint64_t m) {
  const std::uint64_t phi = m / p * (p - 1);
  const auto factors = factorize(phi);
  for (std::uint64_t g = 2; g < m; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (const auto& [r, k] : factors) {
      if (pow_mod(g, phi / r, m) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root modulo " + std::to_string(m));
}

// Inverse of the CRT projection: x = local mod pp, x = 1 mod rest.
std::uint64_t crt_lift(std::uint64_t local, std::uint64_t pp, std::uint64_t q) {
  const std::uint64_t rest = q / pp;
  if (rest == 1) return local % q;
  for (std::uint64_t x = local % pp; x < q; x += pp) {
    if (x % rest == 1 % rest) return x;
  }
  throw std::logic_error("CRT lift failed");
}

unsigned p_adic_valuation(std::uint64_t n, std::uint64_t p) {
  unsigned v = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

std::shared_ptr<const CharacterGroup> CharacterGroup::build(std::uint64_t q) {
  return std::shared_ptr<const CharacterGroup>(new CharacterGroup(q));
}

CharacterGroup::CharacterGroup(std::uint64_t q) : q_(q) {
  if (q == 0) throw RangeError("modulus must be positive");

  // local discrete-log tables, one per factor: local_dlog[f][residue mod pp]
  std::vector<std::vector<std::uint32_t>> local_dlog;

  for (const auto& [p, k] : factorize(q)) {
    const std::uint64_t pp = ipow(p, k);
    if (p == 2) {
      if (k == 1) continue;
      std::vector<std::uint32_t> sign(pp, 0), five(pp, 0);
      // a = (-1)^s 5^t mod 2^k
      const std::uint64_t five_order = k >= 3 ? pp / 4 : 1;
      std::uint64_t f = 1;
      for (std::uint64_t t = 0; t < five_order; ++t) {
        sign[f] = 0;
        five[f] = static_cast<std::uint32_t>(t);
        sign[pp - f] = 1;
        five[pp - f] = static_cast<std::uint32_t>(t);
        f = f * 5 % pp;
      }
      factors_.push_back({2, k, pp, pp - 1, crt_lift(pp - 1, pp, q), 2});
      local_dlog.push_back(std::move(sign));
      if (k >= 3) {
        factors_.push_back({2, k, pp, 5, crt_lift(5, pp, q), five_order});
        local_dlog.push_back(std::move(five));
      }
    } else {
      const std::uint64_t g = primitive_root(p, pp);
      const std::uint64_t order = pp / p * (p - 1);
      std::vector<std::uint32_t> table(pp, 0);
      std::uint64_t x = 1;
      for (std::uint64_t j = 0; j < order; ++j) {
        table[x] = static_cast<std::uint32_t>(j);
        x = x * g % pp;
      }
      factors_.push_back({p, k, pp, g, crt_lift(g, pp, q), order});
      local_dlog.push_back(std::move(table));
    }
  }

  for (const auto& f : factors_) {
    order_ *= f.order;
    exponent_ = std::lcm(exponent_, f.order);
  }

  const std::size_t r = factors_.size();
  unit_.assign(q, 0);
  dlog_.assign(static_cast<std::size_t>(q) * r, 0);
  for (std::uint64_t a = 0; a < q; ++a) {
    if (gcd(a, q) != 1) continue;
    unit_[a] = 1;
    for (std::size_t i = 0; i < r; ++i) {
      dlog_[a * r + i] = local_dlog[i][a % factors_[i].prime_power];
    }
  }
}

std::span<const std::uint32_t> CharacterGroup::dlog(std::uint64_t n) const {
  n %= q_;
  if (!unit_[n]) throw RangeError("dlog of a non-unit");
  return {dlog_.data() + n * rank(), rank()};
}

DirichletCharacter CharacterGroup::character(std::span<const std::uint32_t> exponents) const {
  return DirichletCharacter(shared_from_this(), {exponents.begin(), exponents.end()});
}

namespace {

// Mixed-radix enumeration over per-factor candidate exponent lists, last
// factor fastest.
template <typename Emit>
void enumerate_exponents(const std::vector<std::vector<std::uint32_t>>& choices, Emit&& emit) {
  for (const auto& c : choices) {
    if (c.empty()) return;
  }
  std::vector<std::size_t> idx(choices.size(), 0);
  std::vector<std::uint32_t> e(choices.size());
  for (;;) {
    for (std::size_t i = 0; i < choices.size(); ++i) e[i] = choices[i][idx[i]];
    emit(e);
    std::size_t i = choices.size();
    while (i > 0) {
      --i;
      if (++idx[i] < choices[i].size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (choices.empty()) return;
  }
}

}  // namespace

std::vector<DirichletCharacter> CharacterGroup::characters() const {
  std::vector<std::vector<std::uint32_t>> choices;
  for (const auto& f : factors_) {
    std::vector<std::uint32_t> all(f.order);
    std::iota(all.begin(), all.end(), 0u);
    choices.push_back(std::move(all));
  }
  std::vector<DirichletCharacter> out;
  out.reserve(order_);
  auto self = shared_from_this();
  enumerate_exponents(choices, [&](const std::vector<std::uint32_t>& e) { out.emplace_back(self, e); });
  return out;
}

std::vector<DirichletCharacter> CharacterGroup::primitive_characters() const {
  if (q_ % 4 == 2) return {};
  std::vector<std::vector<std::uint32_t>> choices;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& f = factors_[i];
    std::vector<std::uint32_t> allowed;
    for (std::uint32_t e = 0; e < f.order; ++e) {
      bool ok;
      if (f.prime == 2) {
        const bool sign_factor = f.local_generator == f.prime_power - 1;
        if (f.exponent == 2) {
          ok = e == 1;
        } else {
          ok = sign_factor ? true : (e % 2 == 1);
        }
      } else if (f.exponent == 1) {
        ok = e != 0;
      } else {
        ok = e % f.prime != 0;
      }
      if (ok) allowed.push_back(e);
    }
    choices.push_back(std::move(allowed));
  }
  std::vector<DirichletCharacter> out;
  auto self = shared_from_this();
  enumerate_exponents(choices, [&](const std::vector<std::uint32_t>& e) { out.emplace_back(self, e); });
  return out;
}

std::uint64_t CharacterGroup::primitive_count() const {
  std::uint64_t count = 1;
  for (const auto& [p, k] : factorize(q_)) {
    if (p == 2) {
      if (k == 1) return 0;
      count *= k == 2 ? 1 : ipow(2, k - 2);
    } else if (k == 1) {
      count *= p - 2;
    } else {
      count *= ipow(p, k - 2) * (p - 1) * (p - 1);
    }
  }
  return count;
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const CharacterGroup> group,
                                       std::vector<std::uint32_t> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)) {
  const auto factors = group_->factors();
  if (exponents_.size() != factors.size()) {
    throw RangeError("exponent vector length does not match the group rank");
  }
  for (std::size_t i = 0; i < factors.size(); ++i) {
    exponents_[i] = static_cast<std::uint32_t>(exponents_[i] % factors[i].order);
    order_ = std::lcm(order_, factors[i].order / std::gcd<std::uint64_t>(exponents_[i], factors[i].order));
  }
  weights_.resize(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    // order_ is a multiple of d_i / gcd(e_i, d_i); rescale e_i / d_i to denominator order_
    const std::uint64_t d = factors[i].order;
    const std::uint64_t g = std::gcd<std::uint64_t>(exponents_[i], d);
    weights_[i] = (std::uint64_t{exponents_[i]} / g) * (order_ / (d / g)) % order_;
  }

  // conductor, one prime at a time
  std::uint64_t two_sign = 0, two_five = 0, two_five_order = 1;
  bool has_two = false;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    const std::uint64_t e = exponents_[i];
    if (f.prime == 2) {
      has_two = true;
      if (f.local_generator == f.prime_power - 1) {
        two_sign = e;
      } else {
        two_five = e;
        two_five_order = f.order;
      }
      continue;
    }
    if (e == 0) continue;
    const unsigned v = std::min(p_adic_valuation(e, f.prime), f.exponent - 1);
    conductor_ *= ipow(f.prime, f.exponent - v);
  }
  if (has_two) {
    if (two_five != 0) {
      const std::uint64_t ord = two_five_order / std::gcd(two_five, two_five_order);
      conductor_ *= 4 * ord;
    } else if (two_sign != 0) {
      conductor_ *= 4;
    }
  }

  const std::uint64_t q = group_->modulus();
  if (q > 2) parity_ = phase(q - 1) == 0 ? 1 : -1;
}

std::uint64_t DirichletCharacter::phase(std::uint64_t n) const { return phase_of(group_->dlog(n)); }

std::uint64_t DirichletCharacter::phase_of(std::span<const std::uint32_t> k) const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < k.size(); ++i) s = (s + weights_[i] * k[i]) % order_;
  return s;
}

std::optional<RootOfUnity> DirichletCharacter::exact_value(std::uint64_t n) const {
  if (!group_->is_unit(n)) return std::nullopt;
  return RootOfUnity{phase(n), order_};
}

std::complex<double> DirichletCharacter::operator()(std::uint64_t n) const {
  if (!group_->is_unit(n)) return {0.0, 0.0};
  return unit_root(phase(n), order_);
}

DirichletCharacter DirichletCharacter::conj() const {
  std::vector<std::uint32_t> neg(exponents_.size());
  const auto factors = group_->factors();
  for (std::size_t i = 0; i < neg.size(); ++i) {
    neg[i] = static_cast<std::uint32_t>((factors[i].order - exponents_[i]) % factors[i].order);
  }
  return DirichletCharacter(group_, std::move(neg));
}

}  // namespace ekc
