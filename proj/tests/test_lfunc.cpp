#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "ekc/arith.hpp"
#include "ekc/characters.hpp"
#include "ekc/errors.hpp"
#include "ekc/lfunc.hpp"
#include "oracles.hpp"

using namespace ekc;

namespace {

// L(1, chi) and L'(1, chi) from the Hurwitz oracle:
//   L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q).
std::pair<std::complex<double>, std::complex<double>> oracle_l(const DirichletCharacter& chi) {
  const std::uint64_t q = chi.modulus();
  std::complex<oracle::ld> l0 = 0, l1 = 0;
  for (std::uint64_t a = 1; a <= q; ++a) {
    const auto v = chi(a);
    if (v == 0.0) continue;
    const std::complex<oracle::ld> c(v.real(), v.imag());
    const auto h = oracle::hurwitz_laurent(oracle::ld(a) / q);
    l0 += c * h.gamma0;
    l1 += c * h.gamma1;
  }
  const oracle::ld lq = std::log(oracle::ld(q));
  const auto L1 = l0 / oracle::ld(q);
  const auto L1p = -lq * L1 - l1 / oracle::ld(q);
  return {{double(L1.real()), double(L1.imag())}, {double(L1p.real()), double(L1p.imag())}};
}

}  // namespace

TEST_CASE("L(1, chi_-4) = pi / 4 and L(1, chi_-3) = pi / (3 sqrt 3)") {
  const auto chi4 = build_group(4)->primitive_characters().front();
  CHECK(std::abs(l_at_one(chi4) - std::numbers::pi / 4) < 1e-14);
  const auto chi3 = build_group(3)->primitive_characters().front();
  CHECK(std::abs(l_at_one(chi3) - std::numbers::pi / (3 * std::sqrt(3.0))) < 1e-14);
}

TEST_CASE("L'(1, chi_-4) from the Hurwitz derivative") {
  // L'(1, chi_-4) = (pi/4) (gamma + 2 log 2 + 3 log pi - 4 log Gamma(1/4))
  const double pi = std::numbers::pi;
  const double expected =
      pi / 4 * (0.57721566490153286 + 2 * std::log(2.0) + 3 * std::log(pi) - 4 * std::lgamma(0.25));
  const auto chi4 = build_group(4)->primitive_characters().front();
  CHECK(std::abs(l_prime_at_one(chi4) - expected) < 1e-12);
}

TEST_CASE("L-values against the long-double Hurwitz oracle") {
  for (const std::uint64_t q : {5, 7, 8, 12, 15, 16, 21, 24, 35}) {
    const auto g = build_group(q);
    auto chars = g->characters();
    chars.erase(chars.begin());
    const auto batch = l_values(*g, chars);
    REQUIRE(batch.size() == chars.size());
    for (std::size_t i = 0; i < chars.size(); ++i) {
      const auto [L1, L1p] = oracle_l(chars[i]);
      CHECK(std::abs(batch[i].L1 - L1) < 1e-11);
      CHECK(std::abs(batch[i].L1prime - L1p) < 1e-10);
      CHECK(std::abs(batch[i].logderiv - L1p / L1) < 1e-9);
      CHECK(batch[i].err_estimate < 1e-8);
      const auto single = l_values(chars[i]);
      CHECK(single.L1 == batch[i].L1);
      CHECK(single.L1prime == batch[i].L1prime);
      CHECK(std::abs(l_at_one(chars[i]) - L1) < 1e-11);
    }
  }
}

TEST_CASE("conjugate characters give conjugate values") {
  const auto g = build_group(13);
  for (const auto& chi : g->primitive_characters()) {
    const auto a = l_values(chi);
    const auto b = l_values(chi.conj());
    CHECK(std::abs(a.logderiv - std::conj(b.logderiv)) < 1e-12);
  }
}

TEST_CASE("principal characters are rejected") {
  const auto chi0 = build_group(9)->characters().front();
  CHECK_THROWS_AS(l_at_one(chi0), RangeError);
  CHECK_THROWS_AS(l_values(chi0), RangeError);
}

TEST_CASE("Phi_chi against step-function integration") {
  const ArithmeticTables tables(3000);
  for (const std::uint64_t q : {3, 8, 10, 11}) {
    const auto g = build_group(q);
    const auto chars = g->characters();
    for (const double x : {2.0, 100.0, 2999.0}) {
      const auto batch = phi_chi(chars, x, tables);
      for (std::size_t i = 0; i < chars.size(); ++i) {
        const auto o = oracle::phi_chi(chars[i], std::uint64_t(x), tables);
        CHECK(std::abs(batch[i] - std::complex<double>(double(o.real()), double(o.imag()))) < 1e-12);
        CHECK(std::abs(phi_chi(chars[i], x, tables) - batch[i]) < 1e-15);
      }
    }
  }
  const auto chi = build_group(5)->characters()[1];
  CHECK_THROWS_AS(phi_chi(chi, 1.5, tables), RangeError);
  CHECK_THROWS_AS(phi_chi(chi, 5000.0, tables), RangeError);
}

TEST_CASE("Phi_chi approaches -L'/L(1, chi)") {
  // Phi_chi(x) -> -L'/L(1, chi) as x grows, slowly.
  const ArithmeticTables tables(2'000'000);
  const auto chi = build_group(4)->primitive_characters().front();
  const auto target = -l_values(chi).logderiv;
  const double gap_small = std::abs(phi_chi(chi, 1e4, tables) - target);
  const double gap_large = std::abs(phi_chi(chi, 2e6, tables) - target);
  CHECK(gap_large < gap_small);
  CHECK(gap_large < 0.02);
}
