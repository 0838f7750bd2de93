#include <doctest.h>

#include <cmath>
#include <complex>
#include <set>

#include "ekc/arith.hpp"
#include "ekc/characters.hpp"
#include "ekc/errors.hpp"
#include "oracles.hpp"

using namespace ekc;

TEST_CASE("group order, exponent and discrete logs") {
  for (std::uint64_t q = 1; q <= 300; ++q) {
    const auto g = build_group(q);
    CHECK(g->order() == euler_phi(q));
    std::uint64_t product = 1;
    for (const auto& f : g->factors()) product *= f.order;
    CHECK(product == g->order());

    // the dlog map is a bijection from units onto the exponent box
    std::set<std::vector<std::uint32_t>> seen;
    for (std::uint64_t a = 1; a <= q; ++a) {
      if (!g->is_unit(a)) continue;
      const auto k = g->dlog(a);
      seen.emplace(k.begin(), k.end());
      // a = prod generator^k mod q
      std::uint64_t back = 1 % q;
      for (std::size_t i = 0; i < g->rank(); ++i) {
        back = back * pow_mod(g->factors()[i].generator, k[i], q) % q;
      }
      CHECK(back == a % q);
    }
    CHECK(seen.size() == g->order());
  }
}

TEST_CASE("characters are multiplicative and take roots of unity") {
  for (const std::uint64_t q : {5, 8, 12, 16, 45, 63, 64, 120}) {
    const auto g = build_group(q);
    for (const auto& chi : g->characters()) {
      for (std::uint64_t a = 1; a < q; ++a) {
        for (std::uint64_t b = 1; b < q; b += 3) {
          const auto lhs = chi(a * b);
          const auto rhs = chi(a) * chi(b);
          CHECK(std::abs(lhs - rhs) < 1e-13);
        }
        const auto v = chi(a);
        CHECK(std::abs(v) == doctest::Approx(g->is_unit(a) ? 1.0 : 0.0));
      }
      CHECK(std::abs(chi(q + 7) - chi(7)) == 0.0);
      const auto c = chi.conj();
      CHECK(std::abs(c(7) - std::conj(chi(7))) < 1e-15);
    }
  }
}

TEST_CASE("unit_root is exact at quarter turns and conjugate-symmetric") {
  CHECK(unit_root(0, 7) == std::complex<double>(1, 0));
  CHECK(unit_root(1, 4) == std::complex<double>(0, 1));
  CHECK(unit_root(3, 6) == std::complex<double>(-1, 0));
  for (std::uint64_t n = 1; n <= 200; ++n) {
    for (std::uint64_t k = 0; k < n; ++k) {
      const auto z = unit_root(k, n);
      CHECK(z == std::conj(unit_root(n - k, n)));
      const long double angle = 2.0L * 3.141592653589793238462643383279503L * k / n;
      CHECK(std::abs(z.real() - double(std::cos(angle))) < 2e-16);
      CHECK(std::abs(z.imag() - double(std::sin(angle))) < 2e-16);
    }
  }
}

TEST_CASE("conductor matches brute force") {
  for (std::uint64_t q = 1; q <= 200; ++q) {
    for (const auto& chi : build_group(q)->characters()) {
      CHECK(chi.conductor() == oracle::brute_conductor(chi));
    }
  }
}

TEST_CASE("primitive characters: counts and partition of phi(q)") {
  for (std::uint64_t q = 1; q <= 600; ++q) {
    const auto g = build_group(q);
    const auto prim = g->primitive_characters();
    CHECK(prim.size() == g->primitive_count());
    std::uint64_t by_scan = 0;
    for (const auto& chi : g->characters()) by_scan += chi.is_primitive();
    CHECK(by_scan == prim.size());
    if (q % 4 == 2) CHECK(prim.empty());

    std::uint64_t total = 0;
    for (const auto d : divisors(q)) total += build_group(d)->primitive_count();
    CHECK(total == euler_phi(q));
  }
}

TEST_CASE("enumeration order and parity") {
  const auto g = build_group(15);
  const auto all = g->characters();
  REQUIRE(all.size() == 8);
  CHECK(all.front().is_principal());
  for (const auto& chi : all) {
    CHECK(chi.parity() == (std::abs(chi(14) - 1.0) < 1e-12 ? 1 : -1));
  }
  // chi_{-4}
  const auto g4 = build_group(4);
  const auto m4 = g4->primitive_characters();
  REQUIRE(m4.size() == 1);
  CHECK(m4[0].is_real());
  CHECK(m4[0].parity() == -1);
  CHECK(m4[0](3) == std::complex<double>(-1, 0));
}

TEST_CASE("exact values") {
  const auto g = build_group(7);
  const auto chi = g->character(std::vector<std::uint32_t>{1});
  CHECK(chi.order() == 6);
  CHECK_FALSE(chi.exact_value(14).has_value());
  const auto v = chi.exact_value(3);
  REQUIRE(v.has_value());
  CHECK(v->n == 6);
}
