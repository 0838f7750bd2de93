#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ekc/conductor_cache.hpp"
#include "ekc/ek_constants.hpp"
#include "ekc/lfunc.hpp"
#include "ekc/special_functions.hpp"

using namespace ekc;

TEST_CASE("gamma_q for small fields") {
  ConductorCache cache;
  CHECK(gamma_q(1, cache).value == kEulerGamma);
  CHECK(gamma_q(2, cache).value == kEulerGamma);

  // Q(i): gamma + L'/L(1, chi_-4) with the closed form of L'(1, chi_-4).
  const double pi = std::numbers::pi;
  const double lprime = pi / 4 * (kEulerGamma + 2 * std::log(2.0) + 3 * std::log(pi) - 4 * std::lgamma(0.25));
  CHECK(gamma_q(4, cache).value == doctest::Approx(kEulerGamma + lprime / (pi / 4)).epsilon(1e-12));

  // Q(sqrt -3): gamma + L'/L(1, chi_-3) = 0.9454972808...
  CHECK(gamma_q(3, cache).value == doctest::Approx(0.945497280871).epsilon(1e-11));
}

TEST_CASE("gamma_{2m} = gamma_m bit for bit for odd m") {
  ConductorCache cache;
  for (std::uint64_t m = 1; m <= 199; m += 2) {
    CHECK(gamma_q(2 * m, cache).value == gamma_q(m, cache).value);
  }
}

TEST_CASE("contributing conductors") {
  CHECK(contributing_conductors(1).empty());
  CHECK(contributing_conductors(2).empty());
  CHECK(contributing_conductors(12) == std::vector<std::uint64_t>{3, 4, 12});
  CHECK(contributing_conductors(30) == std::vector<std::uint64_t>{3, 5, 15});
}

TEST_CASE("conductor totals are real and count primitive characters") {
  for (const std::uint64_t f : {3, 4, 5, 8, 9, 12, 16, 45, 97, 128}) {
    const auto t = conductor_total(f);
    CHECK(t.conductor == f);
    CHECK(t.imag_residual < 1e-11);
    CHECK(t.primitive_count == build_group(f)->primitive_count());
    CHECK(t.err_estimate < 1e-7);
    CHECK(t.shift == kDefaultShift);

    double direct = 0.0;
    const auto g = build_group(f);
    for (const auto& chi : g->primitive_characters()) direct += l_values(chi).logderiv.real();
    CHECK(t.total == doctest::Approx(direct).epsilon(1e-12));
  }
  const auto empty = conductor_total(6);
  CHECK(empty.primitive_count == 0);
  CHECK(empty.total == 0.0);
}

TEST_CASE("precision tag and shift independence") {
  CHECK(precision_tag(50) == "em50");
  const auto a = conductor_total(29, 50);
  const auto b = conductor_total(29, 80);
  CHECK(a.total == doctest::Approx(b.total).epsilon(1e-10));
}

TEST_CASE("gamma_q tends to log q on average") {
  ConductorCache cache;
  double sum = 0.0;
  for (std::uint64_t q = 65; q <= 128; ++q) sum += gamma_q(q, cache).value - std::log(double(q));
  CHECK(std::abs(sum / 64) < 2.0);
}
