// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
// Usage: ekc_acceptance <path to ekc CLI> <scratch directory>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ekc/arith.hpp"
#include "ekc/characters.hpp"
#include "ekc/conductor_cache.hpp"
#include "ekc/decomposition.hpp"
#include "ekc/ek_constants.hpp"
#include "ekc/experiments.hpp"
#include "ekc/lfunc.hpp"
#include "ekc/parallel.hpp"
#include "ekc/special_functions.hpp"

namespace fs = std::filesystem;
using namespace ekc;

namespace {

constexpr double kIdentityTol = 1e-6;
constexpr double kOrthogonalityTol = 1e-10;
constexpr double kSpecialTol = 1e-10;
constexpr double kCyclotomicTol = 1e-10;
constexpr double kDualRouteTol = 0.1;
constexpr double kResidueTol = 1e-8;
// Frozen from the reference run at Q = 512 (normalized statistic 0.18935).
constexpr double kTheoremThreshold512 = 0.20;
constexpr double kGrowthAllowance = 0.1;
constexpr double kScanBudgetSeconds = 600.0;

int failures = 0;

void report(bool pass, const std::string& id, const std::string& detail) {
  std::cout << (pass ? "PASS " : "FAIL ") << id << ": " << detail << std::endl;
  if (!pass) ++failures;
}

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void exact_identity(const ArithmeticTables& tables, ConductorCache& cache) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t cells = 0;
  for (std::uint64_t q = 2; q <= 50; ++q) {
    for (const double x : {1e3, 1e4, 1e5}) {
      // q^2 > x happens for q > 31 at x = 1e3; the cut is then the level itself.
      for (const double x1 : {double(q), std::min(double(q * q), x), x}) {
        const auto r = decompose(q, x, x1, tables, cache);
        worst = std::max(worst, std::abs(r.residual));
        ++cells;
      }
    }
  }
  const double elapsed = seconds_since(start);
  report(worst <= kIdentityTol && elapsed <= 120.0, "C1 exact identity",
         std::to_string(cells) + " cells, max |residual| " + fmt(worst) + " (tol " + fmt(kIdentityTol) + "), " +
             fmt(elapsed) + " s");
}

void sign_structure() {
  const auto start = std::chrono::steady_clock::now();
  const ArithmeticTables tables(10000);
  const double x = 1e4;
  double max_b = -INFINITY;
  double min_g3 = INFINITY;
  std::size_t positive_nontrivial = 0;
  std::uint64_t first_positive = 0;
  for (std::uint64_t q = 1; q <= 2000; ++q) {
    max_b = std::max(max_b, b_term(q, x, tables, ConductorLayers::with_trivial));
    min_g3 = std::min(min_g3, gamma3(q, x, tables));
    if (b_term(q, x, tables, ConductorLayers::nontrivial) > 0.0) {
      if (positive_nontrivial++ == 0) first_positive = q;
    }
  }
  bool inner_ok = true;
  std::size_t inner_checked = 0;
  for (std::uint64_t q = 2; q <= 500; ++q) {
    for (const auto& [p, k] : factorize(q)) {
      for (const auto d : divisors(q)) {
        const int s = inner_moebius_sum(q, p, d);
        inner_ok = inner_ok && (s == 0 || s == 1);
        ++inner_checked;
      }
    }
  }
  const double elapsed = seconds_since(start);
  report(max_b <= 0.0 && inner_ok && min_g3 >= 0.0 && elapsed <= 300.0, "C2 sign/structure",
         "max B(q) over q <= 2000 " + fmt(max_b) + ", inner sum in {0,1} for " + std::to_string(inner_checked) +
             " triples: " + (inner_ok ? "yes" : "no") + ", min g3 " + fmt(min_g3) + ", " + fmt(elapsed) + " s");
  std::cout << "INFO C2 B restricted to conductors > 1 (the identity's B) is positive for " << positive_nontrivial
            << " of 2000 moduli, first at q = " << first_positive << "; the signed bound applies to B - g3"
            << std::endl;
}

void character_group() {
  double worst = 0.0;
  for (std::uint64_t q = 1; q <= 200; ++q) {
    const auto g = build_group(q);
    const auto chars = g->characters();
    const double phi = double(g->order());
    std::vector<std::vector<std::complex<double>>> values(chars.size(), std::vector<std::complex<double>>(q));
    for (std::size_t i = 0; i < chars.size(); ++i) {
      for (std::uint64_t a = 0; a < q; ++a) values[i][a] = chars[i](a);
    }
    for (std::size_t i = 0; i < chars.size(); ++i) {
      for (std::size_t j = i; j < chars.size(); ++j) {
        std::complex<double> s = 0;
        for (std::uint64_t a = 0; a < q; ++a) s += values[i][a] * std::conj(values[j][a]);
        worst = std::max(worst, std::abs(s - (i == j ? phi : 0.0)));
      }
    }
    for (std::uint64_t a = 0; a < q; ++a) {
      if (!g->is_unit(a)) continue;
      for (std::uint64_t b = a; b < q; ++b) {
        if (!g->is_unit(b)) continue;
        std::complex<double> s = 0;
        for (std::size_t i = 0; i < chars.size(); ++i) s += values[i][a] * std::conj(values[i][b]);
        worst = std::max(worst, std::abs(s - (a == b ? phi : 0.0)));
      }
    }
  }
  bool partition = true, no_prim = true;
  for (std::uint64_t q = 1; q <= 2000; ++q) {
    std::uint64_t total = 0;
    for (const auto d : divisors(q)) total += build_group(d)->primitive_count();
    partition = partition && total == euler_phi(q);
    if (q % 4 == 2) no_prim = no_prim && build_group(q)->primitive_count() == 0;
  }
  report(worst <= kOrthogonalityTol && partition && no_prim, "C3 characters",
         "orthogonality max error " + fmt(worst) + " for q <= 200, partition of phi(q) for q <= 2000: " +
             (partition ? "yes" : "no") + ", none primitive for q = 2 mod 4: " + (no_prim ? "yes" : "no"));
}

void special_functions() {
  double digamma_gap = 0.0;
  for (std::uint64_t q = 1; q <= 50; ++q) {
    for (std::uint64_t a = 1; a <= q; ++a) {
      digamma_gap = std::max(digamma_gap, std::abs(digamma_rational(a, q) + stieltjes01(a, q).gamma0));
    }
  }
  std::mt19937_64 rng(512);
  std::uniform_int_distribution<std::uint64_t> den(1, 1000);
  double recurrence_gap = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t q = den(rng);
    const std::uint64_t a = std::uniform_int_distribution<std::uint64_t>(1, 4 * q)(rng);
    const double x = double(a) / double(q);
    const auto s = stieltjes(a, q);
    const auto t = stieltjes(a + q, q);
    recurrence_gap = std::max(recurrence_gap, std::abs(s.gamma0 - t.gamma0 - 1.0 / x));
    recurrence_gap = std::max(recurrence_gap, std::abs(s.gamma1 - t.gamma1 - std::log(x) / x));
  }
  const auto chi4 = build_group(4)->primitive_characters().front();
  const double leibniz = std::abs(l_at_one(chi4) - std::numbers::pi / 4);
  report(digamma_gap <= kSpecialTol && recurrence_gap <= kSpecialTol && leibniz <= kSpecialTol,
         "C4 special functions",
         "digamma vs gamma0 " + fmt(digamma_gap) + ", recurrences " + fmt(recurrence_gap) + ", |L(1,chi_-4) - pi/4| " +
             fmt(leibniz));
}

void cyclotomic(ConductorCache& cache) {
  const double g1 = std::abs(gamma_q(1, cache).value - kEulerGamma);
  const double g2 = std::abs(gamma_q(2, cache).value - kEulerGamma);
  double worst = 0.0;
  for (std::uint64_t m = 1; m <= 500; m += 2) {
    worst = std::max(worst, std::abs(gamma_q(2 * m, cache).value - gamma_q(m, cache).value));
  }
  report(g1 <= kCyclotomicTol && g2 <= kCyclotomicTol && worst <= kCyclotomicTol, "C5 cyclotomic structure",
         "|gamma_1 - gamma| " + fmt(g1) + ", |gamma_2 - gamma| " + fmt(g2) + ", max |gamma_2m - gamma_m| " +
             fmt(worst) + " for odd m <= 500");
}

void dual_route(const ArithmeticTables& tables, ConductorCache& cache) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string detail;
  for (const std::uint64_t q : {3, 4, 5, 7, 8, 9, 11, 12}) {
    const double gap = std::abs(gamma_q_via_primes(q, 1e7, tables) - gamma_q(q, cache).value);
    worst = std::max(worst, gap);
    detail += " " + std::to_string(q) + ":" + fmt(gap);
  }
  const double elapsed = seconds_since(start);
  report(worst <= kDualRouteTol && elapsed <= 600.0, "C6 dual route at x = 1e7",
         "max gap " + fmt(worst) + " (tol " + fmt(kDualRouteTol) + "), per q" + detail);
}

void desk_statistic(const fs::path& scratch) {
  ConductorCache cache(scratch / "cache", kDefaultShift);
  const unsigned workers = default_worker_count();
  auto normalized = [&](std::uint64_t Q) { return theorem_statistic(scan_range(Q, cache, workers)).normalized; };

  const double s128 = normalized(128);
  const auto r256 = scan_range(256, cache, workers);
  const auto r512 = scan_range(512, cache, workers);
  const double s512 = theorem_statistic(r512).normalized;
  const auto m256 = fouvry_mean(r256, 256);
  const auto m512 = fouvry_mean(r512, 512);
  cache.save();

  // Q = 1024 with the cache warmed by a prefetch, timed as a full scan.
  std::vector<std::uint64_t> conductors;
  for (std::uint64_t f = 3; f <= 2048; ++f) conductors.push_back(f);
  cache.prefetch(conductors, workers);
  cache.save();
  const auto start = std::chrono::steady_clock::now();
  const double s1024 = normalized(1024);
  const double elapsed = seconds_since(start);

  const bool pass = s512 < kTheoremThreshold512 && s1024 <= s128 + kGrowthAllowance && m256.deviation <= m256.band &&
                    m512.deviation <= m512.band && elapsed <= kScanBudgetSeconds;
  report(pass, "C7 desk statistic",
         "normalized Q=128 " + fmt(s128) + ", Q=512 " + fmt(s512) + " (< " + fmt(kTheoremThreshold512) +
             "), Q=1024 " + fmt(s1024) + "; mean deviation Q=256 " + fmt(m256.deviation) + " <= " + fmt(m256.band) +
             ", Q=512 " + fmt(m512.deviation) + " <= " + fmt(m512.band) + "; warm Q=1024 scan " + fmt(elapsed) +
             " s");
}

void eh_probe_check(const ArithmeticTables& tables, const fs::path& scratch) {
  const auto small = eh_probe(1e5, 0.5, tables);
  double residue = 0.0;
  for (const auto& e : small.per_m) {
    if (e.m <= 200) residue = std::max(residue, e.identity_residual);
  }
  std::vector<EhProbeRecord> totals;
  for (const double x : {1e5, 1e6, 1e7}) totals.push_back(eh_probe(x, 0.5, tables));
  std::ofstream out(scratch / "probe_totals.csv");
  out << "x,epsilon,m_max,total,total_over_x\n";
  for (const auto& t : totals) {
    out << format_number(t.x) << ',' << format_number(t.epsilon) << ',' << t.m_max << ',' << format_number(t.total)
        << ',' << format_number(t.total / t.x) << '\n';
  }
  const bool decreasing =
      totals[1].total / totals[1].x < totals[0].total / totals[0].x &&
      totals[2].total / totals[2].x < totals[1].total / totals[1].x;
  report(residue <= kResidueTol && decreasing && out.good(), "C8 EH probe",
         "residue identity max " + fmt(residue) + " for m <= 200 at x = 1e5; total/x " +
             fmt(totals[0].total / totals[0].x) + ", " + fmt(totals[1].total / totals[1].x) + ", " +
             fmt(totals[2].total / totals[2].x) + " (written to probe_totals.csv)");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism(const fs::path& cli, const fs::path& scratch) {
  const fs::path dir = scratch / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto run = [&](const std::string& name) {
    const std::string cmd = "\"" + cli.string() + "\" --cache-dir \"" + (dir / "cache").string() +
                            "\" scan 128 --out \"" + (dir / name).string() + "\" > /dev/null";
    return std::system(cmd.c_str());
  };
  const int cold = run("cold.csv");
  const int warm = run("warm.csv");
  const auto a = slurp(dir / "cold.csv");
  const auto b = slurp(dir / "warm.csv");
  report(cold == 0 && warm == 0 && !a.empty() && a == b, "C9 determinism",
         "scan 128 cold vs warm cache: " + std::string(a == b ? "byte-identical" : "different") + " (" +
             std::to_string(a.size()) + " bytes)");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: ekc_acceptance <ekc executable> <scratch dir>\n";
    return 2;
  }
  const fs::path cli = argv[1];
  const fs::path scratch = argv[2];
  fs::create_directories(scratch);

  ConductorCache cache;
  {
    const ArithmeticTables tables(100000);
    exact_identity(tables, cache);
  }
  sign_structure();
  character_group();
  special_functions();
  cyclotomic(cache);
  {
    const ArithmeticTables tables(10'000'000);
    dual_route(tables, cache);
    desk_statistic(scratch);
    eh_probe_check(tables, scratch);
  }
  determinism(cli, scratch);

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
