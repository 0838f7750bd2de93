// ekc: Euler-Kronecker constants of cyclotomic fields from the command line.
//
// Exit codes: 0 ok, 1 self-check failure, 2 usage, 3 I/O or cache failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "ekc/arith.hpp"
#include "ekc/conductor_cache.hpp"
#include "ekc/decomposition.hpp"
#include "ekc/ek_constants.hpp"
#include "ekc/errors.hpp"
#include "ekc/experiments.hpp"
#include "ekc/parallel.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

constexpr std::uint64_t kDefaultSieve = 1'000'000;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  unsigned threads = ekc::default_worker_count();
  std::string cache_dir;
  bool no_cache = false;
  unsigned shift = ekc::kDefaultShift;

  std::uint64_t q = 0;
  std::uint64_t Q = 0;
  double x = 0.0;
  double e = 2.0;
  double epsilon = 0.5;
  std::uint64_t sieve = 0;
  std::string out;
  std::string per_m_out;
  std::string histogram_out;
  std::string format = "csv";
  std::size_t bins = 20;
  bool prime_powers = false;
  bool recompute = false;
  std::string cache_action;
};

std::string num(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

fs::path cache_dir(const RunConfig& cfg) {
  if (!cfg.cache_dir.empty()) return cfg.cache_dir;
  if (const char* env = std::getenv("EKC_CACHE_DIR"); env && *env) return env;
  return ".ekc-cache";
}

std::unique_ptr<ekc::ConductorCache> open_cache(const RunConfig& cfg) {
  if (cfg.no_cache) return std::make_unique<ekc::ConductorCache>(cfg.shift);
  return std::make_unique<ekc::ConductorCache>(cache_dir(cfg), cfg.shift);
}

void print_header(const RunConfig& cfg, const std::string& extra) {
  std::cout << "# precision " << ekc::precision_tag(cfg.shift) << ", threads " << cfg.threads << ", cache "
            << (cfg.no_cache ? std::string("off") : cache_dir(cfg).string()) << extra << '\n';
}

ekc::Format output_format(const RunConfig& cfg) {
  try {
    return ekc::parse_format(cfg.format);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void write_output(const RunConfig& cfg, const std::function<void(std::ostream&)>& writer) {
  if (cfg.out.empty()) {
    writer(std::cout);
  } else {
    ekc::emit(cfg.out, writer);
  }
}

int cmd_gamma(const RunConfig& cfg) {
  if (cfg.q < 1) throw UsageError("q must be a positive integer");
  auto cache = open_cache(cfg);
  print_header(cfg, "");
  const auto g = ekc::gamma_q(cfg.q, *cache);
  const double log_q = std::log(double(cfg.q));
  std::cout << "q = " << cfg.q << '\n'
            << "gamma_q = " << num(g.value) << '\n'
            << "err_estimate = " << num(g.err_estimate) << '\n'
            << "log_q = " << num(log_q) << '\n'
            << "ratio = " << (cfg.q >= 3 ? num(g.value / log_q) : std::string("n/a")) << '\n';
  cache->save();
  return kExitOk;
}

int cmd_decompose(const RunConfig& cfg, bool x_given) {
  if (cfg.q < 1) throw UsageError("q must be a positive integer");
  if (!(cfg.e >= 1.0)) throw UsageError("--e must be at least 1 so that x1 = q^e >= q");
  const std::uint64_t sieve =
      cfg.sieve != 0 ? cfg.sieve : std::max<std::uint64_t>(kDefaultSieve, x_given ? std::uint64_t(cfg.x) : 0);
  double x = x_given ? cfg.x : ekc::default_level(cfg.q, sieve);
  const double cut = std::pow(double(cfg.q), cfg.e);
  if (x_given) {
    if (x < 2.0) throw UsageError("--x must be at least 2");
    if (cut > x) throw UsageError("x = " + num(x) + " is below x1 = q^e = " + num(cut));
  }
  if (x > double(sieve)) throw UsageError("x exceeds the sieve bound --N " + std::to_string(sieve));
  if (double(cfg.q) > x) throw UsageError("q exceeds the level x");
  const double x1 = ekc::default_cut(cfg.q, x, cfg.e);
  const auto format = output_format(cfg);

  auto cache = open_cache(cfg);
  print_header(cfg, ", N " + std::to_string(sieve) + ", x " + num(x) + ", e " + num(cfg.e) + ", x1 " + num(x1));
  const ekc::ArithmeticTables tables(sieve);
  const auto r = ekc::decompose(cfg.q, x, x1, tables, *cache);
  cache->save();

  std::cout << "q = " << r.q << "\nx = " << num(r.x) << "\nx1 = " << num(r.x1) << "\nA = " << num(r.A)
            << "\nB = " << num(r.B) << "\ng2 = " << num(r.g2) << "\ng3 = " << num(r.g3) << "\ng11 = " << num(r.g11)
            << "\ng12 = " << num(r.g12) << "\ng13 = " << num(r.g13) << "\nB_with_trivial = " << num(r.B_with_trivial)
            << "\ngamma_q = " << num(r.gamma_q) << "\nresidual = " << num(r.residual) << '\n';
  if (!cfg.out.empty()) {
    ekc::emit(cfg.out, [&](std::ostream& os) { ekc::write_report(os, std::span(&r, 1), format); });
  }
  const bool ok = std::abs(r.residual) <= ekc::kIdentityTolerance;
  std::cout << "identity " << (ok ? "ok" : "FAILED") << " (|residual| <= " << num(ekc::kIdentityTolerance) << ")\n";
  return ok ? kExitOk : kExitCheck;
}

int cmd_scan(const RunConfig& cfg) {
  if (cfg.Q < 2) throw UsageError("Q must be at least 2");
  const auto format = output_format(cfg);
  if (cfg.bins < 1) throw UsageError("--bins must be positive");
  auto cache = open_cache(cfg);
  const auto records = ekc::scan_range(cfg.Q, *cache, cfg.threads);
  cache->save();
  write_output(cfg, [&](std::ostream& os) { ekc::write_scan(os, records, format); });

  const auto stat = ekc::theorem_statistic(records);
  const auto mean = ekc::fouvry_mean(records, cfg.Q);
  const auto hist = ekc::ratio_histogram(records, cfg.bins);
  if (!cfg.histogram_out.empty()) {
    ekc::emit(cfg.histogram_out, [&](std::ostream& os) { ekc::write_histogram(os, hist, format); });
  }
  auto& summary = cfg.out.empty() ? std::cerr : std::cout;
  const auto& modal = hist.bins[hist.modal_bin()];
  summary << "# precision " << ekc::precision_tag(cfg.shift) << ", range (" << cfg.Q << ", " << 2 * cfg.Q << "]\n"
          << "records = " << records.size() << "\nstatistic = " << num(stat.mean_abs_dev)
          << "\nnormalized_statistic = " << num(stat.normalized) << "\nfouvry_mean = " << num(mean.mean)
          << "\nfouvry_deviation = " << num(mean.deviation) << "\nfouvry_band = " << num(mean.band)
          << "\nmodal_ratio_bin = [" << num(modal.lo) << ", " << num(modal.hi) << ")\n";
  return kExitOk;
}

int cmd_probe(const RunConfig& cfg) {
  if (!(cfg.x >= 2.0)) throw UsageError("x must be at least 2");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw UsageError("--epsilon must lie in (0, 1)");
  const auto format = output_format(cfg);
  const std::uint64_t sieve = cfg.sieve != 0 ? cfg.sieve : static_cast<std::uint64_t>(cfg.x);
  if (cfg.x > double(sieve)) throw UsageError("x exceeds the sieve bound --N");
  const ekc::ArithmeticTables tables(sieve);
  const auto probe = ekc::eh_probe(cfg.x, cfg.epsilon, tables,
                                   cfg.prime_powers ? ekc::EhVariant::prime_powers : ekc::EhVariant::primes,
                                   cfg.threads);
  write_output(cfg, [&](std::ostream& os) { ekc::write_probe(os, probe, format); });
  if (!cfg.per_m_out.empty()) {
    ekc::emit(cfg.per_m_out, [&](std::ostream& os) { ekc::write_probe_per_m(os, probe, format); });
  }
  constexpr double kIdentityTol = 1e-8;
  const bool ok = probe.max_identity_residual <= kIdentityTol;
  auto& summary = cfg.out.empty() ? std::cerr : std::cout;
  summary << "x = " << num(probe.x) << "\nepsilon = " << num(probe.epsilon) << "\nm_max = " << probe.m_max
          << "\ntotal = " << num(probe.total) << "\ntotal_over_x = " << num(probe.total / probe.x)
          << "\nresidue_identity_max_residual = " << num(probe.max_identity_residual) << " ("
          << (ok ? "ok" : "FAILED") << ")\n";
  return ok ? kExitOk : kExitCheck;
}

int cmd_cache(const RunConfig& cfg) {
  const fs::path dir = cache_dir(cfg);
  const fs::path file = ekc::ConductorCache::file_for(dir, cfg.shift);
  if (cfg.cache_action == "list") {
    if (!fs::exists(file)) {
      std::cout << "no cache file at " << file.string() << '\n';
      return kExitOk;
    }
    unsigned shift = 0;
    const auto records = ekc::read_cache_file(file, &shift);
    std::cout << "# " << file.string() << ", precision " << ekc::precision_tag(shift) << ", " << records.size()
              << " conductors\nconductor,total,imag_residual,err_estimate,primitive_count\n";
    for (const auto& r : records) {
      std::cout << r.conductor << ',' << num(r.total) << ',' << num(r.imag_residual) << ',' << num(r.err_estimate)
                << ',' << r.primitive_count << '\n';
    }
    return kExitOk;
  }
  if (cfg.cache_action == "clear") {
    std::size_t removed = 0;
    if (fs::exists(dir)) {
      for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.starts_with("conductors-") && name.ends_with(".bin")) removed += fs::remove(entry.path()) ? 1 : 0;
      }
    }
    std::cout << "removed " << removed << " cache file(s) from " << dir.string() << '\n';
    return kExitOk;
  }
  // verify
  if (!fs::exists(file)) {
    std::cerr << "no cache file at " << file.string() << '\n';
    return kExitIo;
  }
  const auto report = ekc::verify_cache_file(file, cfg.recompute);
  if (!report.ok) {
    std::cerr << "cache verify failed: " << report.message << '\n';
    return kExitIo;
  }
  std::cout << "cache ok: " << report.records << " records in " << file.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Euler-Kronecker constants of cyclotomic fields"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", cfg.threads, "Worker threads (default: available cores)")->check(CLI::PositiveNumber);
  app.add_option("--cache-dir", cfg.cache_dir, "Conductor cache directory (env EKC_CACHE_DIR, default .ekc-cache)");
  app.add_flag("--no-cache", cfg.no_cache, "Keep conductor totals in memory only");
  app.add_option("--shift", cfg.shift, "Euler-Maclaurin shift; also the precision tag")->check(CLI::Range(1u, 100000u));

  auto* gamma = app.add_subcommand("gamma", "Compute gamma_q for one q");
  gamma->add_option("q", cfg.q, "Modulus q >= 1")->required();

  auto* decompose = app.add_subcommand("decompose", "Seven-term decomposition of gamma_q with identity self-check");
  decompose->add_option("q", cfg.q, "Modulus q >= 1")->required();
  auto* x_opt = decompose->add_option("--x", cfg.x, "Level x (default max(1e5, q^2) capped at N)");
  decompose->add_option("--e", cfg.e, "Cut exponent: x1 = q^e clamped to [q, x] (default 2)");
  decompose->add_option("--N", cfg.sieve, "Sieve bound (default max(1e6, x))");
  decompose->add_option("--out", cfg.out, "Also write the report to this file");
  decompose->add_option("--format", cfg.format, "csv | json | plotdata");

  auto* scan = app.add_subcommand("scan", "gamma_q for every q in (Q, 2Q] with range statistics");
  scan->add_option("Q", cfg.Q, "Range parameter Q >= 2")->required();
  scan->add_option("--out", cfg.out, "Output file (default stdout)");
  scan->add_option("--format", cfg.format, "csv | json | plotdata");
  scan->add_option("--bins", cfg.bins, "Ratio histogram bins over [0, 2)");
  scan->add_option("--histogram", cfg.histogram_out, "Write the ratio histogram to this file");

  auto* probe = app.add_subcommand("probe", "Sum over m <= x^(1-epsilon) of max |E(x; m, a)|");
  probe->add_option("x", cfg.x, "Level x")->required();
  probe->add_option("--epsilon", cfg.epsilon, "Level-of-distribution exponent in (0, 1) (default 0.5)");
  probe->add_option("--out", cfg.out, "Output file (default stdout)");
  probe->add_option("--per-m", cfg.per_m_out, "Per-modulus table output file");
  probe->add_option("--format", cfg.format, "csv | json | plotdata");
  probe->add_option("--N", cfg.sieve, "Sieve bound (default x)");
  probe->add_flag("--prime-powers", cfg.prime_powers, "Sum Lambda over prime powers instead of primes");

  auto* cache = app.add_subcommand("cache", "Inspect the conductor cache");
  cache->add_option("action", cfg.cache_action, "list | clear | verify")
      ->required()
      ->check(CLI::IsMember({"list", "clear", "verify"}));
  cache->add_flag("--recompute", cfg.recompute, "verify: recompute every record and compare bit-for-bit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gamma) return cmd_gamma(cfg);
    if (*decompose) return cmd_decompose(cfg, x_opt->count() > 0);
    if (*scan) return cmd_scan(cfg);
    if (*probe) return cmd_probe(cfg);
    if (*cache) return cmd_cache(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ekc::RangeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ekc::CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ekc::CacheError& e) {
    std::cerr << "cache error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ekc::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
