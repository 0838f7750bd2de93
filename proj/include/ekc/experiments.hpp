#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ekc/arith.hpp"
#include "ekc/conductor_cache.hpp"
#include "ekc/decomposition.hpp"

namespace ekc {

struct ScanRecord {
  std::uint64_t q;
  double gamma_q;
  double log_q;
  std::optional<double> ratio;  // gamma_q / log q, omitted for q = 1, 2
  double abs_dev;               // |gamma_q - log q|
  friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

ScanRecord make_scan_record(std::uint64_t q, double gamma_q);

/// One record per q in the dyadic range (Q, 2Q], ascending.
std::vector<ScanRecord> scan_range(std::uint64_t Q, ConductorCache& cache, unsigned workers);

struct TheoremStatistic {
  std::uint64_t Q;
  double mean_abs_dev;  // (1/Q) sum |gamma_q - log q|
  double normalized;    // mean_abs_dev / log Q, NaN for Q = 1
};

/// Q is the number of records (a full dyadic range holds exactly Q of them).
/// Throws std::invalid_argument on empty input.
TheoremStatistic theorem_statistic(std::span<const ScanRecord> records);

struct FouvryMean {
  double mean;       // (1/Q) sum gamma_q
  double deviation;  // |mean - log Q|
  double band;       // 3 log log Q
};

FouvryMean fouvry_mean(std::span<const ScanRecord> records, std::uint64_t Q);

struct HistogramBin {
  double lo;
  double hi;
  std::size_t count;
};

struct RatioHistogram {
  std::vector<HistogramBin> bins;  // equal-width bins covering [0, 2)
  std::size_t underflow = 0;       // ratio < 0
  std::size_t overflow = 0;        // ratio >= 2
  std::size_t total() const;
  std::size_t modal_bin() const;
};

/// Histogram of gamma_q / log q over records that carry a ratio.
RatioHistogram ratio_histogram(std::span<const ScanRecord> records, std::size_t bins);

enum class EhVariant {
  primes,        // sum over primes p = a (m) of log p, as written in the conjecture
  prime_powers,  // psi(x; m, a)
};

struct EhModulusError {
  std::uint64_t m;
  double max_abs_error;      // max over (a, m) = 1 of |E(x; m, a)|
  double identity_residual;  // |sum_a E(x; m, a) - independent right-hand side|
};

struct EhProbeRecord {
  double x;
  double epsilon;
  std::uint64_t m_max;  // floor(x^{1 - epsilon})
  double total;         // sum over m <= m_max of max_abs_error
  EhVariant variant;
  std::vector<EhModulusError> per_m;
  double max_identity_residual;
};

/*
  E(x; m, a) = sum_{p <= x, p = a (m)} log p - psi(x) / phi(m). For every m
  the residue-sum identity

      sum_{(a, m) = 1} E(x; m, a) = sum_{p <= x, p does not divide m} log p - psi(x)

  is checked against a right-hand side built from theta(x) directly.
*/
EhProbeRecord eh_probe(double x, double epsilon, const ArithmeticTables& tables,
                       EhVariant variant = EhVariant::primes, unsigned workers = 1);

enum class Format { csv, json, plotdata };

Format parse_format(std::string_view name);
std::string_view format_name(Format format);

/// %.12g, the precision of every emitted number.
std::string format_number(double value);

void write_scan(std::ostream& out, std::span<const ScanRecord> records, Format format);
void write_histogram(std::ostream& out, const RatioHistogram& histogram, Format format);
void write_probe(std::ostream& out, const EhProbeRecord& probe, Format format);
void write_probe_per_m(std::ostream& out, const EhProbeRecord& probe, Format format);
void write_report(std::ostream& out, std::span<const DecompositionReport> reports, Format format);

/// Parses the scan CSV written by write_scan.
std::vector<ScanRecord> parse_scan_csv(std::istream& in);

/// Writes to `path` through `writer`; failures raise IoError naming the path.
void emit(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer);

}  // namespace ekc
