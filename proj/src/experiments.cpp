#include "ekc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ekc/errors.hpp"
#include "ekc/parallel.hpp"
#include "ekc/summation.hpp"

namespace ekc {

ScanRecord make_scan_record(std::uint64_t q, double gamma_q) {
  ScanRecord r{q, gamma_q, std::log(double(q)), std::nullopt, 0.0};
  if (q >= 3) r.ratio = gamma_q / r.log_q;
  r.abs_dev = std::abs(gamma_q - r.log_q);
  return r;
}

std::vector<ScanRecord> scan_range(std::uint64_t Q, ConductorCache& cache, unsigned workers) {
  if (Q < 2) throw RangeError("scan_range requires Q >= 2");
  std::vector<std::uint64_t> conductors;
  for (std::uint64_t q = Q + 1; q <= 2 * Q; ++q) {
    for (const auto f : contributing_conductors(q)) conductors.push_back(f);
  }
  std::sort(conductors.begin(), conductors.end());
  conductors.erase(std::unique(conductors.begin(), conductors.end()), conductors.end());
  cache.prefetch(conductors, workers);

  std::vector<ScanRecord> out;
  out.reserve(Q);
  for (std::uint64_t q = Q + 1; q <= 2 * Q; ++q) out.push_back(make_scan_record(q, gamma_q(q, cache).value));
  return out;
}

TheoremStatistic theorem_statistic(std::span<const ScanRecord> records) {
  if (records.empty()) throw std::invalid_argument("theorem_statistic needs at least one record");
  CompensatedSum<double> sum;
  for (const auto& r : records) sum += r.abs_dev;
  const auto Q = static_cast<std::uint64_t>(records.size());
  const double mean = sum.value() / double(Q);
  const double normalized = Q > 1 ? mean / std::log(double(Q)) : std::nan("");
  return {Q, mean, normalized};
}

FouvryMean fouvry_mean(std::span<const ScanRecord> records, std::uint64_t Q) {
  if (records.empty() || Q < 2) throw std::invalid_argument("fouvry_mean needs records and Q >= 2");
  CompensatedSum<double> sum;
  for (const auto& r : records) sum += r.gamma_q;
  const double mean = sum.value() / double(records.size());
  const double logQ = std::log(double(Q));
  return {mean, std::abs(mean - logQ), 3.0 * std::log(logQ)};
}

std::size_t RatioHistogram::total() const {
  std::size_t n = underflow + overflow;
  for (const auto& b : bins) n += b.count;
  return n;
}

std::size_t RatioHistogram::modal_bin() const {
  const auto it = std::max_element(bins.begin(), bins.end(),
                                   [](const auto& a, const auto& b) { return a.count < b.count; });
  return static_cast<std::size_t>(it - bins.begin());
}

RatioHistogram ratio_histogram(std::span<const ScanRecord> records, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  constexpr double lo = 0.0, hi = 2.0;
  const double width = (hi - lo) / double(bins);
  RatioHistogram h;
  for (std::size_t i = 0; i < bins; ++i) h.bins.push_back({lo + width * double(i), lo + width * double(i + 1), 0});
  for (const auto& r : records) {
    if (!r.ratio) continue;
    const double v = *r.ratio;
    if (v < lo) {
      ++h.underflow;
    } else if (v >= hi) {
      ++h.overflow;
    } else {
      auto i = std::min(bins - 1, static_cast<std::size_t>((v - lo) / width));
      // keep bin membership consistent with the printed edges
      while (i > 0 && v < h.bins[i].lo) --i;
      while (i + 1 < bins && v >= h.bins[i].hi) ++i;
      ++h.bins[i].count;
    }
  }
  return h;
}

EhProbeRecord eh_probe(double x, double epsilon, const ArithmeticTables& tables, EhVariant variant,
                       unsigned workers) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw RangeError("epsilon must lie in (0, 1)");
  if (!(x >= 2.0)) throw RangeError("probe level must be at least 2");
  const auto powers = tables.prime_powers_upto(x);  // range-checks x

  // the summands, as values with their log weights
  std::vector<std::uint64_t> values;
  std::vector<double> weights;
  for (const auto& pp : powers) {
    if (variant == EhVariant::primes && pp.n != pp.p) continue;
    values.push_back(pp.n);
    weights.push_back(pp.log_p);
  }

  const double psi_x = psi(tables, x);
  CompensatedSum<double> theta_sum;
  for (const auto& pp : powers) {
    if (pp.n == pp.p) theta_sum += pp.log_p;
  }
  const double theta_x = theta_sum.value();

  EhProbeRecord out{x, epsilon, 0, 0.0, variant, {}, 0.0};
  out.m_max = static_cast<std::uint64_t>(std::floor(std::pow(x, 1.0 - epsilon) * (1.0 + 1e-12)));
  out.m_max = std::max<std::uint64_t>(out.m_max, 1);
  out.per_m.resize(out.m_max);

  parallel_for(out.m_max, workers, [&](std::size_t index) {
    const std::uint64_t m = index + 1;
    std::vector<CompensatedSum<double>> buckets(m);
    std::uint64_t residue = 0, previous = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      residue += values[i] - previous;
      previous = values[i];
      if (residue >= m) {
        residue -= m;
        if (residue >= m) residue %= m;
      }
      buckets[residue] += weights[i];
    }

    const double phi_m = double(euler_phi(m));
    const double expected = psi_x / phi_m;
    double worst = 0.0;
    CompensatedSum<double> lhs(-psi_x);
    for (std::uint64_t a = 0; a < m; ++a) {
      if (gcd(a, m) != 1) continue;
      const double v = buckets[a].value();
      worst = std::max(worst, std::abs(v - expected));
      lhs += v;
    }

    CompensatedSum<double> rhs;
    if (variant == EhVariant::primes) {
      rhs += theta_x;
      for (const auto& [p, k] : factorize(m)) {
        if (double(p) <= x) rhs -= std::log(double(p));
      }
    } else {
      rhs += psi_x;
      for (const auto& [p, k] : factorize(m)) {
        for (double pk = double(p); pk <= x; pk *= double(p)) rhs -= std::log(double(p));
      }
    }
    rhs -= psi_x;
    out.per_m[index] = {m, worst, std::abs(lhs.value() - rhs.value())};
  });

  CompensatedSum<double> total;
  for (const auto& e : out.per_m) {
    total += e.max_abs_error;
    out.max_identity_residual = std::max(out.max_identity_residual, e.identity_residual);
  }
  out.total = total.value();
  return out;
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  if (name == "plotdata") return Format::plotdata;
  throw std::invalid_argument("unknown format '" + std::string(name) + "' (csv, json, plotdata)");
}

std::string_view format_name(Format format) {
  switch (format) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::plotdata: return "plotdata";
  }
  return "?";
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

namespace {

const char* variant_name(EhVariant v) { return v == EhVariant::primes ? "primes" : "prime_powers"; }

void dump_json(std::ostream& out, const nlohmann::ordered_json& j) { out << j.dump(2) << '\n'; }

}  // namespace

void write_scan(std::ostream& out, std::span<const ScanRecord> records, Format format) {
  switch (format) {
    case Format::csv:
      out << "q,gamma_q,log_q,ratio,abs_dev\n";
      for (const auto& r : records) {
        out << r.q << ',' << format_number(r.gamma_q) << ',' << format_number(r.log_q) << ','
            << (r.ratio ? format_number(*r.ratio) : "") << ',' << format_number(r.abs_dev) << '\n';
      }
      break;
    case Format::json: {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["q"] = r.q;
        j["gamma_q"] = r.gamma_q;
        j["log_q"] = r.log_q;
        j["ratio"] = r.ratio ? nlohmann::ordered_json(*r.ratio) : nlohmann::ordered_json(nullptr);
        j["abs_dev"] = r.abs_dev;
        arr.push_back(std::move(j));
      }
      dump_json(out, arr);
      break;
    }
    case Format::plotdata:
      out << "# q gamma_q/log(q)\n";
      for (const auto& r : records) {
        if (r.ratio) out << r.q << ' ' << format_number(*r.ratio) << '\n';
      }
      break;
  }
}

void write_histogram(std::ostream& out, const RatioHistogram& h, Format format) {
  switch (format) {
    case Format::csv:
      out << "lo,hi,count\n";
      out << "-inf," << format_number(h.bins.front().lo) << ',' << h.underflow << '\n';
      for (const auto& b : h.bins) out << format_number(b.lo) << ',' << format_number(b.hi) << ',' << b.count << '\n';
      out << format_number(h.bins.back().hi) << ",inf," << h.overflow << '\n';
      break;
    case Format::json: {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& b : h.bins) arr.push_back({{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}});
      dump_json(out, {{"bins", arr}, {"underflow", h.underflow}, {"overflow", h.overflow}});
      break;
    }
    case Format::plotdata:
      out << "# bin_center count\n";
      out << "# underflow " << h.underflow << " overflow " << h.overflow << '\n';
      for (const auto& b : h.bins) out << format_number(0.5 * (b.lo + b.hi)) << ' ' << b.count << '\n';
      break;
  }
}

void write_probe(std::ostream& out, const EhProbeRecord& p, Format format) {
  switch (format) {
    case Format::csv:
      out << "x,epsilon,m_max,total\n";
      out << format_number(p.x) << ',' << format_number(p.epsilon) << ',' << p.m_max << ',' << format_number(p.total)
          << '\n';
      break;
    case Format::json: {
      auto arr = nlohmann::ordered_json::array();
      arr.push_back({{"x", p.x},
                     {"epsilon", p.epsilon},
                     {"m_max", p.m_max},
                     {"total", p.total},
                     {"variant", variant_name(p.variant)}});
      dump_json(out, arr);
      break;
    }
    case Format::plotdata:
      out << "# x total/x (variant " << variant_name(p.variant) << ", epsilon " << format_number(p.epsilon) << ")\n";
      out << format_number(p.x) << ' ' << format_number(p.total / p.x) << '\n';
      break;
  }
}

void write_probe_per_m(std::ostream& out, const EhProbeRecord& p, Format format) {
  switch (format) {
    case Format::csv:
      out << "m,max_abs_error\n";
      for (const auto& e : p.per_m) out << e.m << ',' << format_number(e.max_abs_error) << '\n';
      break;
    case Format::json: {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& e : p.per_m) arr.push_back({{"m", e.m}, {"max_abs_error", e.max_abs_error}});
      dump_json(out, arr);
      break;
    }
    case Format::plotdata:
      out << "# m max_abs_error\n";
      for (const auto& e : p.per_m) out << e.m << ' ' << format_number(e.max_abs_error) << '\n';
      break;
  }
}

void write_report(std::ostream& out, std::span<const DecompositionReport> reports, Format format) {
  switch (format) {
    case Format::csv:
      out << "q,x,x1,A,B,g2,g3,g11,g12,g13,B_with_trivial,gamma_q,residual\n";
      for (const auto& r : reports) {
        out << r.q;
        for (const double v : {r.x, r.x1, r.A, r.B, r.g2, r.g3, r.g11, r.g12, r.g13, r.B_with_trivial, r.gamma_q,
                               r.residual}) {
          out << ',' << format_number(v);
        }
        out << '\n';
      }
      break;
    case Format::json: {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& r : reports) {
        arr.push_back({{"q", r.q},
                       {"x", r.x},
                       {"x1", r.x1},
                       {"A", r.A},
                       {"B", r.B},
                       {"g2", r.g2},
                       {"g3", r.g3},
                       {"g11", r.g11},
                       {"g12", r.g12},
                       {"g13", r.g13},
                       {"B_with_trivial", r.B_with_trivial},
                       {"gamma_q", r.gamma_q},
                       {"residual", r.residual}});
      }
      dump_json(out, arr);
      break;
    }
    case Format::plotdata:
      out << "# q residual\n";
      for (const auto& r : reports) out << r.q << ' ' << format_number(r.residual) << '\n';
      break;
  }
}

std::vector<ScanRecord> parse_scan_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "q,gamma_q,log_q,ratio,abs_dev") {
    throw std::invalid_argument("missing scan CSV header");
  }
  std::vector<ScanRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() == 4 && line.back() == ',') fields.emplace_back();
    if (fields.size() != 5) throw std::invalid_argument("malformed scan CSV row: " + line);
    ScanRecord r{std::stoull(fields[0]), std::stod(fields[1]), std::stod(fields[2]), std::nullopt,
                 std::stod(fields[4])};
    if (!fields[3].empty()) r.ratio = std::stod(fields[3]);
    out.push_back(r);
  }
  return out;
}

void emit(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  writer(out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace ekc
