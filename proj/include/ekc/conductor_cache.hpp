#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "ekc/ek_constants.hpp"

namespace ekc {

/*
  Memo of conductor totals, optionally persisted to
  <dir>/conductors-<precision tag>.bin. Readers share a lock; inserts take it
  exclusively. Totals are computed outside the lock, so two threads missing
  the same conductor may both compute it; the first insert wins and the
  values are identical anyway.

  File layout (all integers and doubles little-endian, doubles IEEE-754):

    header, 16 bytes
      0   char[4]  magic "EKCC"
      4   u32      format version (1)
      8   u32      Euler-Maclaurin shift
      12  u32      record count
    record, 40 bytes each, ascending conductor
      0   u64      conductor
      8   f64      total
      16  f64      imag_residual
      24  f64      err_estimate
      32  u32      primitive character count
      36  u32      CRC-32 (zlib polynomial) of record bytes 0..35
*/
class ConductorCache {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;
  static constexpr std::size_t kHeaderBytes = 16;
  static constexpr std::size_t kRecordBytes = 40;

  explicit ConductorCache(unsigned shift = kDefaultShift);

  /// Persistent cache; loads the file for `shift` from `dir` when present.
  ConductorCache(std::filesystem::path dir, unsigned shift);

  unsigned shift() const { return shift_; }
  std::string tag() const { return precision_tag(shift_); }
  const std::optional<std::filesystem::path>& file() const { return file_; }

  std::optional<ConductorTotal> find(std::uint64_t conductor) const;

  /// Cached value, computing and inserting it on a miss.
  ConductorTotal get(std::uint64_t conductor);

  void insert(const ConductorTotal& total);

  /// Computes every missing conductor, largest first, on `workers` threads.
  void prefetch(std::span<const std::uint64_t> conductors, unsigned workers);

  std::vector<ConductorTotal> snapshot() const;
  std::size_t size() const;
  bool dirty() const;

  /// Writes the file atomically (temp file + rename). No-op without a file.
  void save();

  static std::filesystem::path file_for(const std::filesystem::path& dir, unsigned shift);

 private:
  unsigned shift_;
  std::optional<std::filesystem::path> file_;
  mutable std::shared_mutex mutex_;
  std::map<std::uint64_t, ConductorTotal> entries_;
  bool dirty_ = false;
};

void write_cache_file(const std::filesystem::path& path, unsigned shift, std::span<const ConductorTotal> records);

/// Reads and validates a cache file; throws CacheError naming the first bad
/// conductor on corruption.
std::vector<ConductorTotal> read_cache_file(const std::filesystem::path& path, unsigned* shift_out = nullptr);

struct CacheVerifyReport {
  bool ok = true;
  std::size_t records = 0;
  std::optional<std::uint64_t> bad_conductor;
  std::string message;
};

/// Structural check of a cache file; with `recompute`, also recomputes every
/// record and requires bit-identical totals.
CacheVerifyReport verify_cache_file(const std::filesystem::path& path, bool recompute = false);

}  // namespace ekc
