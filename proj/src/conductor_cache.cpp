#include "ekc/conductor_cache.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <mutex>

#include "ekc/errors.hpp"
#include "ekc/parallel.hpp"

namespace ekc {

namespace {

constexpr std::array<char, 4> kMagic = {'E', 'K', 'C', 'C'};

void put_u32(unsigned char* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

void put_u64(unsigned char* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

void put_f64(unsigned char* out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint32_t get_u32(const unsigned char* in) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | in[i];
  return v;
}

std::uint64_t get_u64(const unsigned char* in) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | in[i];
  return v;
}

double get_f64(const unsigned char* in) { return std::bit_cast<double>(get_u64(in)); }

std::uint32_t crc_of(const unsigned char* data, std::size_t n) {
  return static_cast<std::uint32_t>(crc32(crc32(0L, Z_NULL, 0), data, static_cast<uInt>(n)));
}

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cannot open cache file " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

void write_cache_file(const std::filesystem::path& path, unsigned shift, std::span<const ConductorTotal> records) {
  std::vector<ConductorTotal> sorted(records.begin(), records.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.conductor < b.conductor; });

  std::vector<unsigned char> bytes(ConductorCache::kHeaderBytes + sorted.size() * ConductorCache::kRecordBytes);
  std::memcpy(bytes.data(), kMagic.data(), kMagic.size());
  put_u32(bytes.data() + 4, ConductorCache::kFormatVersion);
  put_u32(bytes.data() + 8, shift);
  put_u32(bytes.data() + 12, static_cast<std::uint32_t>(sorted.size()));
  unsigned char* r = bytes.data() + ConductorCache::kHeaderBytes;
  for (const auto& t : sorted) {
    put_u64(r, t.conductor);
    put_f64(r + 8, t.total);
    put_f64(r + 16, t.imag_residual);
    put_f64(r + 24, t.err_estimate);
    put_u32(r + 32, t.primitive_count);
    put_u32(r + 36, crc_of(r, 36));
    r += ConductorCache::kRecordBytes;
  }

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot write cache file " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CacheError("write failed for cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<ConductorTotal> read_cache_file(const std::filesystem::path& path, unsigned* shift_out) {
  const auto bytes = read_all(path);
  if (bytes.size() < ConductorCache::kHeaderBytes || std::memcmp(bytes.data(), kMagic.data(), 4) != 0) {
    throw CacheError("not a conductor cache file: " + path.string());
  }
  if (get_u32(bytes.data() + 4) != ConductorCache::kFormatVersion) {
    throw CacheError("unsupported cache format version in " + path.string());
  }
  const unsigned shift = get_u32(bytes.data() + 8);
  const std::size_t count = get_u32(bytes.data() + 12);
  if (bytes.size() != ConductorCache::kHeaderBytes + count * ConductorCache::kRecordBytes) {
    throw CacheError("cache file " + path.string() + " has " + std::to_string(bytes.size()) +
                     " bytes, expected " +
                     std::to_string(ConductorCache::kHeaderBytes + count * ConductorCache::kRecordBytes));
  }
  std::vector<ConductorTotal> out;
  out.reserve(count);
  const unsigned char* r = bytes.data() + ConductorCache::kHeaderBytes;
  std::uint64_t previous = 0;
  for (std::size_t i = 0; i < count; ++i, r += ConductorCache::kRecordBytes) {
    const std::uint64_t conductor = get_u64(r);
    if (crc_of(r, 36) != get_u32(r + 36)) {
      throw CacheError("checksum mismatch for conductor " + std::to_string(conductor), conductor);
    }
    if (conductor <= previous) {
      throw CacheError("records out of order at conductor " + std::to_string(conductor), conductor);
    }
    previous = conductor;
    out.push_back({conductor, get_f64(r + 8), get_f64(r + 16), get_f64(r + 24), get_u32(r + 32), shift});
  }
  if (shift_out) *shift_out = shift;
  return out;
}

CacheVerifyReport verify_cache_file(const std::filesystem::path& path, bool recompute) {
  CacheVerifyReport report;
  std::vector<ConductorTotal> records;
  try {
    records = read_cache_file(path);
  } catch (const CacheError& e) {
    report.ok = false;
    report.message = e.what();
    if (e.conductor() != 0) report.bad_conductor = e.conductor();
    return report;
  }
  report.records = records.size();
  if (recompute) {
    for (const auto& r : records) {
      const auto fresh = conductor_total(r.conductor, r.shift);
      if (std::bit_cast<std::uint64_t>(fresh.total) != std::bit_cast<std::uint64_t>(r.total)) {
        report.ok = false;
        report.bad_conductor = r.conductor;
        report.message = "stored total differs from recomputation for conductor " + std::to_string(r.conductor);
        return report;
      }
    }
  }
  report.message = "ok";
  return report;
}

ConductorCache::ConductorCache(unsigned shift) : shift_(shift) {}

ConductorCache::ConductorCache(std::filesystem::path dir, unsigned shift)
    : shift_(shift), file_(file_for(dir, shift)) {
  if (std::filesystem::exists(*file_)) {
    unsigned stored_shift = 0;
    for (const auto& t : read_cache_file(*file_, &stored_shift)) entries_.emplace(t.conductor, t);
    if (stored_shift != shift_) throw CacheError("cache file " + file_->string() + " has a different precision");
  }
}

std::filesystem::path ConductorCache::file_for(const std::filesystem::path& dir, unsigned shift) {
  return dir / ("conductors-" + precision_tag(shift) + ".bin");
}

std::optional<ConductorTotal> ConductorCache::find(std::uint64_t conductor) const {
  std::shared_lock lock(mutex_);
  if (auto it = entries_.find(conductor); it != entries_.end()) return it->second;
  return std::nullopt;
}

ConductorTotal ConductorCache::get(std::uint64_t conductor) {
  if (auto hit = find(conductor)) return *hit;
  const auto computed = conductor_total(conductor, shift_);
  std::unique_lock lock(mutex_);
  auto [it, inserted] = entries_.try_emplace(conductor, computed);
  if (inserted) dirty_ = true;
  return it->second;
}

void ConductorCache::insert(const ConductorTotal& total) {
  if (total.shift != shift_) throw CacheError("precision mismatch on insert", total.conductor);
  std::unique_lock lock(mutex_);
  if (entries_.try_emplace(total.conductor, total).second) dirty_ = true;
}

void ConductorCache::prefetch(std::span<const std::uint64_t> conductors, unsigned workers) {
  std::vector<std::uint64_t> missing;
  {
    std::shared_lock lock(mutex_);
    for (const auto f : conductors) {
      if (!entries_.contains(f)) missing.push_back(f);
    }
  }
  std::sort(missing.begin(), missing.end(), std::greater<>());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  parallel_for(missing.size(), workers, [&](std::size_t i) { get(missing[i]); });
}

std::vector<ConductorTotal> ConductorCache::snapshot() const {
  std::shared_lock lock(mutex_);
  std::vector<ConductorTotal> out;
  out.reserve(entries_.size());
  for (const auto& [f, t] : entries_) out.push_back(t);
  return out;
}

std::size_t ConductorCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

bool ConductorCache::dirty() const {
  std::shared_lock lock(mutex_);
  return dirty_;
}

void ConductorCache::save() {
  if (!file_) return;
  const auto records = snapshot();
  write_cache_file(*file_, shift_, records);
  std::unique_lock lock(mutex_);
  dirty_ = false;
}

}  // namespace ekc
