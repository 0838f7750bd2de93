#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ekc {

/// Argument outside the range covered by a table or a documented precondition.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Requested table would not fit under the documented memory bound.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A truncated expansion cannot reach the requested accuracy.
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// |L(1, chi)| fell below the non-vanishing guard.
class VanishingLValueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or corrupted conductor cache file.
class CacheError : public std::runtime_error {
 public:
  CacheError(const std::string& what, std::uint64_t conductor = 0)
      : std::runtime_error(what), conductor_(conductor) {}
  std::uint64_t conductor() const noexcept { return conductor_; }

 private:
  std::uint64_t conductor_;
};

/// File could not be read or written; the message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ekc
