#pragma once

#include <cmath>
#include <complex>

namespace ekc {

/*
  Neumaier's variant of Kahan summation. Unlike plain Kahan it stays accurate
  when an incoming term is larger in magnitude than the running sum, which
  happens constantly in the alternating character sums.
*/
template <typename T>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(T initial) : sum_(initial) {}

  CompensatedSum& operator+=(T value) {
    const T t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  CompensatedSum& operator-=(T value) { return *this += -value; }

  T value() const { return sum_ + compensation_; }

 private:
  T sum_{0};
  T compensation_{0};
};

template <typename T>
class CompensatedSum<std::complex<T>> {
 public:
  CompensatedSum() = default;

  CompensatedSum& operator+=(std::complex<T> value) {
    re_ += value.real();
    im_ += value.imag();
    return *this;
  }

  CompensatedSum& operator-=(std::complex<T> value) { return *this += -value; }

  std::complex<T> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<T> re_;
  CompensatedSum<T> im_;
};

}  // namespace ekc
