#pragma once

#include <cmath>
#include <span>

namespace rglab {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init) : sum_(init) {}

  CompensatedSum& operator+=(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    return *this;
  }

  CompensatedSum& operator-=(double x) noexcept { return *this += -x; }

  double value() const noexcept { return sum_ + comp_; }
  explicit operator double() const noexcept { return value(); }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum s;
  for (double x : xs) s += x;
  return s.value();
}

/// log(1 + e^x) without overflow for large x or loss for very negative x.
inline double log1p_exp(double x) noexcept {
  if (x > 36.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace rglab
