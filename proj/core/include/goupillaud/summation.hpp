#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace goupillaud {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Recursive pairwise sum; the result depends only on the values and their
/// order, never on how the work was scheduled.
inline double pairwise_sum(std::span<const double> v) noexcept {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace goupillaud
