#pragma once

#include <cmath>
#include <cstdint>

namespace rarewalk {

// Welford running mean/variance. Two properties matter here:
//  - feeding identical values keeps mean bit-exact and m2 at exactly zero,
//  - merge() is the Chan et al. pairwise combination, so batch statistics can
//    be merged in a fixed order independent of which thread produced them.
class RunningStats {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStats& o) {
    if (o.count_ == 0) return;
    if (count_ == 0) {
      *this = o;
      return;
    }
    const double delta = o.mean_ - mean_;
    const std::int64_t n = count_ + o.count_;
    if (delta == 0.0) {
      m2_ += o.m2_;
    } else {
      mean_ += delta * static_cast<double>(o.count_) / static_cast<double>(n);
      m2_ += o.m2_ + delta * delta * static_cast<double>(count_) *
                         static_cast<double>(o.count_) / static_cast<double>(n);
    }
    count_ = n;
  }

  std::int64_t count() const { return count_; }
  double mean() const { return mean_; }

  // Sample variance (n-1 divisor); 0 for fewer than two samples.
  double sample_variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  double sample_std_dev() const { return std::sqrt(sample_variance()); }

  // Standard error of the mean.
  double std_error() const {
    return count_ > 0 ? sample_std_dev() / std::sqrt(static_cast<double>(count_))
                      : 0.0;
  }

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace rarewalk
