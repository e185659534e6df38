#pragma once

#include <cmath>

namespace primelab {

/// Compensated accumulator (Kahan–Babuška–Neumaier). Unlike plain Kahan it
/// stays accurate when an incoming term is larger than the running sum.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init) : sum_(init) {}

  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  // Folds another accumulator in; order-dependent, callers must merge in a
  // fixed order to stay deterministic.
  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const { return sum_ + comp_; }

  CompensatedSum& operator+=(double v) {
    add(v);
    return *this;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace primelab
