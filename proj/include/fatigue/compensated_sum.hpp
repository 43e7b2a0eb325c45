#pragma once

#include "fatigue/types.hpp"

namespace fatigue {

/// Kahan accumulator for long damage sums. Keeps results reproducible to
/// ~1 ulp independently of how many (possibly tiny) summands are folded in.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(Scalar initial) : sum_(initial) {}

  void add(Scalar x) {
    const Scalar adjusted = x - compensation_;
    const Scalar next = sum_ + adjusted;
    compensation_ = (next - sum_) - adjusted;
    sum_ = next;
  }

  Scalar value() const { return sum_; }

 private:
  Scalar sum_ = 0.0;
  Scalar compensation_ = 0.0;
};

}  // namespace fatigue
