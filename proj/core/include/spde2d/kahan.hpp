#pragma once

#include <cmath>

namespace spde2d {

/// Neumaier-compensated accumulator. Used for the big triple sums, whose
/// terms span many orders of magnitude; also keeps the streaming and cube
/// estimator paths bit-identical since both accumulate through this type.
class KahanSum {
  public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace spde2d
