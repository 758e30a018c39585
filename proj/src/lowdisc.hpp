#pragma once

#include <cmath>
#include <cstdint>

namespace liokam {

// Additive recurrence x_n = frac(x0 + n*g) with g from the generalized golden
// ratio. dim 1 uses phi, dim 2 uses the plastic number. The seed only moves
// the starting offset, so every seed gives a full-quality sequence.
class LowDiscrepancy {
 public:
  explicit LowDiscrepancy(int dim = 1, std::uint64_t seed = 0) : dim_(dim < 2 ? 1 : 2) {
    double phi = dim_ == 1 ? 1.6180339887498949 : 1.3247179572447461;
    g_[0] = 1.0 / phi;
    g_[1] = 1.0 / (phi * phi);
    double off = 0.5 + 0.6180339887498949 * static_cast<double>(seed % 1000003);
    x0_[0] = off - std::floor(off);
    off = 0.5 + 0.7548776662466927 * static_cast<double>(seed % 1000003);
    x0_[1] = off - std::floor(off);
  }

  // Coordinate c of point n, in [0,1).
  double at(std::uint64_t n, int c = 0) const {
    // n*g is formed in long double to keep the recurrence exact far out.
    long double v = static_cast<long double>(x0_[c]) +
                    static_cast<long double>(n) * static_cast<long double>(g_[c]);
    v -= std::floor(v);
    return static_cast<double>(v);
  }

  double next(int c = 0) { return at(n_++, c); }
  void next2(double& a, double& b) {
    a = at(n_, 0);
    b = at(n_, 1);
    ++n_;
  }

 private:
  int dim_;
  double g_[2]{};
  double x0_[2]{};
  std::uint64_t n_ = 1;
};

}  // namespace liokam
