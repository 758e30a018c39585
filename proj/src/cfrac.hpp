#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "fourier.hpp"

namespace liokam {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Exact rational enclosure lo <= alpha <= hi of a rotation number in (0,1).
// Generator-backed specs (golden, silver, sqrt:n, cf:..., liouville) can be
// refined to any width; decimal and p/q inputs are exact rationals.
class Alpha {
 public:
  static Alpha parse(const std::string& spec, unsigned bits = 256);
  Alpha refined() const;  // doubles the bit budget
  bool exact() const { return lo_ == hi_; }
  bool refinable() const { return kind_ != Kind::Rational; }
  const BigRat& lo() const { return lo_; }
  const BigRat& hi() const { return hi_; }
  unsigned bits() const { return bits_; }
  const std::string& spec() const { return spec_; }
  double to_double() const;

 private:
  enum class Kind { Golden, Silver, Sqrt, Cf, Rational };
  void build();
  Kind kind_ = Kind::Rational;
  std::string spec_;
  unsigned bits_ = 256;
  unsigned long sqrt_n_ = 0;
  std::vector<BigInt> prefix_;  // partial quotients before the golden tail
  BigRat lo_, hi_;
};

struct ContinuedFraction {
  Alpha alpha;
  // a[0] = 0 (alpha in (0,1)); a[k], p[k], q[k] for k = 0..depth.
  std::vector<BigInt> a, p, q;
  int depth() const { return static_cast<int>(a.size()) - 1; }
};

// Partial quotients certified from both enclosure endpoints. Stops with
// PrecisionExhausted (carrying the reliable depth) when the endpoints
// disagree or a remainder vanishes before max_depth.
ContinuedFraction expand_once(const Alpha& alpha, int max_depth);
// Same, refining generator-backed alpha by doubling bits until max_depth is
// certified (bit budget capped at max_bits).
ContinuedFraction expand(const Alpha& alpha, int max_depth, unsigned max_bits = 1u << 20);

// Enclosure of ||k alpha||_T from the exact enclosure of alpha.
struct RatInterval {
  BigRat lo, hi;
};
RatInterval dist_to_int(const RatInterval& x);
RatInterval small_divisor_exact(const BigInt& k, const Alpha& alpha);
double small_divisor(long k, const Alpha& alpha);
double norm_T(double x);

double log_big(const BigInt& x);  // natural log of a positive big integer

// q_{i+1} <= q_i^A for i = m..n-1, and q_m^C >= q_n >= q_m^B.
bool is_cd_bridge(const ContinuedFraction& cf, int m, int n, double A, double B, double C);

struct BridgeSelection {
  double A = 2.0;
  std::vector<int> index;  // n_k, so Q_k = q[n_k], Qbar_k = q[n_k + 1]
  std::vector<BigInt> Q, Qbar;
  int certified = 0;  // conditions linking k and k+1 verified for k < certified
  bool truncated = false;
};

BridgeSelection select_bridges(const ContinuedFraction& cf, double A);

struct BridgeCheck {
  std::string name;
  int k = 0;
  bool pass = true;
};
// Re-verify every stated inequality of a selection; one row per (check, k).
std::vector<BridgeCheck> verify_bridges(const ContinuedFraction& cf, const BridgeSelection& sel);

// frac(k alpha) and e^{i 2 pi k alpha} for 0 <= k <= kmax, from exact
// numerators N_k = k * num mod den of a rational inside the enclosure.
class AlphaTable {
 public:
  AlphaTable(const Alpha& alpha, long kmax);
  double frac(long k) const;  // k may be negative
  long kmax() const { return static_cast<long>(frac_.size()) - 1; }
  const PhaseTable& phases() const { return phases_; }

 private:
  std::vector<double> frac_;
  PhaseTable phases_;
};

}  // namespace liokam
