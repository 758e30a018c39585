#pragma once

#include <vector>

namespace liokam {

// Finite union of closed intervals, kept sorted and disjoint.
class IntervalSet {
 public:
  struct Interval {
    double lo, hi;
  };

  IntervalSet() = default;
  explicit IntervalSet(double lo, double hi) { add(lo, hi); }
  // Union of arbitrary (unsorted, overlapping) intervals in O(n log n).
  static IntervalSet from_union(std::vector<Interval> pieces);

  void add(double lo, double hi);
  void unite(const IntervalSet& other);
  // this \ (lo, hi); endpoints stay (the removed zones are open)
  void subtract(double lo, double hi);
  void subtract(const IntervalSet& other);
  IntervalSet intersect(double lo, double hi) const;

  bool contains(double x) const;
  double measure() const;
  bool empty() const { return iv_.empty(); }
  const std::vector<Interval>& intervals() const { return iv_; }

 private:
  std::vector<Interval> iv_;
};

}  // namespace liokam
