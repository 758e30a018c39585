#include "intervals.hpp"

#include <algorithm>

namespace liokam {

void IntervalSet::add(double lo, double hi) {
  if (!(hi >= lo)) return;
  std::vector<Interval> out;
  out.reserve(iv_.size() + 1);
  bool placed = false;
  for (const auto& I : iv_) {
    if (I.hi < lo) {
      out.push_back(I);
    } else if (I.lo > hi) {
      if (!placed) {
        out.push_back({lo, hi});
        placed = true;
      }
      out.push_back(I);
    } else {
      lo = std::min(lo, I.lo);
      hi = std::max(hi, I.hi);
    }
  }
  if (!placed) out.push_back({lo, hi});
  std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  iv_ = std::move(out);
}

IntervalSet IntervalSet::from_union(std::vector<Interval> pieces) {
  std::erase_if(pieces, [](const Interval& I) { return !(I.hi >= I.lo); });
  std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  IntervalSet r;
  for (const auto& I : pieces) {
    if (!r.iv_.empty() && I.lo <= r.iv_.back().hi)
      r.iv_.back().hi = std::max(r.iv_.back().hi, I.hi);
    else
      r.iv_.push_back(I);
  }
  return r;
}

void IntervalSet::unite(const IntervalSet& other) {
  std::vector<Interval> all = iv_;
  all.insert(all.end(), other.iv_.begin(), other.iv_.end());
  *this = from_union(std::move(all));
}

void IntervalSet::subtract(double lo, double hi) {
  if (!(hi > lo)) return;
  std::vector<Interval> out;
  out.reserve(iv_.size() + 1);
  for (const auto& I : iv_) {
    if (I.hi <= lo || I.lo >= hi) {
      out.push_back(I);
      continue;
    }
    if (I.lo <= lo) out.push_back({I.lo, lo});
    if (I.hi >= hi) out.push_back({hi, I.hi});
  }
  iv_ = std::move(out);
}

void IntervalSet::subtract(const IntervalSet& other) {
  // both lists sorted and disjoint: one sweep
  std::vector<Interval> out;
  std::size_t j = 0;
  const auto& cut = other.iv_;
  for (Interval I : iv_) {
    while (j < cut.size() && cut[j].hi <= I.lo) ++j;
    std::size_t t = j;
    bool alive = true;
    while (t < cut.size() && cut[t].lo < I.hi) {
      if (cut[t].hi > cut[t].lo) {
        if (cut[t].lo >= I.lo) out.push_back({I.lo, cut[t].lo});
        if (cut[t].hi > I.hi) {
          alive = false;
          break;
        }
        I.lo = std::max(I.lo, cut[t].hi);  // a cut ending at I.hi leaves the endpoint
      }
      ++t;
    }
    if (alive) out.push_back(I);
  }
  iv_ = std::move(out);
}

IntervalSet IntervalSet::intersect(double lo, double hi) const {
  IntervalSet r;
  for (const auto& I : iv_) {
    double a = std::max(I.lo, lo), b = std::min(I.hi, hi);
    if (b >= a) r.iv_.push_back({a, b});
  }
  return r;
}

bool IntervalSet::contains(double x) const {
  for (const auto& I : iv_)
    if (x >= I.lo && x <= I.hi) return true;
  return false;
}

double IntervalSet::measure() const {
  double m = 0.0;
  for (const auto& I : iv_) m += I.hi - I.lo;
  return m;
}

}  // namespace liokam
