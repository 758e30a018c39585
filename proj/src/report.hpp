#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace liokam {

// One certification line: a measured quantity against the bound it must meet.
// Advisory rows (binding == false) are reported but never fail a run.
struct CheckRow {
  std::string check;
  double bound = 0.0;
  double actual = 0.0;
  bool pass = true;
  bool binding = true;
  std::string note;
};

using Report = std::vector<CheckRow>;

inline CheckRow le_row(std::string name, double actual, double bound, bool binding = true) {
  CheckRow r{std::move(name), bound, actual, actual <= bound, binding, {}};
  if (std::isnan(actual)) r.pass = false;
  return r;
}

inline bool all_binding_pass(const Report& rep) {
  for (const auto& r : rep)
    if (r.binding && !r.pass) return false;
  return true;
}

}  // namespace liokam
