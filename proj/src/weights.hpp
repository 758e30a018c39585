#pragma once

#include <string>
#include <vector>

namespace liokam {

enum class WeightFamily { Analytic, Gevrey, ExpLogPow, LogPow };

// Width function Lambda together with Gamma(x) = x Lambda'(x) / ln x.
// ExpLogPow and LogPow are taken as 0 on [0, 1]; only large arguments matter.
class WeightFunction {
 public:
  WeightFunction() = default;
  static WeightFunction make(WeightFamily f, double param = 0.0);
  static WeightFunction parse(const std::string& family, double param);

  WeightFamily family() const { return family_; }
  double param() const { return param_; }
  std::string name() const;

  double lambda(double y) const;
  double dlambda(double y) const;
  double gamma(double x) const;  // DomainError for x <= 1 + 1e-9

  // ln Gamma(e^lx) without forming e^lx; usable for arguments far beyond
  // double range. Requires lx > 0.
  double log_gamma_at_log(double lx) const;

  // e^{Lambda(2 pi |k| r)}
  double mode_weight(long k, double r) const;

 private:
  WeightFamily family_ = WeightFamily::Analytic;
  double param_ = 0.0;
};

struct HypothesisReport {
  std::string check;
  double worst_margin = 0.0;
  double worst_x = 0.0;
  double worst_y = 0.0;
  std::size_t samples = 0;
  bool pass = true;
};

// Subadditivity Lambda(x+y) <= Lambda(x)+Lambda(y) on a deterministic 2-d
// low-discrepancy grid mapped log-uniformly onto [1e-6, x_max]^2.
HypothesisReport check_h1(const WeightFunction& w, std::size_t samples, double x_max = 1e8);

// Gamma nondecreasing along an ascending grid (all points > 1), within 1e-12.
HypothesisReport check_h2_monotone(const WeightFunction& w, const std::vector<double>& grid);

}  // namespace liokam
