#include "weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "errors.hpp"
#include "lowdisc.hpp"

namespace liokam {

WeightFunction WeightFunction::make(WeightFamily f, double param) {
  switch (f) {
    case WeightFamily::Analytic:
      param = 0.0;
      break;
    case WeightFamily::Gevrey:
      if (!(param > 0.0 && param < 1.0)) throw ConfigError("weight.param: Gevrey delta must lie in (0,1)");
      break;
    case WeightFamily::ExpLogPow:
      if (!(param > 0.0 && param < 1.0)) throw ConfigError("weight.param: ExpLogPow sigma must lie in (0,1)");
      break;
    case WeightFamily::LogPow:
      if (!(param > 1.0)) throw ConfigError("weight.param: LogPow beta must exceed 1");
      break;
  }
  WeightFunction w;
  w.family_ = f;
  w.param_ = param;
  return w;
}

WeightFunction WeightFunction::parse(const std::string& family, double param) {
  std::string f = family;
  std::transform(f.begin(), f.end(), f.begin(), [](unsigned char c) { return std::tolower(c); });
  if (f == "analytic") return make(WeightFamily::Analytic);
  if (f == "gevrey") return make(WeightFamily::Gevrey, param);
  if (f == "explogpow") return make(WeightFamily::ExpLogPow, param);
  if (f == "logpow") return make(WeightFamily::LogPow, param);
  throw ConfigError("weight.family: unknown family '" + family + "'");
}

std::string WeightFunction::name() const {
  switch (family_) {
    case WeightFamily::Analytic: return "analytic";
    case WeightFamily::Gevrey: return "gevrey";
    case WeightFamily::ExpLogPow: return "explogpow";
    case WeightFamily::LogPow: return "logpow";
  }
  return "?";
}

double WeightFunction::lambda(double y) const {
  if (y <= 0.0) return 0.0;
  switch (family_) {
    case WeightFamily::Analytic: return y;
    case WeightFamily::Gevrey: return std::pow(y, param_);
    case WeightFamily::ExpLogPow: return y > 1.0 ? std::exp(std::pow(std::log(y), param_)) : 0.0;
    case WeightFamily::LogPow: return y > 1.0 ? std::pow(std::log(y), param_) : 0.0;
  }
  return 0.0;
}

double WeightFunction::dlambda(double y) const {
  if (y <= 0.0) return family_ == WeightFamily::Analytic ? 1.0 : 0.0;
  switch (family_) {
    case WeightFamily::Analytic: return 1.0;
    case WeightFamily::Gevrey: return param_ * std::pow(y, param_ - 1.0);
    case WeightFamily::ExpLogPow: {
      if (y <= 1.0) return 0.0;
      double l = std::log(y);
      return std::exp(std::pow(l, param_)) * param_ * std::pow(l, param_ - 1.0) / y;
    }
    case WeightFamily::LogPow: {
      if (y <= 1.0) return 0.0;
      double l = std::log(y);
      return param_ * std::pow(l, param_ - 1.0) / y;
    }
  }
  return 0.0;
}

double WeightFunction::gamma(double x) const {
  if (!(x > 1.0 + 1e-9)) throw DomainError("Gamma(x) is singular for x <= 1");
  double l = std::log(x);
  switch (family_) {
    case WeightFamily::Analytic: return x / l;
    case WeightFamily::Gevrey: return param_ * std::pow(x, param_) / l;
    case WeightFamily::ExpLogPow: return param_ * std::pow(l, param_ - 2.0) * std::exp(std::pow(l, param_));
    case WeightFamily::LogPow: return param_ * std::pow(l, param_ - 2.0);
  }
  return 0.0;
}

double WeightFunction::log_gamma_at_log(double lx) const {
  if (!(lx > 0.0)) throw DomainError("log Gamma needs ln x > 0");
  double ll = std::log(lx);
  switch (family_) {
    case WeightFamily::Analytic: return lx - ll;
    case WeightFamily::Gevrey: return std::log(param_) + param_ * lx - ll;
    case WeightFamily::ExpLogPow: return std::log(param_) + (param_ - 2.0) * ll + std::pow(lx, param_);
    case WeightFamily::LogPow: return std::log(param_) + (param_ - 2.0) * ll;
  }
  return 0.0;
}

double WeightFunction::mode_weight(long k, double r) const {
  if (k == 0) return 1.0;
  return std::exp(lambda(2.0 * std::numbers::pi * std::fabs(static_cast<double>(k)) * r));
}

HypothesisReport check_h1(const WeightFunction& w, std::size_t samples, double x_max) {
  if (samples < 100) throw ConfigError("check_h1 needs at least 100 samples");
  HypothesisReport rep;
  rep.check = "H1_subadditive";
  rep.samples = samples;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  const double lo = std::log(1e-6), hi = std::log(x_max);
  LowDiscrepancy seq(2);
  for (std::size_t i = 0; i < samples; ++i) {
    double u, v;
    seq.next2(u, v);
    double x = std::exp(lo + (hi - lo) * u);
    double y = std::exp(lo + (hi - lo) * v);
    double sum = w.lambda(x) + w.lambda(y);
    double margin = sum - w.lambda(x + y);
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_x = x;
      rep.worst_y = y;
    }
    if (margin < -1e-12 * std::max(1.0, sum)) rep.pass = false;
  }
  return rep;
}

HypothesisReport check_h2_monotone(const WeightFunction& w, const std::vector<double>& grid) {
  HypothesisReport rep;
  rep.check = "H2_gamma_monotone";
  rep.samples = grid.size();
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("check_h2_monotone: grid must be ascending");
    double g0 = w.gamma(grid[i - 1]), g1 = w.gamma(grid[i]);
    double margin = g1 - g0;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_x = grid[i - 1];
      rep.worst_y = grid[i];
    }
    if (margin < -1e-12 * std::max(1.0, std::fabs(g0))) rep.pass = false;
  }
  if (grid.size() < 2) rep.worst_margin = 0.0;
  return rep;
}

}  // namespace liokam
