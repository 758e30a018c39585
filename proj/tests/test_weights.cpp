#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "weights.hpp"

using namespace liokam;
using std::numbers::e;

TEST_CASE("lambda values") {
  CHECK(WeightFunction::make(WeightFamily::Analytic).lambda(3.0) == 3.0);
  CHECK(WeightFunction::make(WeightFamily::Gevrey, 0.5).lambda(4.0) == doctest::Approx(2.0).epsilon(1e-15));
  // (ln e^2)^2 by hand
  CHECK(WeightFunction::make(WeightFamily::LogPow, 2.0).lambda(e * e) == doctest::Approx(4.0).epsilon(1e-14));
  // exp((ln e^4)^0.5) = e^2
  CHECK(WeightFunction::make(WeightFamily::ExpLogPow, 0.5).lambda(std::pow(e, 4)) ==
        doctest::Approx(e * e).epsilon(1e-14));
  CHECK(WeightFunction::make(WeightFamily::LogPow, 2.0).lambda(0.5) == 0.0);
  CHECK(WeightFunction::make(WeightFamily::Analytic).lambda(0.0) == 0.0);
}

TEST_CASE("gamma closed forms") {
  CHECK(WeightFunction::make(WeightFamily::Analytic).gamma(e) == doctest::Approx(e).epsilon(1e-14));
  // delta x^delta / ln x at x = e^2: 0.5 e / 2
  CHECK(WeightFunction::make(WeightFamily::Gevrey, 0.5).gamma(e * e) == doctest::Approx(e / 4).epsilon(1e-14));
  // beta (ln x)^{beta-1} / ln x = beta for beta = 2
  CHECK(WeightFunction::make(WeightFamily::LogPow, 2.0).gamma(std::pow(e, 4)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(WeightFunction::make(WeightFamily::Analytic).gamma(1.0), DomainError);
  CHECK_THROWS_AS(WeightFunction::make(WeightFamily::Analytic).gamma(0.5), DomainError);
}

TEST_CASE("analytic gamma times ln x is x") {
  const auto w = WeightFunction::make(WeightFamily::Analytic);
  for (double x : {1.5, 3.0, 10.0, 1e3, 1e9}) CHECK(w.gamma(x) * std::log(x) == doctest::Approx(x).epsilon(1e-14));
}

TEST_CASE("derivative matches central differences") {
  const WeightFunction ws[] = {WeightFunction::make(WeightFamily::Analytic), WeightFunction::make(WeightFamily::Gevrey, 0.3),
                               WeightFunction::make(WeightFamily::ExpLogPow, 0.5),
                               WeightFunction::make(WeightFamily::LogPow, 2.5)};
  for (const auto& w : ws)
    for (int i = 0; i < 100; ++i) {
      const double y = std::pow(10.0, 0.1 + 6.0 * i / 99.0);
      const double h = 1e-6 * y;
      const double fd = (w.lambda(y + h) - w.lambda(y - h)) / (2 * h);
      CHECK(w.dlambda(y) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("log_gamma_at_log agrees with gamma where both are finite") {
  const WeightFunction ws[] = {WeightFunction::make(WeightFamily::Analytic), WeightFunction::make(WeightFamily::Gevrey, 0.5),
                               WeightFunction::make(WeightFamily::ExpLogPow, 0.5),
                               WeightFunction::make(WeightFamily::LogPow, 2.0)};
  for (const auto& w : ws)
    for (double lx : {0.5, 2.0, 10.0, 50.0}) CHECK(w.log_gamma_at_log(lx) == doctest::Approx(std::log(w.gamma(std::exp(lx)))));
  // far beyond double range
  CHECK(WeightFunction::make(WeightFamily::Analytic).log_gamma_at_log(1e4) ==
        doctest::Approx(1e4 - std::log(1e4)).epsilon(1e-14));
}

TEST_CASE("lambda strictly increasing") {
  const WeightFunction ws[] = {WeightFunction::make(WeightFamily::Analytic), WeightFunction::make(WeightFamily::Gevrey, 0.5),
                               WeightFunction::make(WeightFamily::ExpLogPow, 0.5),
                               WeightFunction::make(WeightFamily::LogPow, 2.0)};
  for (const auto& w : ws) {
    double prev = w.lambda(1.01);
    for (int i = 1; i < 400; ++i) {
      const double y = 1.01 * std::pow(10.0, 8.0 * i / 399.0);
      const double v = w.lambda(y);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("H1 subadditivity") {
  const auto a = check_h1(WeightFunction::make(WeightFamily::Analytic), 1000);
  CHECK(a.pass);
  CHECK(std::fabs(a.worst_margin) <= 1e-6);  // equality up to rounding at x_max scale
  CHECK(check_h1(WeightFunction::make(WeightFamily::Gevrey, 0.5), 1000).pass);
  // (ln y)^2 is convex near 1: subadditivity fails for small arguments
  const auto lp = check_h1(WeightFunction::make(WeightFamily::LogPow, 2.0), 1000);
  CHECK_FALSE(lp.pass);
  const auto w = WeightFunction::make(WeightFamily::LogPow, 2.0);
  CHECK(w.lambda(lp.worst_x + lp.worst_y) > w.lambda(lp.worst_x) + w.lambda(lp.worst_y));
}

TEST_CASE("H2 monotonicity of gamma") {
  const auto an = WeightFunction::make(WeightFamily::Analytic);
  // x / ln x decreases below e
  CHECK_FALSE(check_h2_monotone(an, {1.5, 2.0, 2.5}).pass);
  CHECK(check_h2_monotone(an, {3.0, 4.0, 10.0, 1e6}).pass);
  CHECK_FALSE(check_h2_monotone(an, {2.0, 3.0, 4.0}).pass);
  CHECK(check_h2_monotone(WeightFunction::make(WeightFamily::Gevrey, 0.5), {10.0, 100.0, 1000.0}).pass);
  // exp((ln x)^s) s (ln x)^{s-1} / ln x decreases until ln x = 9 for s = 1/2
  const auto el = WeightFunction::make(WeightFamily::ExpLogPow, 0.5);
  CHECK(el.gamma(10.0) > el.gamma(100.0));
  CHECK_FALSE(check_h2_monotone(el, {10.0, 100.0}).pass);
  CHECK(check_h2_monotone(el, {std::exp(9.5), 1e6, 1e9, 1e12}).pass);
}

TEST_CASE("parameter ranges") {
  CHECK_THROWS_AS(WeightFunction::make(WeightFamily::Gevrey, 1.0), ConfigError);
  CHECK_THROWS_AS(WeightFunction::make(WeightFamily::Gevrey, 0.0), ConfigError);
  CHECK_THROWS_AS(WeightFunction::make(WeightFamily::ExpLogPow, 1.5), ConfigError);
  CHECK_THROWS_AS(WeightFunction::make(WeightFamily::LogPow, 1.0), ConfigError);
  CHECK_THROWS_AS(WeightFunction::parse("bogus", 0.0), ConfigError);
  CHECK(WeightFunction::parse("Gevrey", 0.5).family() == WeightFamily::Gevrey);
}

TEST_CASE("mode weight") {
  const auto w = WeightFunction::make(WeightFamily::Analytic);
  CHECK(w.mode_weight(0, 0.1) == 1.0);
  CHECK(w.mode_weight(-3, 0.1) == doctest::Approx(std::exp(2 * std::numbers::pi * 3 * 0.1)));
}
