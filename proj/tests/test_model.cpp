#include <cmath>
#include <numbers>

#include "cfrac.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "model.hpp"

using namespace liokam;
using std::numbers::pi;

namespace {

NormContext analytic(double r) {
  NormContext c;
  c.r = r;
  return c;
}

SkewMap empty_map(const BasisPtr& b, int dmax) {
  SkewMap m;
  m.basis = b;
  m.dmax = dmax;
  m.N1 = PowerFourierSeries(b, dmax);
  m.N2 = PowerFourierSeries(b, dmax);
  return m;
}

}  // namespace

TEST_CASE("zero perturbation conjugates to zero") {
  const BasisPtr b = SeriesBasis::uniform(5, 32);
  const Su11Form f = conjugate_to_su11(make_model(Preset::Zero, 0.0, b, 4, analytic(0.1)));
  CHECK(f.U.v.is_zero());
  CHECK(f.W.a.is_zero());
  CHECK(f.W.b.is_zero());
  CHECK(f.R.is_zero());
  for (std::size_t i = 0; i < b->size(); ++i) CHECK(std::abs(f.A[i] - std::polar(1.0, 2 * pi * b->lambda[i])) <= 1e-15);
}

TEST_CASE("x-independent forcing") {
  const BasisPtr b = SeriesBasis::uniform(3, 32);
  const double eps = 1e-3;
  SkewMap m = empty_map(b, 4);
  // eps (cos 2 pi theta, sin 2 pi theta)
  FourierSeries c(b, 1), s(b, 1);
  for (std::size_t i = 0; i < b->size(); ++i) {
    c.at(i, 1) = c.at(i, -1) = 0.5 * eps;
    s.at(i, 1) = cplx(0, -0.5 * eps);
    s.at(i, -1) = cplx(0, 0.5 * eps);
  }
  m.N1.coef(0, 0) = c;
  m.N2.coef(0, 0) = s;
  const Su11Form f = conjugate_to_su11(m);
  for (std::size_t i = 0; i < b->size(); ++i) {
    // (eps / sqrt 2) e^{i 2 pi theta}
    CHECK(std::abs(f.U.v.coeff(i, 1) - eps / std::sqrt(2.0)) <= 1e-18);
    CHECK(std::abs(f.U.v.coeff(i, -1)) <= 1e-18);
    CHECK(std::abs(f.U.v.coeff(i, 0)) <= 1e-18);
  }
  CHECK(f.W.a.is_zero());
  CHECK(f.W.b.is_zero());
  CHECK(f.R.is_zero());
}

TEST_CASE("linear part W is M S M^{-1}") {
  const BasisPtr b = SeriesBasis::uniform(3, 32);
  const double eps = 1e-3;
  SkewMap m = empty_map(b, 4);
  m.N1.coef(1, 0) = FourierSeries::constant(b, eps);
  m.N2.coef(0, 1) = FourierSeries::constant(b, eps);
  const Su11Form f = conjugate_to_su11(m);
  // S = eps I commutes with M, so the conjugated linear part is eps I
  for (std::size_t i = 0; i < b->size(); ++i) {
    CHECK(std::abs(f.W.a.coeff(i, 0) - eps) <= 1e-18);
    CHECK(std::abs(f.W.b.coeff(i, 0)) <= 1e-18);
  }
  // a pure rotation generator S = [[0, -e], [e, 0]] becomes diag(i e, -i e)
  SkewMap r = empty_map(b, 4);
  r.N1.coef(0, 1) = FourierSeries::constant(b, -eps);
  r.N2.coef(1, 0) = FourierSeries::constant(b, eps);
  const Su11Form g = conjugate_to_su11(r);
  for (std::size_t i = 0; i < b->size(); ++i) {
    CHECK(std::abs(g.W.a.coeff(i, 0) - cplx(0, eps)) <= 1e-18);
    CHECK(std::abs(g.W.b.coeff(i, 0)) <= 1e-18);
  }
}

TEST_CASE("presets: su11 form agrees with the map pointwise") {
  const BasisPtr b = SeriesBasis::uniform(3, 64);
  for (Preset p : {Preset::Forcing, Preset::Kick, Preset::Stress}) {
    const SkewMap map = make_model(p, 1e-3, b, 6, analytic(0.1));
    const Su11Form f = conjugate_to_su11(map);
    CHECK(f.R.low_jet_zero());
    for (std::size_t i = 0; i < b->size(); ++i)
      for (double th : {0.0, 0.31, 0.77})
        for (double x1 : {-0.2, 0.05, 0.15}) {
          const Vec2 x{x1, 0.1 - x1 / 2};
          const Vec2 y = apply_map(map, i, th, x);
          const cplx v = cplx(x.x1, x.x2) / std::sqrt(2.0);
          const cplx lhs = cplx(y.x1, y.x2) / std::sqrt(2.0);
          const cplx rhs = f.A[i] * v + evaluate(f.U.v, i, th) + evaluate(f.W.a, i, th) * v +
                           evaluate(f.W.b, i, th) * std::conj(v) + evaluate(f.R, i, th, v, std::conj(v));
          CHECK(std::abs(lhs - rhs) <= 1e-12);
        }
  }
}

TEST_CASE("forcing amplitude normalization") {
  const BasisPtr b = SeriesBasis::uniform(5, 64);
  const NormContext c = analytic(0.1);
  const Su11Form f = conjugate_to_su11(make_model(Preset::Forcing, 1e-8, b, 4, c));
  CHECK(norm_r(f.U.v, c) == doctest::Approx(0.5e-8).epsilon(1e-12));
}

TEST_CASE("area preservation checks") {
  const BasisPtr b = SeriesBasis::uniform(5, 64);
  const NormContext c = analytic(0.1);
  CHECK(check_area(make_model(Preset::Zero, 0.0, b, 4, c), 16, 5, 0.2, 1).max_defect <= 1e-10);
  CHECK(check_area(make_model(Preset::Kick, 1e-3, b, 6, c), 16, 5, 0.2, 1).max_defect <= 1e-8);
  const double eps = 1e-3;
  const double d = check_area(make_model(Preset::NonSymplectic, eps, b, 4, c), 16, 5, 0.2, 1).max_defect;
  CHECK(d == doctest::Approx(eps).epsilon(1e-3));
}

TEST_CASE("preset names and degree limits") {
  for (const char* n : {"zero", "a", "b", "c"}) CHECK_NOTHROW(parse_preset(n));
  CHECK_THROWS_AS(parse_preset("z"), ConfigError);
  const BasisPtr b = SeriesBasis::uniform(3, 16);
  CHECK_THROWS_AS(make_model(Preset::Kick, 1e-3, b, 2, analytic(0.1)), ConfigError);
}

TEST_CASE("torus reconstruction") {
  const BasisPtr b = SeriesBasis::uniform(3, 32);
  const TorusApprox t0 = reconstruct_torus({}, b);
  CHECK(t0.K1.is_zero());
  CHECK(t0.K2.is_zero());
  const cplx cval(0.01, -0.02);
  Factor f;
  f.d = FourierSeries(b, 0);
  f.P = FourierSeries::constant(b, 1.0);
  f.Q = FourierSeries(b, 0);
  f.delta = FourierSeries::constant(b, cval);
  const TorusApprox t1 = reconstruct_torus({f}, b);
  for (std::size_t i = 0; i < b->size(); ++i) {
    // K = M^{-1} (c, conj c) = sqrt 2 (Re c, Im c)
    CHECK(std::abs(t1.K1.coeff(i, 0) - std::sqrt(2.0) * cval.real()) <= 1e-17);
    CHECK(std::abs(t1.K2.coeff(i, 0) - std::sqrt(2.0) * cval.imag()) <= 1e-17);
  }
  // two factors applied right to left: X = P (delta2) + Q conj(delta2) + delta1
  Factor g = f;
  g.P = FourierSeries::constant(b, std::cosh(0.1));
  g.Q = FourierSeries::constant(b, std::sinh(0.1));
  const TorusApprox t2 = reconstruct_torus({g, f}, b);
  const cplx x = std::cosh(0.1) * cval + std::sinh(0.1) * std::conj(cval) + cval;
  for (std::size_t i = 0; i < b->size(); ++i) CHECK(std::abs(t2.X1.coeff(i, 0) - x) <= 1e-17);
  CHECK(imag_defect(t2.K1) <= 1e-18);
  CHECK(imag_defect(t2.K2) <= 1e-18);
}

TEST_CASE("determinant defects of factors") {
  const BasisPtr b = SeriesBasis::uniform(3, 64);
  FourierSeries d(b, 2);
  for (std::size_t i = 0; i < b->size(); ++i) {
    d.at(i, 1) = 0.03;
    d.at(i, -2) = cplx(0, 0.02);
  }
  const Su11Matrix E = exp_su11(Su11Matrix{FourierSeries(b, 0), d});
  Factor f{0, 0, d, E.a, E.b, FourierSeries(b, 0)};
  CHECK(factor_det_defect(f, 128) <= 1e-12);
  CHECK(composition_det_defect({f, f, f}, 128) <= 1e-12);
  Factor bad = f;
  bad.P = 1.01 * f.P;
  CHECK(factor_det_defect(bad, 128) > 1e-3);
}

TEST_CASE("residual of the trivial torus") {
  const BasisPtr b = SeriesBasis::uniform(5, 64);
  const AlphaTable at(Alpha::parse("golden"), 64);
  const SkewMap zero = make_model(Preset::Zero, 0.0, b, 4, analytic(0.1));
  const ResidualReport r0 = residual(zero, reconstruct_torus({}, b), at.phases(), 256, nullptr, 0.5);
  CHECK(r0.max == 0.0);
  CHECK_FALSE(r0.outside);
  // a constant offset c of the zero torus under a rotation: |R c - c| = 2 |sin(pi lambda)| |c|
  Factor f;
  f.d = FourierSeries(b, 0);
  f.P = FourierSeries::constant(b, 1.0);
  f.Q = FourierSeries(b, 0);
  f.delta = FourierSeries::constant(b, 1e-6);
  const ResidualReport r1 = residual(zero, reconstruct_torus({f}, b), at.phases(), 256, nullptr, 0.5);
  double want = 0.0;
  for (double l : b->lambda) want = std::max(want, 2 * std::sin(pi * l) * std::sqrt(2.0) * 1e-6);
  CHECK(r1.max == doctest::Approx(want).epsilon(1e-9));
}
