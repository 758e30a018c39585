#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fourier.hpp"
#include "jet.hpp"

using namespace liokam;
using std::numbers::pi;

namespace {

NormContext ctx_of(WeightFunction w, double r, bool deriv = true) {
  NormContext c;
  c.weight = w;
  c.r = r;
  c.lambda_derivative = deriv;
  return c;
}

FourierSeries cos1(const BasisPtr& b) {
  FourierSeries f(b, 1);
  for (std::size_t i = 0; i < b->size(); ++i) f.at(i, 1) = f.at(i, -1) = 0.5;
  return f;
}

FourierSeries random_poly(const BasisPtr& b, int kmax, std::mt19937_64& g, double decay = 0.3) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FourierSeries f(b, kmax);
  for (int k = -kmax; k <= kmax; ++k) {
    const cplx x(u(g), u(g)), y(u(g), u(g));
    for (std::size_t i = 0; i < b->size(); ++i) f.at(i, k) = std::exp(-decay * std::abs(k)) * (x + y * b->lambda[i]);
  }
  return f;
}

// Direct sum of the series at theta, independent of the library's evaluator.
cplx eval_direct(const FourierSeries& f, std::size_t row, double th) {
  cplx s = 0.0;
  for (int k = -f.kmax(); k <= f.kmax(); ++k) s += f.coeff(row, k) * std::polar(1.0, 2 * pi * k * th);
  return s;
}

}  // namespace

TEST_CASE("norm_r examples") {
  const BasisPtr b = SeriesBasis::uniform(5, 64);
  const auto an = WeightFunction::make(WeightFamily::Analytic);
  const auto gv = WeightFunction::make(WeightFamily::Gevrey, 0.5);
  CHECK(norm_r(FourierSeries::constant(b, 5.0), ctx_of(an, 0.3)) == doctest::Approx(5.0));
  CHECK(norm_r(FourierSeries::constant(b, 5.0), ctx_of(gv, 0.3)) == doctest::Approx(5.0));
  CHECK(norm_r(cos1(b), ctx_of(an, 0.1)) == doctest::Approx(std::exp(0.2 * pi)).epsilon(1e-14));
  CHECK(norm_r(cos1(b), ctx_of(an, 0.1)) == doctest::Approx(1.87446).epsilon(1e-5));
  CHECK(norm_r(cos1(b), ctx_of(gv, 0.1)) == doctest::Approx(std::exp(std::sqrt(0.2 * pi))).epsilon(1e-14));
  CHECK(norm_r(cos1(b), ctx_of(gv, 0.1)) == doctest::Approx(2.2093).epsilon(1e-4));
  CHECK(norm_r(FourierSeries(b, 0), ctx_of(an, 0.1)) == 0.0);
}

TEST_CASE("norm_r includes the lambda derivative") {
  const BasisPtr b = SeriesBasis::uniform(9, 16);
  std::vector<cplx> v;
  for (double l : b->lambda) v.push_back(3.0 * l);  // |f| + |f'| peaks at 3 * 0.75 + 3
  const FourierSeries f = FourierSeries::per_lambda(b, v);
  CHECK(norm_r(f, ctx_of(WeightFunction{}, 0.1)) == doctest::Approx(5.25).epsilon(1e-12));
  CHECK(norm_r(f, ctx_of(WeightFunction{}, 0.1, false)) == doctest::Approx(2.25).epsilon(1e-12));
}

TEST_CASE("norm_rs examples") {
  const BasisPtr b = SeriesBasis::uniform(3, 16);
  const NormContext c = ctx_of(WeightFunction{}, 0.1);
  PowerFourierSeries p(b, 4);
  CHECK(norm_rs(p, c, 0.5) == 0.0);
  p.coef(2, 0) = FourierSeries::constant(b, 1.0);
  CHECK(norm_rs(p, c, 0.5) == doctest::Approx(0.25));
  PowerFourierSeries q(b, 4);
  q.coef(1, 1) = FourierSeries::constant(b, 1.0);
  q.coef(2, 1) = FourierSeries::constant(b, 1.0);
  CHECK(norm_rs(q, c, 0.1) == doctest::Approx(0.011).epsilon(1e-14));
}

TEST_CASE("truncate and project_tail partition f") {
  const BasisPtr b = SeriesBasis::uniform(3, 32);
  FourierSeries f = FourierSeries::constant(b, 1.0) + FourierSeries::mode(b, 3, 1.0);
  const FourierSeries t = truncate(f, 2), r = project_tail(f, 2);
  for (std::size_t i = 0; i < b->size(); ++i) {
    CHECK(t.coeff(i, 0) == cplx(1.0));
    CHECK(t.coeff(i, 3) == cplx(0.0));
    CHECK(r.coeff(i, 0) == cplx(0.0));
    CHECK(r.coeff(i, 3) == cplx(1.0));
  }
  std::mt19937_64 g(11);
  const FourierSeries h = random_poly(b, 10, g);
  const FourierSeries t1 = truncate(h, 1);
  for (std::size_t i = 0; i < b->size(); ++i)
    for (int k = -10; k <= 10; ++k) CHECK(t1.coeff(i, k) == (k == 0 ? h.coeff(i, 0) : cplx(0.0)));
  const FourierSeries t5 = truncate(h, 5), r5 = project_tail(h, 5);
  for (std::size_t i = 0; i < b->size(); ++i)
    for (int k = -10; k <= 10; ++k) {
      CHECK(t5.coeff(i, k) + r5.coeff(i, k) == h.coeff(i, k));
      CHECK((std::abs(k) < 5 ? r5.coeff(i, k) : t5.coeff(i, k)) == cplx(0.0));
    }
}

TEST_CASE("average against quadrature") {
  const BasisPtr b = SeriesBasis::uniform(5, 64);
  for (cplx a : average(cos1(b))) CHECK(std::abs(a) == 0.0);
  for (cplx a : average(FourierSeries::constant(b, 3.0))) CHECK(a == cplx(3.0));
  std::mt19937_64 g(3);
  const FourierSeries f = random_poly(b, 20, g);
  const auto avg = average(f);
  for (std::size_t i = 0; i < b->size(); ++i) {
    cplx s = 0.0;
    for (int t = 0; t < 4096; ++t) s += eval_direct(f, i, t / 4096.0);
    CHECK(std::abs(s / 4096.0 - avg[i]) <= 1e-12);
  }
}

TEST_CASE("multiply against pointwise products") {
  const BasisPtr b = SeriesBasis::uniform(5, 128);
  const FourierSeries one = FourierSeries::constant(b, 1.0);
  std::mt19937_64 g(5);
  const FourierSeries f = random_poly(b, 24, g), h = random_poly(b, 17, g);
  const FourierSeries f1 = multiply(f, one);
  for (std::size_t i = 0; i < b->size(); ++i)
    for (int k = -24; k <= 24; ++k) CHECK(std::abs(f1.coeff(i, k) - f.coeff(i, k)) <= 1e-15);
  const FourierSeries u = multiply(FourierSeries::mode(b, 1, 1.0), FourierSeries::mode(b, -1, 1.0));
  for (std::size_t i = 0; i < b->size(); ++i) {
    CHECK(std::abs(u.coeff(i, 0) - 1.0) <= 1e-15);
    CHECK(u.kmax() <= 1);
  }
  // product on a 4096-point grid, re-extracted by the discrete transform
  const FourierSeries p = multiply(f, h);
  const int n = 4096;
  for (std::size_t i = 0; i < b->size(); ++i) {
    std::vector<cplx> vals(n);
    for (int t = 0; t < n; ++t) vals[t] = eval_direct(f, i, double(t) / n) * eval_direct(h, i, double(t) / n);
    for (int k = -41; k <= 41; ++k) {
      cplx c = 0.0;
      for (int t = 0; t < n; ++t) c += vals[t] * std::polar(1.0, -2 * pi * k * double(t) / n);
      CHECK(std::abs(c / double(n) - p.coeff(i, k)) <= 1e-10);
    }
  }
}

TEST_CASE("Banach algebra on random pairs") {
  const BasisPtr b = SeriesBasis::uniform(5, 64);
  std::mt19937_64 g(17);
  for (const auto& w : {WeightFunction::make(WeightFamily::Analytic), WeightFunction::make(WeightFamily::Gevrey, 0.5)}) {
    const NormContext c = ctx_of(w, 0.1);
    for (int i = 0; i < 30; ++i) {
      const FourierSeries f = random_poly(b, 1 + i % 12, g), h = random_poly(b, 1 + (5 * i) % 12, g);
      CHECK(norm_r(multiply(f, h), c) <= norm_r(f, c) * norm_r(h, c) * (1 + 1e-10));
    }
  }
}

TEST_CASE("exp_i") {
  const BasisPtr b = SeriesBasis::uniform(5, 128);
  const FourierSeries e0 = exp_i(FourierSeries(b, 0), 1);
  for (std::size_t i = 0; i < b->size(); ++i) CHECK(std::abs(e0.coeff(i, 0) - 1.0) <= 1e-15);
  for (int l : {1, 2}) {
    const FourierSeries ec = exp_i(FourierSeries::constant(b, 0.13), l);
    for (std::size_t i = 0; i < b->size(); ++i)
      CHECK(std::abs(ec.coeff(i, 0) - std::polar(1.0, 2 * pi * l * 0.13)) <= 1e-14);
  }
  const FourierSeries B = 0.01 * cos1(b);
  const FourierSeries E = exp_i(B, 1);
  for (std::size_t i = 0; i < b->size(); ++i)
    for (int t = 0; t < 4096; t += 7) {
      const double th = t / 4096.0;
      CHECK(std::abs(eval_direct(E, i, th) - std::polar(1.0, 2 * pi * 0.01 * std::cos(2 * pi * th))) <= 1e-10);
    }
  const FourierSeries one = multiply(E, exp_i(-B, 1));
  for (std::size_t i = 0; i < b->size(); ++i)
    for (int k = -one.kmax(); k <= one.kmax(); ++k) CHECK(std::abs(one.coeff(i, k) - (k == 0 ? 1.0 : 0.0)) <= 1e-14);
}

TEST_CASE("exp_su11") {
  const BasisPtr b = SeriesBasis::uniform(3, 64);
  Su11Matrix Z{FourierSeries(b, 0), FourierSeries(b, 0)};
  const Su11Matrix I = exp_su11(Z);
  for (std::size_t i = 0; i < b->size(); ++i) {
    CHECK(std::abs(I.a.coeff(i, 0) - 1.0) <= 1e-15);
    CHECK(std::abs(I.b.coeff(i, 0)) <= 1e-15);
  }
  const double c = 0.3;
  const Su11Matrix E = exp_su11(Su11Matrix{FourierSeries(b, 0), FourierSeries::constant(b, c)});
  for (std::size_t i = 0; i < b->size(); ++i) {
    CHECK(std::abs(E.a.coeff(i, 0) - std::cosh(c)) <= 1e-14);
    CHECK(std::abs(E.b.coeff(i, 0) - std::sinh(c)) <= 1e-14);
  }
  std::mt19937_64 g(23);
  const NormContext nc = ctx_of(WeightFunction{}, 0.1);
  for (int trial = 0; trial < 5; ++trial) {
    FourierSeries d = random_poly(b, 4, g);
    d = (0.1 / norm_r(d, nc)) * d;
    const Su11Matrix M = exp_su11(Su11Matrix{FourierSeries(b, 0), d});
    const Su11Matrix parts = exp_su11_parts(Su11Matrix{FourierSeries(b, 0), d});
    for (std::size_t i = 0; i < b->size(); ++i)
      for (int t = 0; t < 256; ++t) {
        const double th = t / 256.0;
        const cplx P = eval_direct(M.a, i, th), Q = eval_direct(M.b, i, th);
        CHECK(std::abs(std::norm(P) - std::norm(Q) - 1.0) <= 1e-12);
        // 2x2 exponential of [[0, d], [conj d, 0]] in closed form
        const cplx dv = eval_direct(d, i, th);
        const double m = std::abs(dv);
        CHECK(std::abs(P - std::cosh(m)) <= 1e-14);
        CHECK(std::abs(Q - std::sinh(m) / m * dv) <= 1e-14);
        CHECK(std::abs(eval_direct(parts.a, i, th) - (std::cosh(m) - 1.0)) <= 1e-15);
        CHECK(std::abs(eval_direct(parts.b, i, th) - (std::sinh(m) / m - 1.0) * dv) <= 1e-15);
      }
  }
}

TEST_CASE("analytic norm dominates where the weight is below the identity") {
  const BasisPtr b = SeriesBasis::uniform(5, 64);
  const auto gv = WeightFunction::make(WeightFamily::Gevrey, 0.5);
  CHECK(analytic_norm(FourierSeries::constant(b, 1.0), ctx_of(gv, 0.1)) == doctest::Approx(1.0));
  CHECK(analytic_norm(cos1(b), ctx_of(gv, 0.1)) == doctest::Approx(std::exp(0.2 * pi)).epsilon(1e-14));
  // y^delta > y for y < 1: the Gevrey norm of cos at r = 0.1 exceeds the analytic one
  CHECK(norm_r(cos1(b), ctx_of(gv, 0.1)) > analytic_norm(cos1(b), ctx_of(gv, 0.1)));
  std::mt19937_64 g(29);
  for (int i = 0; i < 100; ++i) {
    const double r = 0.02 + 0.002 * i;
    const int k0 = static_cast<int>(std::ceil(1.0 / (2 * pi * r)));
    FourierSeries f = random_poly(b, k0 + 1 + i % 20, g, 0.1);
    f = truncate(f, 1) + project_tail(f, k0);  // keep modes with 2 pi |k| r >= 1
    const NormContext c = ctx_of(gv, r);
    CHECK(norm_r(f, c) <= analytic_norm(f, c) * (1 + 1e-15));
  }
}

TEST_CASE("conj_fn and shift") {
  const BasisPtr b = SeriesBasis::uniform(3, 64);
  std::mt19937_64 g(31);
  const FourierSeries f = random_poly(b, 6, g);
  const FourierSeries fc = conj_fn(f);
  const double a = 0.381966;
  std::vector<cplx> ph;
  for (int k = 0; k <= 64; ++k) ph.push_back(std::polar(1.0, 2 * pi * k * a));
  const FourierSeries fs = shift(f, PhaseTable(ph));
  for (std::size_t i = 0; i < b->size(); ++i)
    for (double th : {0.0, 0.17, 0.5, 0.93}) {
      CHECK(std::abs(eval_direct(fc, i, th) - std::conj(eval_direct(f, i, th))) <= 1e-14);
      CHECK(std::abs(eval_direct(fs, i, th) - eval_direct(f, i, th + a)) <= 1e-13);
    }
  // real functions have imag_defect zero
  CHECK(imag_defect(f + conj_fn(f)) <= 1e-16);
  CHECK(imag_defect(cplx(0, 1) * FourierSeries::constant(b, 1.0)) == doctest::Approx(1.0));
}

TEST_CASE("evaluate and sampling round trip") {
  const BasisPtr b = SeriesBasis::uniform(3, 64);
  std::mt19937_64 g(37);
  const FourierSeries f = random_poly(b, 12, g);
  for (std::size_t i = 0; i < b->size(); ++i) {
    const auto s = sample_row(f, i, 64);
    for (int t = 0; t < 64; ++t) CHECK(std::abs(s[t] - eval_direct(f, i, t / 64.0)) <= 1e-13);
    CHECK(std::abs(evaluate(f, i, 0.3) - eval_direct(f, i, 0.3)) <= 1e-13);
    FourierSeries h(b, 12);
    set_row_from_samples(h, i, s);
    for (int k = -12; k <= 12; ++k) CHECK(std::abs(h.coeff(i, k) - f.coeff(i, k)) <= 1e-14);
  }
}

TEST_CASE("dump and load round trip") {
  const BasisPtr b = SeriesBasis::uniform(4, 64);
  std::mt19937_64 g(41);
  const FourierSeries f = random_poly(b, 9, g);
  std::stringstream ss;
  dump(f, ss);
  const FourierSeries h = load(b, ss);
  REQUIRE(h.kmax() == f.kmax());
  for (std::size_t i = 0; i < b->size(); ++i)
    for (int k = -9; k <= 9; ++k) CHECK(h.coeff(i, k) == f.coeff(i, k));
}

TEST_CASE("reciprocal") {
  const BasisPtr b = SeriesBasis::uniform(3, 128);
  const FourierSeries f = add_constant(0.05 * cos1(b), cplx(1.0, 0.2));
  const FourierSeries r = reciprocal(f);
  for (std::size_t i = 0; i < b->size(); ++i)
    for (double th : {0.0, 0.25, 0.6}) CHECK(std::abs(eval_direct(r, i, th) * eval_direct(f, i, th) - 1.0) <= 1e-13);
}
