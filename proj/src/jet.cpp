#include "jet.hpp"

#include <cmath>

#include "errors.hpp"

namespace liokam {

PowerFourierSeries::PowerFourierSeries(BasisPtr b, int dmax) : basis_(std::move(b)), dmax_(dmax) {
  if (dmax < 0) throw ConfigError("d_max must be nonnegative");
  c_.assign((dmax + 1) * (dmax + 2) / 2, FourierSeries(basis_, 0));
}

bool PowerFourierSeries::is_zero() const {
  for (const auto& f : c_)
    if (!f.is_zero()) return false;
  return true;
}

bool PowerFourierSeries::low_jet_zero() const {
  for (int i = 0; i < static_cast<int>(c_.size()) && i < 3; ++i)
    if (!c_[i].is_zero()) return false;
  return true;
}

namespace {
void require_same(const PowerFourierSeries& x, const PowerFourierSeries& y) {
  if (x.dmax() != y.dmax()) throw TypeError("jet degree bounds differ");
}
}  // namespace

PowerFourierSeries operator+(const PowerFourierSeries& x, const PowerFourierSeries& y) {
  require_same(x, y);
  PowerFourierSeries z = x;
  for (int d = 0; d <= x.dmax(); ++d)
    for (int m2 = 0; m2 <= d; ++m2)
      if (!y.coef(d - m2, m2).is_zero()) z.coef(d - m2, m2) = x.coef(d - m2, m2) + y.coef(d - m2, m2);
  return z;
}

PowerFourierSeries operator-(const PowerFourierSeries& x, const PowerFourierSeries& y) {
  require_same(x, y);
  PowerFourierSeries z = x;
  for (int d = 0; d <= x.dmax(); ++d)
    for (int m2 = 0; m2 <= d; ++m2)
      if (!y.coef(d - m2, m2).is_zero()) z.coef(d - m2, m2) = x.coef(d - m2, m2) - y.coef(d - m2, m2);
  return z;
}

PowerFourierSeries multiply(const PowerFourierSeries& x, const PowerFourierSeries& y) {
  require_same(x, y);
  const int D = x.dmax();
  PowerFourierSeries z(x.basis(), D);
  for (int d1 = 0; d1 <= D; ++d1)
    for (int a2 = 0; a2 <= d1; ++a2) {
      const FourierSeries& fa = x.coef(d1 - a2, a2);
      if (fa.is_zero()) continue;
      for (int d2 = 0; d1 + d2 <= D; ++d2)
        for (int b2 = 0; b2 <= d2; ++b2) {
          const FourierSeries& fb = y.coef(d2 - b2, b2);
          if (fb.is_zero()) continue;
          FourierSeries& t = z.coef(d1 - a2 + d2 - b2, a2 + b2);
          t = t + multiply(fa, fb);
        }
    }
  return z;
}

PowerFourierSeries scale(const FourierSeries& s, const PowerFourierSeries& x) {
  PowerFourierSeries z(x.basis(), x.dmax());
  for (int d = 0; d <= x.dmax(); ++d)
    for (int m2 = 0; m2 <= d; ++m2)
      if (!x.coef(d - m2, m2).is_zero()) z.coef(d - m2, m2) = multiply(s, x.coef(d - m2, m2));
  return z;
}

PowerFourierSeries conj_swap(const PowerFourierSeries& x) {
  PowerFourierSeries z(x.basis(), x.dmax());
  for (int d = 0; d <= x.dmax(); ++d)
    for (int m2 = 0; m2 <= d; ++m2) z.coef(d - m2, m2) = conj_fn(x.coef(m2, d - m2));
  return z;
}

double norm_rs(const PowerFourierSeries& x, const NormContext& ctx, double s) {
  if (!(s > 0.0)) throw DomainError("norm_rs needs s > 0");
  double total = 0.0;
  for (int d = 0; d <= x.dmax(); ++d)
    for (int m2 = 0; m2 <= d; ++m2) {
      const FourierSeries& f = x.coef(d - m2, m2);
      if (f.is_zero()) continue;
      total += norm_r(f, ctx) * std::pow(s, d);
    }
  return total;
}

PowerFourierSeries compose_affine(const PowerFourierSeries& R, const FourierSeries& delta, const FourierSeries& P,
                                  const FourierSeries& Q) {
  const int D = R.dmax();
  const BasisPtr& b = R.basis();
  PowerFourierSeries out(b, D);
  if (R.is_zero()) return out;
  PowerFourierSeries x1(b, D), x2(b, D);
  if (D >= 1) {
    x1.coef(0, 0) = delta;
    x1.coef(1, 0) = P;
    x1.coef(0, 1) = Q;
    x2.coef(0, 0) = conj_fn(delta);
    x2.coef(1, 0) = conj_fn(Q);
    x2.coef(0, 1) = conj_fn(P);
  }
  // Horner in x1 over Horner in x2: every product is with a degree-1 jet,
  // so each step costs three series products per coefficient.
  auto horner_x2 = [&](int m1) {
    PowerFourierSeries acc(b, D);
    for (int m2 = D - m1; m2 >= 0; --m2) {
      acc = multiply(acc, x2);
      const FourierSeries& f = R.coef(m1, m2);
      if (!f.is_zero()) acc.coef(0, 0) = acc.coef(0, 0) + f;
    }
    return acc;
  };
  for (int m1 = D; m1 >= 0; --m1) {
    out = multiply(out, x1);
    bool any = false;
    for (int m2 = 0; m1 + m2 <= D; ++m2) any = any || !R.coef(m1, m2).is_zero();
    if (any) out = out + horner_x2(m1);
  }
  return out;
}

PowerFourierSeries drop_low(const PowerFourierSeries& x) {
  PowerFourierSeries z = x;
  if (x.dmax() >= 0) z.coef(0, 0) = FourierSeries(x.basis(), 0);
  if (x.dmax() >= 1) {
    z.coef(1, 0) = FourierSeries(x.basis(), 0);
    z.coef(0, 1) = FourierSeries(x.basis(), 0);
  }
  return z;
}

namespace {
cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}
}  // namespace

cplx evaluate(const PowerFourierSeries& x, std::size_t row, double theta, cplx v, cplx w) {
  cplx s{};
  for (int d = 0; d <= x.dmax(); ++d)
    for (int m2 = 0; m2 <= d; ++m2) {
      const FourierSeries& f = x.coef(d - m2, m2);
      if (f.is_zero()) continue;
      s += evaluate(f, row, theta) * ipow(v, d - m2) * ipow(w, m2);
    }
  return s;
}

}  // namespace liokam
