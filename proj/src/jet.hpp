#pragma once

#include <vector>

#include "fourier.hpp"

namespace liokam {

// First component of a C^2-valued map analytic in X = (v, conj v):
//   R1(v, w) = sum_{|m| <= dmax} f_m v^{m1} w^{m2},
// evaluated at w = conj v. The second component is conj_swap(R1).
class PowerFourierSeries {
 public:
  PowerFourierSeries() = default;
  PowerFourierSeries(BasisPtr b, int dmax);

  int dmax() const { return dmax_; }
  const BasisPtr& basis() const { return basis_; }
  static int index(int m1, int m2) {
    int d = m1 + m2;
    return d * (d + 1) / 2 + m2;
  }
  const FourierSeries& coef(int m1, int m2) const { return c_[index(m1, m2)]; }
  FourierSeries& coef(int m1, int m2) { return c_[index(m1, m2)]; }
  bool is_zero() const;
  // degree <= 1 part identically zero (coefficient-exact)
  bool low_jet_zero() const;

 private:
  BasisPtr basis_;
  int dmax_ = 0;
  std::vector<FourierSeries> c_;
};

PowerFourierSeries operator+(const PowerFourierSeries& x, const PowerFourierSeries& y);
PowerFourierSeries operator-(const PowerFourierSeries& x, const PowerFourierSeries& y);
PowerFourierSeries multiply(const PowerFourierSeries& x, const PowerFourierSeries& y);  // truncated at dmax
PowerFourierSeries scale(const FourierSeries& s, const PowerFourierSeries& x);
// Second component: g_{(a,b)} = conj_fn(f_{(b,a)}).
PowerFourierSeries conj_swap(const PowerFourierSeries& x);

// sum_m ||f_m||_r s^{|m|}
double norm_rs(const PowerFourierSeries& x, const NormContext& ctx, double s);

// R1(delta + P v + Q w, conj delta + conj Q v + conj P w). The substitution
// is affine, so no degree is created beyond dmax.
PowerFourierSeries compose_affine(const PowerFourierSeries& R, const FourierSeries& delta, const FourierSeries& P,
                                  const FourierSeries& Q);

// Remove monomials with |m| <= 1.
PowerFourierSeries drop_low(const PowerFourierSeries& x);

cplx evaluate(const PowerFourierSeries& x, std::size_t row, double theta, cplx v, cplx w);

}  // namespace liokam
