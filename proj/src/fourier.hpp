#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

#include "weights.hpp"

namespace liokam {

using cplx = std::complex<double>;

// The lambda grid shared by every series in one computation, plus the hard
// support cap |k| <= k_cap applied after products.
struct SeriesBasis {
  std::vector<double> lambda;
  int k_cap = 512;

  static std::shared_ptr<const SeriesBasis> uniform(std::size_t n, int k_cap, double lo = 0.25,
                                                    double hi = 0.75);
  static std::shared_ptr<const SeriesBasis> from_grid(std::vector<double> grid, int k_cap);
  std::size_t size() const { return lambda.size(); }
};
using BasisPtr = std::shared_ptr<const SeriesBasis>;

// e^{i 2 pi k alpha} for |k| <= kmax(). Built by cfrac::AlphaTable from an
// exact reduction of k*alpha mod 1.
class PhaseTable {
 public:
  PhaseTable() = default;
  explicit PhaseTable(std::vector<cplx> nonneg) : e_(std::move(nonneg)) {}
  cplx operator()(long k) const;
  long kmax() const { return static_cast<long>(e_.size()) - 1; }

 private:
  std::vector<cplx> e_;
};

// Finitely supported Fourier coefficients f_k(lambda), |k| <= kmax, stored
// row-major by lambda index. Zero is kmax == 0 with zero entries.
class FourierSeries {
 public:
  FourierSeries() = default;
  explicit FourierSeries(BasisPtr b, int kmax = 0);

  static FourierSeries constant(BasisPtr b, cplx c);
  static FourierSeries per_lambda(BasisPtr b, const std::vector<cplx>& v);
  static FourierSeries mode(BasisPtr b, int k, cplx c);

  const BasisPtr& basis() const { return basis_; }
  std::size_t rows() const { return basis_ ? basis_->size() : 0; }
  int kmax() const { return kmax_; }
  int width() const { return 2 * kmax_ + 1; }

  cplx coeff(std::size_t row, long k) const {
    if (k > kmax_ || k < -kmax_) return {};
    return c_[row * width() + (k + kmax_)];
  }
  cplx& at(std::size_t row, int k) { return c_[row * width() + (k + kmax_)]; }
  const cplx* row(std::size_t i) const { return c_.data() + i * width(); }
  cplx* row(std::size_t i) { return c_.data() + i * width(); }

  void resize_kmax(int kmax);  // pads with zeros or crops
  void trim();                 // shrink kmax to the largest nonzero |k|
  bool is_zero() const;
  bool valid() const { return static_cast<bool>(basis_); }

 private:
  BasisPtr basis_;
  int kmax_ = 0;
  std::vector<cplx> c_;
};

// Values (v, conj v) with conj the function conjugate (see conj_fn).
struct C2Vector {
  FourierSeries v;
};

// [[a, b], [conj b, conj a]]: the pattern shared by su(1,1), SU(1,1), the
// diagonal part diag(m, conj m), and W. Closed under products.
struct Su11Matrix {
  FourierSeries a;
  FourierSeries b;
};

struct NormContext {
  WeightFunction weight;
  double r = 0.0;
  bool lambda_derivative = true;
  const std::vector<char>* active = nullptr;  // null: every lambda row
};

// ---- arithmetic ----
FourierSeries operator+(const FourierSeries& f, const FourierSeries& g);
FourierSeries operator-(const FourierSeries& f, const FourierSeries& g);
FourierSeries operator-(const FourierSeries& f);
FourierSeries operator*(cplx s, const FourierSeries& f);
FourierSeries multiply(const FourierSeries& f, const FourierSeries& g);
FourierSeries operator*(const FourierSeries& f, const FourierSeries& g);
FourierSeries scale_rows(const FourierSeries& f, const std::vector<cplx>& per_lambda);
FourierSeries add_constant(const FourierSeries& f, cplx c);

// (conj_fn f)(theta) = conj(f(theta)) for real theta: coefficients conj(f_{-k}).
FourierSeries conj_fn(const FourierSeries& f);
// f(theta + alpha)
FourierSeries shift(const FourierSeries& f, const PhaseTable& ph);
FourierSeries truncate(const FourierSeries& f, long K);      // |k| <  K
FourierSeries project_tail(const FourierSeries& f, long K);  // |k| >= K
std::vector<cplx> average(const FourierSeries& f);

// ---- norms ----
// sup over active lambda of (|f_k| + |d/dlambda f_k|)
double coeff_seminorm(const FourierSeries& f, long k, const NormContext& ctx);
double log_norm_r(const FourierSeries& f, const NormContext& ctx);  // -inf for zero
double norm_r(const FourierSeries& f, const NormContext& ctx);
double analytic_norm(const FourierSeries& f, const NormContext& ctx);
// sup over rows of sum_k |f_k|: plain l1, no weights, no derivative.
double sup_l1(const FourierSeries& f);
// sup over rows of sum_k |f_k - conj f_{-k}| / 2: bounds sup |Im f| on T.
double imag_defect(const FourierSeries& f);

double norm_r(const C2Vector& v, const NormContext& ctx);
double norm_r(const Su11Matrix& m, const NormContext& ctx);
double log_norm_r(const Su11Matrix& m, const NormContext& ctx);

// ---- exponentials ----
// e^{i 2 pi l B}; B must be real on T (imag_defect < 1e-12).
FourierSeries exp_i(const FourierSeries& B, int l);
// e^D for D = [[0, d], [conj d, 0]]; returns [[P, Q], [conj Q, conj P]].
Su11Matrix exp_su11(const Su11Matrix& D);
// {P - 1, Q - d}, summed without forming P or Q, so no cancellation for small d.
Su11Matrix exp_su11_parts(const Su11Matrix& D);
// Power series of (1 + x)^{-1} style Neumann inverse of a series whose row
// averages dominate. Used for 1/conj(m).
FourierSeries reciprocal(const FourierSeries& f);

// ---- matrix pattern helpers ----
Su11Matrix identity(const BasisPtr& b);
Su11Matrix operator+(const Su11Matrix& x, const Su11Matrix& y);
Su11Matrix operator-(const Su11Matrix& x, const Su11Matrix& y);
Su11Matrix operator*(const Su11Matrix& x, const Su11Matrix& y);
Su11Matrix shift(const Su11Matrix& x, const PhaseTable& ph);
C2Vector apply(const Su11Matrix& x, const C2Vector& v);

// ---- evaluation and sampling ----
cplx evaluate(const FourierSeries& f, std::size_t row, double theta);
// Samples at theta_j = j/n.
std::vector<cplx> sample_row(const FourierSeries& f, std::size_t row, int n);
// Inverse of sample_row for one row; kmax < n/2.
void set_row_from_samples(FourierSeries& f, std::size_t row, const std::vector<cplx>& x);

// Coefficient dump: one line "lambda_index k re im" per (row, k), k in
// [-kmax, kmax], numbers in shortest round-trip form.
void dump(const FourierSeries& f, std::ostream& os);
FourierSeries load(const BasisPtr& b, std::istream& is);

}  // namespace liokam
