#pragma once

#include <string>
#include <vector>

#include "cfrac.hpp"
#include "fourier.hpp"
#include "intervals.hpp"
#include "report.hpp"

namespace liokam {

// Parameters lambda in `intervals` for which lambda + shift(lambda) keeps
// ||l(lambda + shift) - k alpha|| >= gamma / (|k| + l)^tau, 0 < |k| <= K.
struct DcSet {
  double gamma = 0.0;
  double tau = 0.0;
  long K = 0;
  IntervalSet intervals;
  std::vector<double> shift;  // per lambda-grid row; empty means zero
};

// Grid rows of `basis` lying in dc.intervals.
std::vector<char> dc_rows(const DcSet& dc, const SeriesBasis& basis);

// Worst ratio ||l w - k alpha|| (|k|+l)^tau / gamma over 0 < |k| <= K, l = 1,2
// (and k = 0, l = 2 when include_k0). >= 1 means w is in the DC set.
double dc_margin(double w, const AlphaTable& at, double gamma, double tau, long K, bool include_k0 = false);

// B(theta + alpha) - B(theta) = -T_Qbar B + [B]: modes 0 < |k| < Qbar.
FourierSeries solve_b_equation(const FourierSeries& B, long Qbar, const AlphaTable& at);

// ||e^{i 2 pi calB}||_{r_bar} against e^{8 pi^2 r0 ||B||_r}.
CheckRow b_equation_bound(const FourierSeries& B, const FourierSeries& calB, const NormContext& ctx_r,
                          double r_bar, double r0);

struct PolarResult {
  FourierSeries rho;
  FourierSeries B;
  double max_error = 0.0;  // pointwise reconstruction error on the sampling grid
};

// e^{i 2 pi lambda} + G = (1 + rho) e^{i 2 pi (lambda + B)} with rho, B real.
// The argument is followed continuously in theta from the principal value at
// theta = 0; the coefficients come from an oversampled grid that is doubled
// until the spectral tail is negligible or the basis cap is reached.
PolarResult polar_decompose(const FourierSeries& G);

struct TailBound {
  double log_factor = 0.0;  // ln of exp{-sigma/r Gamma(x) ln x}, x = 2 pi K (r - sigma)
  double bound = 0.0;       // factor * ||f||_r
  double actual = 0.0;      // ||R_K f||_{r - sigma}
  bool pass = true;
};
TailBound tail_bound(const FourierSeries& f, long K, double r, double sigma, const NormContext& ctx);

struct Violation {
  std::size_t row = 0;
  double lambda = 0.0;
  long k = 0;
  int l = 0;
  double value = 0.0;
};

struct SmallDivisorReport {
  bool pass = true;
  int appendix_case = 1;  // 1: Qbar_{n+1} <= Q_{n+1}^{2 tau}, 2 otherwise
  long K = 0;
  double bound = 0.0;     // 4 gamma Q_{n+1}^{-tau^2}
  double log_bound = 0.0;
  double min_value = 0.0;
  std::size_t checked = 0;
  std::vector<Violation> violations;  // first 64 only
  std::size_t violation_count = 0;
};

// Exhaustive scan of |e^{i 2 pi (l Omega - k alpha)} - 1| over grid rows in
// dc.intervals, 0 < |k| <= K = floor(sqrt(Qbar_next)), l = 1, 2.
SmallDivisorReport certify_small_divisor(const DcSet& dc, const SeriesBasis& basis, const Alpha& alpha,
                                         const BigInt& Q_next, const BigInt& Qbar_next);

struct HomologicalInput {
  FourierSeries B;  // real
  FourierSeries b;
  FourierSeries u;
  int l = 1;
  long K = 0;        // truncation |k| < K
  long Qbar = 0;     // Qbar_n, truncation of the B-equation
  double log_Q_next = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
  double r = 0.0;        // width of B
  double r_tilde = 0.0;  // width of b, u, delta
  double sigma = 0.0;    // error term lives on r_tilde - sigma
  double eps0 = 0.0;
  bool force = false;    // hypotheses become advisory instead of throwing
};

struct SolveResult {
  FourierSeries delta;
  FourierSeries error_term;
  FourierSeries delta_tilde;  // solution of the truncated system, |k| < K
  FourierSeries b_tilde;
  FourierSeries u_tilde;
  FourierSeries calB;
  std::vector<double> lambda_tilde;
  double conditioning = 0.0;  // max row-sum of S^{-1} E P E^{-1}
  Report report;
};

// e^{i 2 pi l (lambda + B)} delta + b delta - delta(theta + alpha) = u on the
// active rows of ctx. Rows outside the active set get delta = 0 and
// error_term = -u, so the equation holds identically with the error term.
SolveResult solve_homological(const HomologicalInput& in, const AlphaTable& at, const NormContext& ctx);

// Solves the banded system A x = y in place with partial pivoting. Row i of
// `a` stores columns [i - kl, i + kl + ku] (width 2 kl + ku + 1); the extra
// kl columns absorb pivoting fill. Returns false on a zero pivot.
bool band_solve(int n, int kl, int ku, std::vector<cplx>& a, std::vector<cplx>& y);

}  // namespace liokam
