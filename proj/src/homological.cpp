#include "homological.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "fft.hpp"
#include "parallel.hpp"

namespace liokam {

namespace {

constexpr double kPi = std::numbers::pi;

NormContext with_r(const NormContext& c, double r) {
  NormContext o = c;
  o.r = r;
  return o;
}

// 1 - e^{i 2 pi t} without cancellation for small t.
cplx one_minus_phase(double t) {
  t -= std::round(t);
  return cplx(0.0, -2.0 * std::sin(kPi * t)) * std::polar(1.0, kPi * t);
}

void symmetrize_real(FourierSeries& f) {
  for (std::size_t i = 0; i < f.rows(); ++i) {
    f.at(i, 0) = f.at(i, 0).real();
    for (int k = 1; k <= f.kmax(); ++k) {
      cplx c = 0.5 * (f.at(i, k) + std::conj(f.at(i, -k)));
      f.at(i, k) = c;
      f.at(i, -k) = std::conj(c);
    }
  }
}

void drop_small(FourierSeries& f, double rel) {
  for (std::size_t i = 0; i < f.rows(); ++i) {
    cplx* r = f.row(i);
    double mass = 0.0;
    for (int j = 0; j < f.width(); ++j) mass += std::abs(r[j]);
    for (int j = 0; j < f.width(); ++j)
      if (std::abs(r[j]) < rel * mass) r[j] = 0.0;
  }
  f.trim();
}

}  // namespace

std::vector<char> dc_rows(const DcSet& dc, const SeriesBasis& basis) {
  std::vector<char> a(basis.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = dc.intervals.contains(basis.lambda[i]) ? 1 : 0;
  return a;
}

double dc_margin(double w, const AlphaTable& at, double gamma, double tau, long K, bool include_k0) {
  if (K > at.kmax()) throw InternalError("dc_margin: alpha table shorter than K");
  double worst = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= 2; ++l) {
    for (long k = -K; k <= K; ++k) {
      if (k == 0 && !(include_k0 && l == 2)) continue;
      double d = norm_T(l * w - at.frac(k));
      double ratio = d * std::pow(static_cast<double>(std::labs(k) + l), tau) / gamma;
      worst = std::min(worst, ratio);
    }
  }
  return worst;
}

FourierSeries solve_b_equation(const FourierSeries& B, long Qbar, const AlphaTable& at) {
  if (imag_defect(B) >= 1e-12) throw DomainError("solve_b_equation: B is not real-valued");
  if (Qbar < 1) throw DomainError("solve_b_equation: Qbar must be positive");
  const long kc = std::min<long>(Qbar - 1, B.kmax());
  if (kc > at.kmax()) throw InternalError("solve_b_equation: alpha table shorter than the truncation");
  FourierSeries out(B.basis(), static_cast<int>(std::max<long>(kc, 0)));
  for (long k = -kc; k <= kc; ++k) {
    if (k == 0) continue;
    // e^{i 2 pi k alpha} - 1 = -(1 - e^{i 2 pi frac})
    cplx div = -one_minus_phase(at.frac(k));
    if (std::abs(div) == 0.0) throw InternalError("solve_b_equation: vanishing divisor");
    for (std::size_t i = 0; i < B.rows(); ++i) out.at(i, static_cast<int>(k)) = -B.coeff(i, k) / div;
  }
  symmetrize_real(out);
  out.trim();
  return out;
}

CheckRow b_equation_bound(const FourierSeries& B, const FourierSeries& calB, const NormContext& ctx_r,
                          double r_bar, double r0) {
  double actual = norm_r(exp_i(calB, 1), with_r(ctx_r, r_bar));
  double bound = std::exp(8.0 * kPi * kPi * r0 * norm_r(B, ctx_r));
  return le_row("b_equation_exponential", actual, bound);
}

PolarResult polar_decompose(const FourierSeries& G) {
  const BasisPtr& basis = G.basis();
  const std::size_t n = G.rows();
  PolarResult res{FourierSeries(basis, 0), FourierSeries(basis, 0), 0.0};

  if (G.kmax() == 0) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx w = 1.0 + G.coeff(i, 0) * std::polar(1.0, -2.0 * kPi * basis->lambda[i]);
      if (std::abs(w) <= 0.5) throw DomainError("polar_decompose: modulus near zero");
      res.rho.at(i, 0) = std::abs(w) - 1.0;
      res.B.at(i, 0) = std::arg(w) / (2.0 * kPi);
    }
    return res;
  }

  const int cap = basis->k_cap;
  int N = fft::pow2_at_least(std::max(64, 8 * (G.kmax() + 1)));
  for (;;) {
    const int kall = N / 2 - 1;
    const int kout = std::min(N / 4, cap);
    FourierSeries rho(basis, kall), B(basis, kall);
    std::vector<double> tail(n, 0.0), mass(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
      std::vector<cplx> z = sample_row(G, i, N);
      const cplx ph = std::polar(1.0, -2.0 * kPi * basis->lambda[i]);
      std::vector<cplx> rs(N), bs(N);
      double prev = 0.0;
      for (int j = 0; j < N; ++j) {
        cplx w = 1.0 + z[j] * ph;
        if (std::abs(w) <= 0.5) throw DomainError("polar_decompose: modulus near zero");
        double a = std::arg(w);
        if (j > 0) a = prev + std::remainder(a - prev, 2.0 * kPi);
        prev = a;
        rs[j] = std::abs(w) - 1.0;
        bs[j] = a / (2.0 * kPi);
      }
      double close = std::remainder(std::arg(1.0 + z[0] * ph) - prev, 2.0 * kPi) + prev;
      if (std::abs(close - bs[0].real() * 2.0 * kPi) > 1.0)
        throw DomainError("polar_decompose: argument winds around the origin");
      set_row_from_samples(rho, i, rs);
      set_row_from_samples(B, i, bs);
      for (int k = -kall; k <= kall; ++k) {
        double m = std::abs(rho.coeff(i, k)) + std::abs(B.coeff(i, k));
        mass[i] += m;
        if (std::abs(k) > kout) tail[i] += m;
      }
    });
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i)
      if (tail[i] > 1e-16 * std::max(mass[i], 1.0)) ok = false;
    if (ok || N / 4 >= cap) {
      rho.resize_kmax(kout);
      B.resize_kmax(kout);
      symmetrize_real(rho);
      symmetrize_real(B);
      // FFT rounding leaves a plateau near 1e-16 relative at every |k|; under
      // exponential weights that plateau would dominate the norm.
      drop_small(rho, 64.0 * DBL_EPSILON);
      drop_small(B, 64.0 * DBL_EPSILON);
      // reconstruction error on the sampling grid
      std::vector<double> err(n, 0.0);
      parallel_for(n, [&](std::size_t i) {
        std::vector<cplx> z = sample_row(G, i, N), rr = sample_row(rho, i, N), bb = sample_row(B, i, N);
        for (int j = 0; j < N; ++j) {
          cplx lhs = (1.0 + rr[j].real()) * std::polar(1.0, 2.0 * kPi * (basis->lambda[i] + bb[j].real()));
          cplx rhs = std::polar(1.0, 2.0 * kPi * basis->lambda[i]) + z[j];
          err[i] = std::max(err[i], std::abs(lhs - rhs));
        }
      });
      res.rho = std::move(rho);
      res.B = std::move(B);
      res.max_error = *std::max_element(err.begin(), err.end());
      return res;
    }
    N *= 2;
  }
}

TailBound tail_bound(const FourierSeries& f, long K, double r, double sigma, const NormContext& ctx) {
  if (!(sigma > 0.0 && sigma < r)) throw DomainError("tail_bound: need 0 < sigma < r");
  const double x = 2.0 * kPi * static_cast<double>(K) * (r - sigma);
  if (!(x > 1.0 + 1e-9)) throw DomainError("tail_bound: 2 pi K (r - sigma) must exceed 1");
  TailBound t;
  t.log_factor = -sigma / r * ctx.weight.gamma(x) * std::log(x);
  const double log_norm = log_norm_r(f, with_r(ctx, r));
  const double log_actual = log_norm_r(project_tail(f, K), with_r(ctx, r - sigma));
  const double log_bound = t.log_factor + log_norm;
  t.bound = std::exp(log_bound);
  t.actual = std::exp(log_actual);
  t.pass = std::isinf(log_actual) || log_actual <= log_bound + 1e-12;
  return t;
}

SmallDivisorReport certify_small_divisor(const DcSet& dc, const SeriesBasis& basis, const Alpha& alpha,
                                         const BigInt& Q_next, const BigInt& Qbar_next) {
  if (Q_next < 1 || Qbar_next < 1) throw DomainError("certify_small_divisor: denominators must be positive");
  BigInt Kb = boost::multiprecision::sqrt(Qbar_next);
  if (Kb > 50'000'000) throw DomainError("certify_small_divisor: K = sqrt(Qbar) too large to scan");
  SmallDivisorReport rep;
  rep.K = static_cast<long>(Kb);
  const double lq = log_big(Q_next), lqb = log_big(Qbar_next);
  rep.appendix_case = lqb <= 2.0 * dc.tau * lq ? 1 : 2;
  rep.log_bound = std::log(4.0 * dc.gamma) - dc.tau * dc.tau * lq;
  rep.bound = std::exp(rep.log_bound);
  AlphaTable at(alpha, rep.K);
  std::vector<char> rows = dc_rows(dc, basis);

  struct RowOut {
    std::vector<Violation> v;
    std::size_t count = 0;
    double min_value = std::numeric_limits<double>::infinity();
  };
  std::vector<RowOut> out(basis.size());
  parallel_for(basis.size(), [&](std::size_t i) {
    if (!rows[i]) return;
    const double w = basis.lambda[i] + (dc.shift.empty() ? 0.0 : dc.shift[i]);
    RowOut& o = out[i];
    for (int l = 1; l <= 2; ++l)
      for (long k = -rep.K; k <= rep.K; ++k) {
        if (k == 0) continue;
        double value = 2.0 * std::sin(kPi * norm_T(l * w - at.frac(k)));
        o.min_value = std::min(o.min_value, value);
        if (value < rep.bound) {
          ++o.count;
          if (o.v.size() < 64) o.v.push_back({i, basis.lambda[i], k, l, value});
        }
      }
  });
  rep.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!rows[i]) continue;
    rep.checked += 4 * static_cast<std::size_t>(rep.K);
    rep.min_value = std::min(rep.min_value, out[i].min_value);
    rep.violation_count += out[i].count;
    for (auto& v : out[i].v)
      if (rep.violations.size() < 64) rep.violations.push_back(v);
  }
  rep.pass = rep.violation_count == 0;
  return rep;
}

bool band_solve(int n, int kl, int ku, std::vector<cplx>& a, std::vector<cplx>& y) {
  const int W = 2 * kl + ku + 1;
  auto A = [&](int i, int j) -> cplx& { return a[static_cast<std::size_t>(i) * W + (j - i + kl)]; };
  for (int c = 0; c < n; ++c) {
    const int rlast = std::min(n - 1, c + kl);
    const int clast = std::min(n - 1, c + kl + ku);
    int p = c;
    double best = std::abs(A(c, c));
    for (int r = c + 1; r <= rlast; ++r)
      if (std::abs(A(r, c)) > best) {
        best = std::abs(A(r, c));
        p = r;
      }
    if (best == 0.0) return false;
    if (p != c) {
      for (int j = c; j <= clast; ++j) std::swap(A(p, j), A(c, j));
      std::swap(y[p], y[c]);
    }
    const cplx piv = A(c, c);
    for (int r = c + 1; r <= rlast; ++r) {
      cplx f = A(r, c) / piv;
      if (f == 0.0) continue;
      A(r, c) = 0.0;
      for (int j = c + 1; j <= clast; ++j) A(r, j) -= f * A(c, j);
      y[r] -= f * y[c];
    }
  }
  for (int c = n - 1; c >= 0; --c) {
    cplx s = y[c];
    const int clast = std::min(n - 1, c + kl + ku);
    for (int j = c + 1; j <= clast; ++j) s -= A(c, j) * y[j];
    y[c] = s / A(c, c);
  }
  return true;
}

SolveResult solve_homological(const HomologicalInput& in, const AlphaTable& at, const NormContext& ctx) {
  if (in.l != 1 && in.l != 2) throw DomainError("solve_homological: l must be 1 or 2");
  if (in.K < 1) throw DomainError("solve_homological: K must be positive");
  const BasisPtr& basis = in.u.basis();
  if (in.K - 1 > basis->k_cap) throw DomainError("solve_homological: K exceeds the support cap");
  if (in.K > at.kmax()) throw InternalError("solve_homological: alpha table shorter than K");
  if (!(in.sigma > 0.0 && in.sigma < in.r_tilde)) throw DomainError("solve_homological: need 0 < sigma < r_tilde");
  const std::size_t n = basis->size();
  const int l = in.l;
  const long K = in.K;
  const NormContext ctx_r = with_r(ctx, in.r), ctx_half = with_r(ctx, in.r / 2.0), ctx_rt = with_r(ctx, in.r_tilde);

  SolveResult res;
  res.calB = solve_b_equation(in.B, in.Qbar, at);
  const FourierSeries calB_s = shift(res.calB, at.phases());
  const std::vector<cplx> avg = average(in.B);
  res.lambda_tilde.resize(n);
  std::vector<cplx> ph(n);
  for (std::size_t i = 0; i < n; ++i) {
    res.lambda_tilde[i] = basis->lambda[i] + avg[i].real();
    ph[i] = std::polar(1.0, 2.0 * kPi * l * res.lambda_tilde[i]);
  }

  FourierSeries TB = truncate(in.B, in.Qbar);
  for (std::size_t i = 0; i < n; ++i) TB.at(i, 0) = 0.0;
  const FourierSeries RB = project_tail(in.B, in.Qbar);
  const FourierSeries e_minus = exp_i(-TB, l);  // e^{i 2 pi l (-T B + [B])}
  FourierSeries e_rb = RB.is_zero() ? FourierSeries(basis, 0) : add_constant(exp_i(RB, l), -1.0);
  res.b_tilde = scale_rows(e_rb, ph) + multiply(in.b, e_minus);
  res.u_tilde = multiply(exp_i(calB_s, l), in.u);

  // hypotheses
  const double lg = std::log(in.gamma), lq = in.log_Q_next, t2 = in.tau * in.tau;
  const bool binding = !in.force;
  Report& rep = res.report;
  rep.push_back(le_row("B_norm", norm_r(in.B, ctx_r), std::cbrt(in.eps0), binding));
  rep.push_back(le_row("tail_B_norm", norm_r(RB, ctx_half),
                       std::exp(2.0 * lg - std::log(480.0 * kPi * kPi) - 2.0 * t2 * lq), binding));
  rep.push_back(le_row("b_norm", norm_r(in.b, ctx_rt), std::exp(2.0 * lg - std::log(12.0) - 2.0 * t2 * lq), binding));
  {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      if (!ctx.active || (*ctx.active)[i])
        worst = std::min(worst, dc_margin(res.lambda_tilde[i], at, in.gamma, in.tau, K - 1, l == 2));
    CheckRow row{"dc_membership", 1.0, worst, worst >= 1.0, binding, "ratio to gamma/(|k|+l)^tau"};
    rep.push_back(row);
  }
  rep.push_back(le_row("e_minus_norm", norm_r(e_minus, ctx_rt), 2.0, false));
  if (binding) {
    std::ostringstream os;
    for (const auto& r : rep)
      if (r.binding && !r.pass) os << ' ' << r.check << " (" << r.actual << " vs " << r.bound << ")";
    if (!os.str().empty()) throw PreconditionError("solve_homological: hypotheses fail:" + os.str());
  }

  // scaled banded solve per lambda row
  const int N = static_cast<int>(2 * K - 1);
  const int kb = std::min(res.b_tilde.kmax(), N - 1);
  const int W = 3 * kb + 1;
  std::vector<double> Lam(K);
  for (long k = 0; k < K; ++k) Lam[k] = ctx.weight.lambda(2.0 * kPi * static_cast<double>(k) * in.r_tilde);
  auto lam = [&](long k) { return Lam[std::labs(k)]; };

  res.delta_tilde = FourierSeries(basis, static_cast<int>(K - 1));
  std::vector<double> cond(n, 0.0);
  std::vector<char> singular(n, 0);
  parallel_for(n, [&](std::size_t i) {
    if (ctx.active && !(*ctx.active)[i]) return;
    std::vector<cplx> a(static_cast<std::size_t>(N) * W, cplx{});
    std::vector<cplx> y(N);
    double worst = 0.0;
    for (int r = 0; r < N; ++r) {
      const long k = r - (K - 1);
      // S_k = e^{i 2 pi l lt} - e^{i 2 pi k alpha} = e^{i 2 pi l lt} (1 - e^{i 2 pi (k alpha - l lt)})
      const cplx S = ph[i] * one_minus_phase(at.frac(k) - l * res.lambda_tilde[i]);
      double rowsum = 0.0;
      for (int c = std::max(0, r - kb); c <= std::min(N - 1, r + kb); ++c) {
        const long k2 = c - (K - 1);
        cplx p = res.b_tilde.coeff(i, k - k2);
        if (p != 0.0) {
          p *= std::exp(lam(k) - lam(k2));
          rowsum += std::abs(p);
        }
        a[static_cast<std::size_t>(r) * W + (c - r + kb)] = p + (c == r ? S : cplx{});
      }
      worst = std::max(worst, rowsum / std::abs(S));
      y[r] = std::exp(lam(k)) * res.u_tilde.coeff(i, k);
    }
    cond[i] = worst;
    if (!band_solve(N, kb, kb, a, y)) {
      singular[i] = 1;
      return;
    }
    for (int r = 0; r < N; ++r) {
      const long k = r - (K - 1);
      res.delta_tilde.at(i, static_cast<int>(k)) = y[r] * std::exp(-lam(k));
    }
  });
  res.conditioning = *std::max_element(cond.begin(), cond.end());
  for (std::size_t i = 0; i < n; ++i)
    if (singular[i]) throw ConditioningError("solve_homological: singular truncated system at lambda = " +
                                             std::to_string(basis->lambda[i]));
  CheckRow crow = le_row("conditioning", res.conditioning, 0.5, !in.force);
  crow.pass = res.conditioning < 0.5;
  rep.push_back(crow);
  if (!crow.pass && !in.force)
    throw ConditioningError("solve_homological: scaled perturbation row sum " + std::to_string(res.conditioning) +
                            " >= 1/2");
  res.delta_tilde.trim();

  res.delta = multiply(exp_i(-res.calB, l), res.delta_tilde);
  FourierSeries resid = project_tail(multiply(res.b_tilde, res.delta_tilde) - res.u_tilde, K);
  res.error_term = multiply(exp_i(-calB_s, l), resid);
  if (ctx.active) {
    const int km = std::max(res.error_term.kmax(), in.u.kmax());
    res.error_term.resize_kmax(km);
    for (std::size_t i = 0; i < n; ++i)
      if (!(*ctx.active)[i])
        for (int k = -km; k <= km; ++k) res.error_term.at(i, k) = -in.u.coeff(i, k);
    res.error_term.trim();
  }

  const double log_u = log_norm_r(in.u, ctx_rt);
  rep.push_back(le_row("delta_bound", norm_r(res.delta, ctx_rt),
                       std::exp(std::log(32.0) - 2.0 * lg + 2.0 * t2 * lq + log_u), binding));
  const double x = 2.0 * kPi * static_cast<double>(K) * (in.r_tilde - in.sigma);
  if (x > 1.0 + 1e-9) {
    double lf = -in.sigma / in.r_tilde * ctx.weight.gamma(x) * std::log(x);
    rep.push_back(le_row("error_bound", norm_r(res.error_term, with_r(ctx, in.r_tilde - in.sigma)),
                         std::exp(std::log(16.0) + lf + log_u), binding));
  } else {
    rep.push_back(CheckRow{"error_bound", NAN, NAN, true, false, "2 pi K (r - sigma) <= 1: bound undefined"});
  }
  return res;
}

}  // namespace liokam
