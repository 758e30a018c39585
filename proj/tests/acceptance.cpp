// Acceptance run: one line per criterion, nonzero exit if any fails. Every
// quantity that the library computes is checked against an oracle written
// here (exact recurrences, Eigen dense solves, direct sums), not against the
// library's own verification helpers.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cfrac.hpp"
#include "config.hpp"
#include "homological.hpp"
#include "kam.hpp"
#include "model.hpp"
#include "parallel.hpp"

using namespace liokam;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

RunConfig preset_config(const std::string& name) { return load_config(std::string(LIOKAM_SOURCE_DIR) + "/configs/" + name + ".cfg"); }

// ---- oracles ----

// Exact rational close to alpha: golden F_{m}/F_{m+1}, silver P_m/P_{m+1}.
BigRat recurrence_ratio(int mult, int m) {
  BigInt a = 0, b = 1;
  for (int i = 0; i < m; ++i) {
    BigInt c = mult * b + a;
    a = b;
    b = c;
  }
  return BigRat(a, b);
}

// Convergent denominators from partial quotients.
std::vector<BigInt> q_from_a(const std::vector<BigInt>& a, int depth) {
  std::vector<BigInt> q(depth + 1);
  q[0] = 1;
  BigInt prev = 0;
  for (int k = 1; k <= depth; ++k) {
    q[k] = a[k] * q[k - 1] + prev;
    prev = q[k - 1];
  }
  return q;
}

BigRat frac_part(const BigRat& x) {
  BigInt fl = numerator(x) / denominator(x);
  if (x < 0 && BigRat(fl) != x) fl -= 1;
  return x - BigRat(fl);
}

BigInt ipow(const BigInt& x, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// Direct evaluation with an incremental phase.
cplx eval(const FourierSeries& f, std::size_t row, double th) {
  const cplx z = std::polar(1.0, 2 * pi * th);
  cplx s = f.coeff(row, 0), zp = 1.0;
  for (int k = 1; k <= f.kmax(); ++k) {
    zp *= z;
    s += f.coeff(row, k) * zp + f.coeff(row, -k) * std::conj(zp);
  }
  return s;
}

double own_lambda(const WeightFunction& w, double y) {
  if (y <= 0) return 0.0;
  return w.family() == WeightFamily::Analytic ? y : std::pow(y, w.param());
}

double own_gamma(const WeightFunction& w, double x) {
  // x Lambda'(x) / ln x
  if (w.family() == WeightFamily::Analytic) return x / std::log(x);
  const double d = w.param();
  return d * std::pow(x, d) / std::log(x);
}

// Weighted l1 norm of one lambda row, no lambda derivative.
double row_norm(const FourierSeries& f, std::size_t row, const WeightFunction& w, double r, long kmin = 0) {
  double s = 0.0;
  for (int k = -f.kmax(); k <= f.kmax(); ++k)
    if (std::abs(k) >= kmin) s += std::abs(f.coeff(row, k)) * std::exp(own_lambda(w, 2 * pi * std::abs(k) * r));
  return s;
}

FourierSeries random_poly(const BasisPtr& b, int kmax, std::mt19937_64& g, double decay, bool real = false) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  FourierSeries f(b, kmax);
  for (int k = real ? 0 : -kmax; k <= kmax; ++k) {
    const cplx x(u(g), u(g)), y(u(g), u(g));
    for (std::size_t i = 0; i < b->size(); ++i) {
      cplx c = std::exp(-decay * std::abs(k)) * (x + y * (b->lambda[i] - 0.5));
      if (real && k == 0) c = c.real();
      f.at(i, k) = c;
      if (real && k > 0) f.at(i, -k) = std::conj(c);
    }
  }
  return f;
}

NormContext ctx(const WeightFunction& w, double r, bool deriv = true) {
  NormContext c;
  c.weight = w;
  c.r = r;
  c.lambda_derivative = deriv;
  return c;
}

// ---- criteria ----

Outcome c1_cfrac() {
  bool ok = true;
  int checked = 0;
  for (const auto& [spec, mult] : {std::pair<const char*, int>{"golden", 1}, {"silver", 2}}) {
    const Alpha alpha = Alpha::parse(spec);
    const ContinuedFraction cf = expand(alpha, 21);
    // exact oracle: the continued fraction of a recurrence ratio shares the
    // first ~m quotients with alpha
    const BigRat x = recurrence_ratio(mult, 200);
    std::vector<BigInt> a{0};
    BigRat y = x;
    for (int k = 1; k <= 21; ++k) {
      const BigRat inv = BigRat(1) / y;
      const BigInt ak = numerator(inv) / denominator(inv);
      a.push_back(ak);
      y = inv - BigRat(ak);
    }
    const auto q = q_from_a(a, 21);
    for (int k = 0; k <= 20; ++k) ok = ok && cf.q[k] == q[k];
    // 1/(q_n + q_{n+1}) < |q_n alpha - p_n| <= 1/q_{n+1}; equals ||q_n alpha||
    // except at n = 0 when a_1 = 1
    for (int n = 0; n <= 20; ++n) {
      const BigRat lo = abs(BigRat(q[n]) * alpha.lo() - BigRat(cf.p[n]));
      const BigRat hi = abs(BigRat(q[n]) * alpha.hi() - BigRat(cf.p[n]));
      for (const BigRat& d : {lo, hi}) ok = ok && d > BigRat(1, q[n] + q[n + 1]) && d <= BigRat(1, q[n + 1]);
      ++checked;
    }
  }
  return {ok, "q_k exact to depth 20 and best-approximation bounds exact at " + std::to_string(checked) + " depths"};
}

// q_{i+1} <= q_i^2 (i = m..n-1) and q_m^8 >= q_n >= q_m^2, in integers (A = 2).
bool own_cd_bridge(const std::vector<BigInt>& q, int m, int n) {
  for (int i = m; i < n; ++i)
    if (q[i + 1] > q[i] * q[i]) return false;
  return ipow(q[m], 8) >= q[n] && q[n] >= q[m] * q[m];
}

Outcome c2_bridges() {
  bool ok = true;
  std::string sizes;
  for (const auto& [spec, depth] : {std::pair<const char*, int>{"golden", 200}, {"liouville", 8}}) {
    const ContinuedFraction cf = expand(Alpha::parse(spec), depth);
    std::vector<BigInt> a{0};
    for (int k = 1; k <= depth; ++k) {
      if (std::string(spec) == "golden")
        a.push_back(1);
      else
        a.push_back(ipow(BigInt(10), 1 << (k - 1)));  // 10^(2^(k-1))
    }
    const auto q = q_from_a(a, depth);
    for (int k = 0; k <= depth; ++k) ok = ok && cf.q[k] == q[k];
    if (std::string(spec) == "liouville")
      for (int k = 1; k <= depth; ++k) ok = ok && a[k] >= ipow(BigInt(10), k);
    const BridgeSelection sel = select_bridges(cf, 2.0);
    ok = ok && !sel.Q.empty() && sel.Q[0] == 1 && sel.certified >= 1;
    for (int k = 0; k < sel.certified; ++k) {
      const int n = sel.index[k], m = sel.index[k + 1];
      const BigInt &Q = q[n], &Qb = q[n + 1], &Qn = q[m];
      ok = ok && sel.Q[k] == Q && sel.Qbar[k] == Qb;
      ok = ok && Qn <= ipow(Qb, 16) && Qn >= Q * Q;
      if (m + 1 <= depth) ok = ok && q[m + 1] >= Qb * Qb;
      bool alt = Qb >= Q * Q;
      if (!alt && k > 0) alt = own_cd_bridge(q, sel.index[k - 1] + 1, n) && own_cd_bridge(q, n, m);
      ok = ok && alt;
    }
    sizes += std::string(spec) + " " + std::to_string(sel.Q.size()) + " bridges (" + std::to_string(sel.certified) +
             " linked); ";
  }
  return {ok, sizes + "all inequalities re-derived in integers"};
}

Outcome c3_algebra() {
  const BasisPtr b = SeriesBasis::uniform(9, 64);
  const BasisPtr one = SeriesBasis::from_grid({0.4}, 64);
  std::mt19937_64 g(301);
  double worst = 0.0, own_worst = 0.0, agree = 0.0;
  for (const auto& w : {WeightFunction::make(WeightFamily::Analytic), WeightFunction::make(WeightFamily::Gevrey, 0.5)}) {
    const NormContext c = ctx(w, 0.1);
    std::uniform_real_distribution<double> dec(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const FourierSeries f = random_poly(b, 1 + i % 24, g, dec(g)), h = random_poly(b, 1 + (7 * i) % 24, g, dec(g));
      worst = std::max(worst, norm_r(multiply(f, h), c) / (norm_r(f, c) * norm_r(h, c)));
      // single row: naive convolution and hand-summed norms
      const FourierSeries f1 = random_poly(one, 1 + i % 24, g, dec(g)), h1 = random_poly(one, 1 + (5 * i) % 24, g, dec(g));
      FourierSeries p(one, f1.kmax() + h1.kmax());
      for (int k = -f1.kmax(); k <= f1.kmax(); ++k)
        for (int l = -h1.kmax(); l <= h1.kmax(); ++l) p.at(0, k + l) += f1.coeff(0, k) * h1.coeff(0, l);
      own_worst = std::max(own_worst, row_norm(p, 0, w, 0.1) / (row_norm(f1, 0, w, 0.1) * row_norm(h1, 0, w, 0.1)));
      const FourierSeries lp = multiply(f1, h1);
      for (int k = -p.kmax(); k <= p.kmax(); ++k) agree = std::max(agree, std::abs(lp.coeff(0, k) - p.coeff(0, k)));
    }
  }
  const bool ok = worst <= 1 + 1e-10 && own_worst <= 1 + 1e-10 && agree <= 1e-14;
  return {ok, fmt("max ||fg||/(||f|| ||g||) = %.4g (library), %.4g (direct); product agreement %.2g", worst, own_worst, agree)};
}

Outcome c4_tail() {
  const BasisPtr b = SeriesBasis::from_grid({0.37}, 128);
  std::mt19937_64 g(401);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, lib_gap = 0.0;
  for (int i = 0; i < 100; ++i) {
    const WeightFunction w =
        i % 2 ? WeightFunction::make(WeightFamily::Gevrey, 0.5) : WeightFunction::make(WeightFamily::Analytic);
    const FourierSeries f = random_poly(b, 40 + i % 60, g, 0.5 * u(g));
    const long K = 8 + i % 24;
    const double r = 0.1, sigma = 0.01 + 0.04 * u(g);
    const double x = 2 * pi * K * (r - sigma);
    const double bound = std::exp(-sigma / r * own_gamma(w, x) * std::log(x)) * row_norm(f, 0, w, r);
    const double actual = row_norm(f, 0, w, r - sigma, K);
    worst = std::max(worst, actual / bound);
    const TailBound t = tail_bound(f, K, r, sigma, ctx(w, r, false));
    lib_gap = std::max(lib_gap, std::abs(t.actual - actual) / actual + std::abs(t.bound - bound) / bound);
  }
  return {worst <= 1 + 1e-12 && lib_gap <= 1e-12, fmt("max actual/bound = %.4g; library vs direct %.2g", worst, lib_gap)};
}

Outcome c5_solver() {
  const BasisPtr b = SeriesBasis::uniform(17, 256);
  const Alpha alpha = Alpha::parse("golden");
  const AlphaTable at(alpha, 256);
  // phases from an exact Fibonacci ratio, independent of AlphaTable
  const BigRat x = recurrence_ratio(1, 300);
  std::vector<double> fr(256);
  for (int k = 0; k < 256; ++k) fr[k] = frac_part(BigRat(k) * x).convert_to<double>();
  auto phase = [&](long k) { return std::polar(1.0, 2 * pi * (k >= 0 ? fr[k] : -fr[-k])); };
  std::mt19937_64 g(501);
  double worst_rel = 0.0, worst_bound = 0.0;
  int instances = 0, rows = 0;
  for (int i = 0; i < 50; ++i) {
    HomologicalInput in;
    in.l = 1 + i % 2;
    in.K = 8L << (i % 4);
    in.Qbar = 8;
    in.log_Q_next = std::log(5.0);
    in.gamma = 0.01;
    in.tau = 2.0;
    in.r = 0.05;
    in.r_tilde = 0.04;
    in.sigma = 0.01;
    in.eps0 = 1e-6;
    const WeightFunction w;
    if (i % 2 == 0) {
      in.B = FourierSeries(b, 0);
    } else {
      in.B = random_poly(b, 7, g, 0.3, true);
      for (std::size_t r = 0; r < b->size(); ++r) in.B.at(r, 0) = 0.0;
      in.B = (0.004 / norm_r(in.B, ctx(w, in.r))) * in.B;
    }
    in.b = random_poly(b, 3 + i % 5, g, 0.5);
    in.b = (1e-12 / norm_r(in.b, ctx(w, in.r_tilde))) * in.b;
    in.u = random_poly(b, static_cast<int>(in.K) + 4, g, 0.05);
    in.u = (1e-6 / norm_r(in.u, ctx(w, in.r_tilde))) * in.u;
    // rows in the Diophantine set, by direct scan
    std::vector<char> active(b->size(), 0);
    for (std::size_t r = 0; r < b->size(); ++r) {
      bool dc = true;
      const double lam = b->lambda[r];
      for (long k = -(in.K - 1); k <= in.K - 1 && dc; ++k)
        for (int l = 1; l <= 2 && dc; ++l) {
          if (k == 0 && l == 1) continue;
          const double v = l * lam - (k >= 0 ? fr[k] : -fr[-k]);
          dc = std::abs(v - std::round(v)) >= in.gamma / std::pow(std::labs(k) + l, in.tau);
        }
      active[r] = dc;
    }
    NormContext c = ctx(w, in.r);
    c.active = &active;
    const SolveResult res = solve_homological(in, at, c);
    ++instances;
    const int K = static_cast<int>(in.K), N = 2 * K - 1;
    for (std::size_t r = 0; r < b->size(); ++r) {
      if (!active[r]) continue;
      ++rows;
      Eigen::MatrixXcd A(N, N);
      Eigen::VectorXcd y(N);
      for (int i2 = 0; i2 < N; ++i2) {
        const long k = i2 - (K - 1);
        for (int j = 0; j < N; ++j) A(i2, j) = res.b_tilde.coeff(r, k - (j - (K - 1)));
        A(i2, i2) += std::polar(1.0, 2 * pi * in.l * res.lambda_tilde[r]) - phase(k);
        y(i2) = res.u_tilde.coeff(r, k);
      }
      const Eigen::VectorXcd sol = A.fullPivLu().solve(y);
      double diff = 0.0;
      for (int i2 = 0; i2 < N; ++i2) diff = std::max(diff, std::abs(sol(i2) - res.delta_tilde.coeff(r, i2 - (K - 1))));
      worst_rel = std::max(worst_rel, diff / sol.cwiseAbs().maxCoeff());
    }
    NormContext ct = ctx(w, in.r_tilde);
    ct.active = &active;
    const double bound = 32.0 / (in.gamma * in.gamma) * std::exp(2 * in.tau * in.tau * in.log_Q_next) * norm_r(in.u, ct);
    worst_bound = std::max(worst_bound, norm_r(res.delta, ct) / bound);
  }
  const bool ok = rows > 0 && worst_rel <= 1e-10 && worst_bound <= 1.0;
  return {ok, fmt("%g instances: max relative gap to full-pivot LU %.3g, max ||delta||/bound %.3g", instances, worst_rel,
                  worst_bound)};
}

Outcome c6_bequation() {
  const BasisPtr b = SeriesBasis::uniform(9, 64);
  const AlphaTable at(Alpha::parse("golden"), 64);
  const BigRat x = recurrence_ratio(1, 300);
  const double r0 = 0.1;
  const long Qbar_prev = 2, Qbar = 8;
  const double r = r0 / double(Qbar_prev * Qbar_prev), r_bar = 2 * r0 / double(Qbar * Qbar);
  const WeightFunction w;
  std::mt19937_64 g(601);
  std::uniform_real_distribution<double> u(0.01, 0.1);
  double worst_res = 0.0, worst_ratio = 0.0;
  for (int i = 0; i < 20; ++i) {
    FourierSeries B = random_poly(b, 2 + i % 14, g, 0.3, true);
    B = (u(g) / norm_r(B, ctx(w, r))) * B;
    const FourierSeries calB = solve_b_equation(B, Qbar, at);
    for (std::size_t row = 0; row < b->size(); ++row)
      for (long k = 1 - Qbar; k < Qbar; ++k) {
        if (k == 0) continue;
        const cplx e = std::polar(1.0, 2 * pi * frac_part(BigRat(k) * x).convert_to<double>());
        worst_res = std::max(worst_res, std::abs(calB.coeff(row, k) * (e - 1.0) + B.coeff(row, k)));
      }
    for (long k = Qbar; k <= calB.kmax(); ++k)
      for (std::size_t row = 0; row < b->size(); ++row) worst_res = std::max(worst_res, std::abs(calB.coeff(row, k)));
    const double actual = norm_r(exp_i(calB, 1), ctx(w, r_bar));
    const double bound = std::exp(8 * pi * pi * r0 * norm_r(B, ctx(w, r)));
    worst_ratio = std::max(worst_ratio, actual / bound);
  }
  return {worst_res <= 1e-14 && worst_ratio <= 1.0,
          fmt("coefficient residual %.3g; max ||e^{i2pi calB}||/bound %.4g over 20 B", worst_res, worst_ratio)};
}

Outcome c7_polar() {
  const BasisPtr b = SeriesBasis::uniform(5, 256);
  const WeightFunction w;
  std::mt19937_64 g(701);
  std::uniform_real_distribution<double> u(0.005, 0.1);
  double worst = 0.0, worst_imag = 0.0;
  for (int i = 0; i < 50; ++i) {
    FourierSeries G = random_poly(b, 1 + i % 12, g, 0.4);
    G = (u(g) / norm_r(G, ctx(w, 0.1))) * G;
    const PolarResult p = polar_decompose(G);
    for (std::size_t row = 0; row < b->size(); ++row)
      for (int t = 0; t < 4096; ++t) {
        const double th = t / 4096.0;
        const cplx rho = eval(p.rho, row, th), B = eval(p.B, row, th);
        worst_imag = std::max({worst_imag, std::abs(rho.imag()), std::abs(B.imag())});
        const cplx lhs = (1.0 + rho.real()) * std::polar(1.0, 2 * pi * (b->lambda[row] + B.real()));
        worst = std::max(worst, std::abs(lhs - (std::polar(1.0, 2 * pi * b->lambda[row]) + eval(G, row, th))));
      }
  }
  return {worst <= 1e-12 && worst_imag <= 1e-12,
          fmt("max pointwise reconstruction error %.3g on 4096 theta; max |Im rho|, |Im B| %.2g", worst, worst_imag)};
}

Outcome c8_divisors() {
  const Alpha alpha = Alpha::parse("golden");
  const ContinuedFraction cf = expand(alpha, 200);
  const BridgeSelection sel = select_bridges(cf, 2.0);
  const BasisPtr b = SeriesBasis::uniform(257, 64);
  const double gamma = 0.01, tau = 2.0;
  const BigInt num = numerator(alpha.lo()), den = denominator(alpha.lo());
  bool ok = sel.Q.size() >= 5;
  std::size_t scanned = 0, own_bad = 0, lib_bad = 0;
  double min_ratio = INFINITY;
  for (int n = 0; n <= 3 && ok; ++n) {
    const BigInt &Q = sel.Q[n + 1], &Qb = sel.Qbar[n + 1];
    const long K = static_cast<long>(boost::multiprecision::sqrt(Qb));
    const AlphaTable at(alpha, K + 1);
    DcSet dc;
    dc.gamma = gamma;
    dc.tau = tau;
    dc.K = K;
    dc.intervals = IntervalSet(0.25, 0.75);
    dc.intervals.subtract(resonance_zones(*b, {}, at, gamma, tau, 0, K + 1));
    const SmallDivisorReport rep = certify_small_divisor(dc, *b, alpha, Q, Qb);
    lib_bad += rep.violation_count;
    // own scan: frac(k alpha) from exact k * num mod den
    const double bound = 4 * gamma * std::exp(-tau * tau * log_big(Q));
    std::vector<double> fr(K + 1);
    BigInt acc = 0;
    for (long k = 0; k <= K; ++k) {
      if (k > 0) {
        acc += num;
        if (acc >= den) acc -= den;
      }
      fr[k] = BigRat(acc, den).convert_to<double>();
    }
    for (std::size_t row = 0; row < b->size(); ++row) {
      const double lam = b->lambda[row];
      if (!dc.intervals.contains(lam)) continue;
      for (long k = 1; k <= K; ++k)
        for (int l = 1; l <= 2; ++l)
          for (int sgn : {1, -1}) {
            const double v = l * lam - sgn * fr[k];
            const double d = 2 * std::abs(std::sin(pi * (v - std::round(v))));
            ++scanned;
            min_ratio = std::min(min_ratio, d / bound);
            if (d < bound) ++own_bad;
          }
    }
  }
  ok = ok && own_bad == 0 && lib_bad == 0;
  return {ok, fmt("%.0f divisors scanned for n = 0..3, min |e^{i2pi(l Omega - k alpha)} - 1| / bound = %.3g, violations %g",
                  double(scanned), min_ratio, double(own_bad + lib_bad))};
}

Outcome c9_one_step(const RunResult& res) {
  const RunConfig& c = res.cfg;
  bool ok = c.preset == "a" && c.epsilon == 1e-8 && c.gamma == 0.05 && c.tau == 2.0 && c.alpha == "golden" &&
            c.K_cap <= 256 && c.d_max == 4;
  ok = ok && res.levels.size() >= 2;
  if (!ok) return {false, "configuration does not match the criterion"};
  const LevelRow& l1 = res.levels[1];
  const double eps1 = res.schedule.eps(1);
  double contraction = 0.0, oracle = 0.0;
  std::size_t oracles = 0;
  for (const SubRecord& s : res.subs) {
    if (s.level != 0) continue;
    if (s.U_in > 0.0) contraction = std::max(contraction, s.U_out / s.U_in);
    if (s.oracle.run) {
      ++oracles;
      oracle = std::max(oracle, s.oracle.rel);
    }
  }
  ok = l1.U_norm <= eps1 && l1.W_norm <= std::sqrt(eps1) && contraction <= std::exp(-1.0) * 1.1 && oracles > 0 &&
       oracle <= 1e-10;
  return {ok, fmt("||U_1|| = %.3g <= eps_1 = %.3g; ||W_1|| = %.3g", l1.U_norm, eps1, l1.W_norm) +
                  fmt("; max U sub-step ratio %.3g; substitution oracle %.3g relative", contraction, oracle)};
}

Outcome c10_liouville(const RunResult& res) {
  const auto& L = res.levels;
  if (L.size() < 4) return {false, "fewer than 3 completed levels"};
  bool monotone = true;
  for (std::size_t n = 0; n + 1 < L.size(); ++n) {
    const bool at_floor = L[n].residual <= L[n].residual_floor || L[n + 1].residual <= L[n + 1].residual_floor;
    monotone = monotone && (L[n + 1].residual < L[n].residual || at_floor);
  }
  // independent residual of the final torus on a sample of active rows
  const double a = Alpha::parse(res.cfg.alpha, res.cfg.alpha_bits).to_double();
  double own = 0.0;
  const auto& act = res.active.back();
  for (std::size_t row = 0; row < res.basis->size(); row += 16) {
    if (!act[row]) continue;
    for (int t = 0; t < 256; ++t) {
      const double th = t / 256.0;
      const Vec2 k0{eval(res.torus.K1, row, th).real(), eval(res.torus.K2, row, th).real()};
      const Vec2 fk = apply_map(res.model, row, th, k0);
      const double d = std::hypot(fk.x1 - eval(res.torus.K1, row, th + a).real(), fk.x2 - eval(res.torus.K2, row, th + a).real());
      own = std::max(own, d);
    }
  }
  const double last = L[3].residual, first = L[0].residual;
  const bool agree = own <= last * (1 + 1e-6) + L[3].residual_floor;
  const bool ok = monotone && last <= 1e-2 * first && agree;
  return {ok, fmt("residual level 0 = %.3g, level 3 = %.3g (floor %.3g)", first, last, L[3].residual_floor) +
                  (monotone ? "; decreasing until the floor" : "; NOT monotone") +
                  fmt("; direct resample of the final torus %.3g", own)};
}

// Pointwise |P|^2 - |Q|^2 of the composed linear part, multiplied here.
double own_composition_det(const std::vector<Factor>& fs, const BasisPtr& b, const std::vector<char>& active) {
  double worst = 0.0;
  for (std::size_t row = 0; row < b->size(); row += 4) {
    if (!active[row]) continue;
    for (int t = 0; t < 64; ++t) {
      const double th = t / 64.0;
      cplx P = 1.0, Q = 0.0;
      for (const Factor& f : fs) {
        const cplx p = eval(f.P, row, th), q = eval(f.Q, row, th);
        // [[P, Q], [cQ, cP]] * [[p, q], [cq, cp]]
        const cplx nP = P * p + Q * std::conj(q), nQ = P * q + Q * std::conj(p);
        P = nP;
        Q = nQ;
        worst = std::max(worst, std::abs(std::norm(p) - std::norm(q) - 1.0));
      }
      worst = std::max(worst, std::abs(std::norm(P) - std::norm(Q) - 1.0));
    }
  }
  return worst;
}

Outcome c11_area(const std::vector<const RunResult*>& runs) {
  double lib = 0.0, own = 0.0;
  std::size_t factors = 0;
  for (const RunResult* r : runs) {
    lib = std::max({lib, r->factor_det_defect, r->composition_det_defect});
    own = std::max(own, own_composition_det(r->final_state.factors, r->basis, r->active.back()));
    factors += r->final_state.factors.size();
  }
  const BasisPtr b = SeriesBasis::uniform(9, 64);
  NormContext c;
  c.r = 0.1;
  const double model = check_area(make_model(Preset::Kick, 1e-3, b, 6, c), 32, 5, 0.2, 1).max_defect;
  const bool ok = factors > 0 && lib <= 1e-8 && own <= 1e-8 && model <= 1e-8;
  return {ok, fmt("%g factors: det defect %.3g (library), %.3g (direct composition)", double(factors), lib, own) +
                  fmt("; shear model map %.3g", model)};
}

double own_measure_bound(double gamma0, double tau) {
  double s1 = 0.0, s2 = 0.0;
  for (long n = 1; n <= 2000000; ++n) s1 += 1.0 / ((n + 2.0) * (n + 2.0));
  s1 += 1.0 / 2000002.5;  // integral tail
  for (long k = 1; k <= 2000000; ++k) s2 += std::pow(double(k), -tau);
  s2 += std::pow(2000000.5, 1 - tau) / (tau - 1);
  return 4 * gamma0 * s1 * s2;
}

Outcome c12_measure(const std::vector<const RunResult*>& runs) {
  const Alpha alpha = Alpha::parse("golden");
  const BasisPtr b = SeriesBasis::uniform(257, 64);
  const double gamma = 0.05, tau = 2.0;
  const long K = 200;
  const AlphaTable at(alpha, K);
  const double measured = resonance_zones(*b, {}, at, gamma, tau, 1, K).measure();
  const BigRat x = recurrence_ratio(1, 300);
  std::vector<std::pair<double, double>> z;
  for (long k = -(K - 1); k <= K - 1; ++k) {
    if (k == 0) continue;
    const double c = frac_part(BigRat(k) * x).convert_to<double>();
    for (int l = 1; l <= 2; ++l) {
      const double hw = gamma / std::pow(double(std::labs(k) + l), tau) / l;
      for (int m = -2; m <= 2; ++m) {
        const double lo = std::max((c + m) / l - hw, 0.25), hi = std::min((c + m) / l + hw, 0.75);
        if (hi > lo) z.emplace_back(lo, hi);
      }
    }
  }
  std::sort(z.begin(), z.end());
  double oracle = 0.0, lo = 0.0, hi = -1.0;
  for (const auto& [a, c] : z) {
    if (a > hi) {
      if (hi > lo) oracle += hi - lo;
      lo = a;
      hi = c;
    } else {
      hi = std::max(hi, c);
    }
  }
  if (hi > lo) oracle += hi - lo;
  bool ok = std::abs(measured - oracle) <= 1e-12;
  std::string runs_txt;
  for (const RunResult* r : runs) {
    const double bound = own_measure_bound(r->cfg.gamma, r->cfg.tau);
    const double total = r->measure.total;
    ok = ok && total <= 1.1 * bound && r->measure.monotone;
    runs_txt += fmt("; run total %.4g <= 1.1 x %.4g", total, bound);
  }
  return {ok, fmt("closed-form zones %.15g vs interval sum %.15g", measured, oracle) + runs_txt};
}

Outcome c13_determinism() {
  RunConfig c = preset_config("liouville_a");
  set_jobs(1);
  const std::string a = summary_csv(run(c));
  set_jobs(8);
  const std::string b = summary_csv(run(c));
  set_jobs(1);
  return {a == b && !a.empty(), a == b ? "summary.csv identical for 1 and 8 workers (" + std::to_string(a.size()) + " bytes)"
                                       : "summary.csv differs between 1 and 8 workers"};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %-16s %s  %s (%.1fs)\n", id, name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), s);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  };

  report(1, "cfrac", c1_cfrac);
  report(2, "bridges", c2_bridges);
  report(3, "banach_algebra", c3_algebra);
  report(4, "tail_bound", c4_tail);
  report(5, "solver_oracle", c5_solver);
  report(6, "b_equation", c6_bequation);
  report(7, "polar", c7_polar);
  report(8, "small_divisors", c8_divisors);

  RunConfig one = preset_config("golden_a");
  one.N_max = 1;
  one.oracle_stride = 16;
  RunResult golden1, liouville, golden3, kick;
  report(9, "one_kam_step", [&] {
    golden1 = run(one);
    return c9_one_step(golden1);
  });
  report(10, "liouville_run", [&] {
    liouville = run(preset_config("liouville_a"));
    return c10_liouville(liouville);
  });
  report(11, "area", [&] {
    golden3 = run(preset_config("golden_a"));
    kick = run(preset_config("kick_b"));
    return c11_area({&golden3, &kick, &liouville});
  });
  report(12, "measure", [&] { return c12_measure({&golden3, &liouville}); });
  report(13, "determinism", c13_determinism);

  std::printf("%d of 13 criteria passed\n", 13 - failed);
  return failed == 0 ? 0 : 1;
}
