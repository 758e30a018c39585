#include "verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "cfrac.hpp"
#include "errors.hpp"
#include "homological.hpp"
#include "kam.hpp"
#include "model.hpp"

namespace liokam {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string num(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

CheckRow flag_row(std::string name, bool ok, std::string note = {}) {
  return CheckRow{std::move(name), 1.0, ok ? 1.0 : 0.0, ok, true, std::move(note)};
}

NormContext ctx_at(const WeightFunction& w, double r) {
  NormContext c;
  c.weight = w;
  c.r = r;
  return c;
}

// frac(k alpha) from the lower endpoint of the exact enclosure; independent of AlphaTable.
double exact_frac(long k, const Alpha& a) {
  BigRat x = BigRat(k) * a.lo();
  BigInt fl = numerator(x) / denominator(x);
  if (x < 0 && fl * denominator(x) != numerator(x)) fl -= 1;
  return BigRat(x - BigRat(fl)).convert_to<double>();
}

// Complex Gaussian elimination with full pivoting on a dense n x n system.
std::vector<cplx> dense_solve(std::vector<cplx> a, std::vector<cplx> y, int n) {
  std::vector<int> col(n);
  for (int i = 0; i < n; ++i) col[i] = i;
  auto A = [&](int i, int j) -> cplx& { return a[static_cast<std::size_t>(i) * n + j]; };
  for (int c = 0; c < n; ++c) {
    int pr = c, pc = c;
    double best = -1.0;
    for (int i = c; i < n; ++i)
      for (int j = c; j < n; ++j)
        if (std::abs(A(i, j)) > best) {
          best = std::abs(A(i, j));
          pr = i;
          pc = j;
        }
    if (best == 0.0) throw ConditioningError("dense_solve: singular matrix");
    if (pr != c) {
      for (int j = 0; j < n; ++j) std::swap(A(pr, j), A(c, j));
      std::swap(y[pr], y[c]);
    }
    if (pc != c) {
      for (int i = 0; i < n; ++i) std::swap(A(i, pc), A(i, c));
      std::swap(col[pc], col[c]);
    }
    for (int i = c + 1; i < n; ++i) {
      const cplx f = A(i, c) / A(c, c);
      if (f == 0.0) continue;
      for (int j = c; j < n; ++j) A(i, j) -= f * A(c, j);
      y[i] -= f * y[c];
    }
  }
  std::vector<cplx> z(n);
  for (int i = n - 1; i >= 0; --i) {
    cplx s = y[i];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * z[j];
    z[i] = s / A(i, i);
  }
  std::vector<cplx> x(n);
  for (int i = 0; i < n; ++i) x[col[i]] = z[i];
  return x;
}

// ---- suites ----

void suite_weights(std::vector<CheckRow>& out) {
  struct Fam {
    const char* name;
    double param;
    bool h1_expected;  // false: fails near small arguments, reported only
  };
  const Fam fams[] = {{"analytic", 0.0, true}, {"gevrey", 0.5, true}, {"explogpow", 0.5, false}, {"logpow", 2.0, false}};
  std::vector<double> grid;
  for (int i = 0; i <= 512; ++i) grid.push_back(std::pow(10.0, 4.0 + 8.0 * i / 512.0));
  for (const Fam& f : fams) {
    const WeightFunction w = WeightFunction::parse(f.name, f.param);
    const std::string tag = std::string(f.name) + ":" + num(f.param);
    const HypothesisReport h1 = check_h1(w, 4096);
    CheckRow r1{"H1:" + tag, 0.0, h1.worst_margin, h1.pass, f.h1_expected, {}};
    if (!f.h1_expected)
      r1.note = "not subadditive at small arguments; worst pair (" + num(h1.worst_x) + ", " + num(h1.worst_y) + ")";
    out.push_back(r1);
    const HypothesisReport h2 = check_h2_monotone(w, grid);
    CheckRow r2{"H2:" + tag, 0.0, h2.worst_margin, h2.pass, true, "Gamma on [1e4, 1e12]"};
    out.push_back(r2);
  }
}

void suite_algebra(std::uint64_t seed, std::vector<CheckRow>& out) {
  const BasisPtr b = SeriesBasis::uniform(9, 64);
  for (const auto& [name, param] : {std::pair<const char*, double>{"analytic", 0.0}, {"gevrey", 0.5}}) {
    const NormContext ctx = ctx_at(WeightFunction::parse(name, param), 0.1);
    Sampler s(seed, 100);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const FourierSeries f = random_series(b, 1 + i % 24, s.uniform(0.0, 1.0), s);
      const FourierSeries g = random_series(b, 1 + (7 * i) % 24, s.uniform(0.0, 1.0), s);
      worst = std::max(worst, norm_r(multiply(f, g), ctx) / (norm_r(f, ctx) * norm_r(g, ctx)));
    }
    out.push_back(le_row(std::string("banach_algebra:") + name, worst, 1.0 + 1e-10));
  }
}

void suite_cfrac(std::vector<CheckRow>& out) {
  for (const char* spec : {"golden", "silver"}) {
    const Alpha a = Alpha::parse(spec);
    const ContinuedFraction cf = expand(a, 21);
    // golden: Fibonacci, silver (sqrt 2 - 1): Pell
    const int mult = std::string(spec) == "golden" ? 1 : 2;
    BigInt qm = 0, q = 1;
    bool same = true;
    for (int k = 0; k <= 20; ++k) {
      if (k > 0) {
        BigInt next = mult * q + qm;
        qm = q;
        q = next;
      }
      same = same && cf.q[k] == q;
    }
    out.push_back(flag_row(std::string("q_recurrence:") + spec, same, "depth 20, exact"));
    // 1/(q_n + q_{n+1}) < ||q_n alpha|| <= 1/q_{n+1}; n = 0 is skipped when
    // a_1 = 1, where ||alpha|| = 1 - alpha is not the convergent distance
    bool ok = true;
    for (int n = (cf.a[1] == 1 ? 1 : 0); n < 20; ++n) {
      const RatInterval d = small_divisor_exact(cf.q[n], a);
      ok = ok && d.lo > BigRat(1, cf.q[n] + cf.q[n + 1]) && d.hi <= BigRat(1, cf.q[n + 1]);
    }
    out.push_back(flag_row(std::string("best_approximation:") + spec, ok, "exact rationals"));
  }
}

void suite_bridges(std::vector<CheckRow>& out) {
  for (const auto& [spec, depth] : {std::pair<const char*, int>{"golden", 200}, {"liouville", 8}}) {
    const ContinuedFraction cf = expand(Alpha::parse(spec), depth);
    const BridgeSelection sel = select_bridges(cf, 2.0);
    const auto rows = verify_bridges(cf, sel);
    std::size_t bad = 0;
    for (const auto& r : rows) bad += r.pass ? 0 : 1;
    CheckRow row{std::string("bridge_conditions:") + spec, 0.0, static_cast<double>(bad), bad == 0, true,
                 std::to_string(sel.Q.size()) + " bridges, " + std::to_string(rows.size()) + " inequalities"};
    out.push_back(row);
  }
}

void suite_tail(std::uint64_t seed, std::vector<CheckRow>& out) {
  const BasisPtr b = SeriesBasis::uniform(9, 128);
  const NormContext ctx = ctx_at(WeightFunction::make(WeightFamily::Analytic), 0.1);
  Sampler s(seed, 200);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const FourierSeries f = random_series(b, 40 + i % 60, s.uniform(0.0, 0.5), s);
    const long K = 8 + i % 24;
    const double sigma = s.uniform(0.01, 0.05);
    const TailBound t = tail_bound(f, K, 0.1, sigma, ctx);
    worst = std::max(worst, t.actual / t.bound);
  }
  out.push_back(le_row("tail_bound_ratio", worst, 1.0 + 1e-12));
}

struct SolverCase {
  HomologicalInput in;
  std::vector<char> active;
};

SolverCase solver_case(const BasisPtr& b, const AlphaTable& at, Sampler& s, int i) {
  SolverCase c;
  HomologicalInput& in = c.in;
  in.l = 1 + i % 2;
  in.K = 8L << (i % 4);  // 8..64
  in.Qbar = 8;
  in.log_Q_next = std::log(5.0);
  in.gamma = 0.01;
  in.tau = 2.0;
  in.r = 0.05;
  in.r_tilde = 0.04;
  in.sigma = 0.01;
  in.eps0 = 1e-6;
  const NormContext ctx = ctx_at(WeightFunction::make(WeightFamily::Analytic), in.r);
  if (i % 2 == 0) {
    in.B = FourierSeries(b, 0);
  } else {
    in.B = random_series(b, 7, 0.3, s, true);
    for (std::size_t row = 0; row < b->size(); ++row) in.B.at(row, 0) = 0.0;
    in.B = (0.004 / norm_r(in.B, ctx)) * in.B;
  }
  in.b = random_series(b, 3 + i % 5, 0.5, s);
  in.b = (1e-12 / norm_r(in.b, ctx_at(ctx.weight, in.r_tilde))) * in.b;
  in.u = random_series(b, static_cast<int>(in.K) + 4, 0.05, s);
  in.u = (1e-6 / norm_r(in.u, ctx_at(ctx.weight, in.r_tilde))) * in.u;
  c.active.assign(b->size(), 0);
  for (std::size_t row = 0; row < b->size(); ++row)
    c.active[row] = dc_margin(b->lambda[row], at, in.gamma, in.tau, in.K - 1, true) >= 1.0;
  return c;
}

void suite_solver(std::uint64_t seed, std::vector<CheckRow>& out) {
  const BasisPtr b = SeriesBasis::uniform(17, 256);
  const Alpha alpha = Alpha::parse("golden");
  const AlphaTable at(alpha, 256);
  Sampler s(seed, 300);
  double worst_rel = 0.0, worst_bound = 0.0, worst_eq = 0.0;
  for (int i = 0; i < 50; ++i) {
    SolverCase c = solver_case(b, at, s, i);
    const HomologicalInput& in = c.in;
    NormContext ctx = ctx_at(WeightFunction::make(WeightFamily::Analytic), in.r);
    ctx.active = &c.active;
    const SolveResult res = solve_homological(in, at, ctx);
    const int K = static_cast<int>(in.K), N = 2 * K - 1;
    for (std::size_t row = 0; row < b->size(); ++row) {
      if (!c.active[row]) continue;
      const cplx e = std::polar(1.0, 2.0 * kPi * in.l * res.lambda_tilde[row]);
      std::vector<cplx> A(static_cast<std::size_t>(N) * N), y(N);
      for (int r = 0; r < N; ++r) {
        const long k = r - (K - 1);
        for (int cc = 0; cc < N; ++cc) A[static_cast<std::size_t>(r) * N + cc] = res.b_tilde.coeff(row, k - (cc - (K - 1)));
        A[static_cast<std::size_t>(r) * N + r] += e - std::polar(1.0, 2.0 * kPi * exact_frac(k, alpha));
        y[r] = res.u_tilde.coeff(row, k);
      }
      const std::vector<cplx> x = dense_solve(std::move(A), std::move(y), N);
      double diff = 0.0, mag = 0.0;
      for (int r = 0; r < N; ++r) {
        diff = std::max(diff, std::abs(x[r] - res.delta_tilde.coeff(row, r - (K - 1))));
        mag = std::max(mag, std::abs(x[r]));
      }
      if (mag > 0.0) worst_rel = std::max(worst_rel, diff / mag);

      // the original equation, pointwise, with the returned error term
      const double a = alpha.to_double();
      for (int t = 0; t < 64; ++t) {
        const double th = t / 64.0;
        const cplx lhs = std::polar(1.0, 2.0 * kPi * in.l * (b->lambda[row] + evaluate(in.B, row, th).real())) *
                             evaluate(res.delta, row, th) +
                         evaluate(in.b, row, th) * evaluate(res.delta, row, th) - evaluate(res.delta, row, th + a);
        const cplx rhs = evaluate(in.u, row, th) + evaluate(res.error_term, row, th);
        worst_eq = std::max(worst_eq, std::abs(lhs - rhs) / 1e-6);
      }
    }
    const NormContext crt = ctx_at(ctx.weight, in.r_tilde);
    const double bound = 32.0 / (in.gamma * in.gamma) * std::exp(2.0 * in.tau * in.tau * in.log_Q_next) * norm_r(in.u, crt);
    worst_bound = std::max(worst_bound, norm_r(res.delta, crt) / bound);
  }
  out.push_back(le_row("solver_dense_agreement", worst_rel, 1e-10));
  out.push_back(le_row("solver_delta_bound_ratio", worst_bound, 1.0));
  out.push_back(le_row("solver_equation_pointwise", worst_eq, 1e-9));
}

void suite_bequation(std::uint64_t seed, std::vector<CheckRow>& out) {
  const BasisPtr b = SeriesBasis::uniform(9, 64);
  const Alpha alpha = Alpha::parse("golden");
  const AlphaTable at(alpha, 64);
  const double r0 = 0.1;
  const long Qbar_prev = 2, Qbar = 8;
  const double r = r0 / static_cast<double>(Qbar_prev * Qbar_prev), r_bar = 2.0 * r0 / static_cast<double>(Qbar * Qbar);
  const NormContext ctx = ctx_at(WeightFunction::make(WeightFamily::Analytic), r);
  Sampler s(seed, 400);
  double worst_res = 0.0, worst_ratio = 0.0;
  for (int i = 0; i < 20; ++i) {
    FourierSeries B = random_series(b, 2 + i % 14, 0.3, s, true);
    B = (s.uniform(0.01, 0.1) / norm_r(B, ctx)) * B;
    const FourierSeries calB = solve_b_equation(B, Qbar, at);
    for (std::size_t row = 0; row < b->size(); ++row)
      for (long k = 1 - Qbar; k < Qbar; ++k) {
        if (k == 0) continue;
        const cplx lhs = calB.coeff(row, k) * (std::polar(1.0, 2.0 * kPi * exact_frac(k, alpha)) - 1.0);
        worst_res = std::max(worst_res, std::abs(lhs + B.coeff(row, k)));
      }
    const CheckRow row = b_equation_bound(B, calB, ctx, r_bar, r0);
    worst_ratio = std::max(worst_ratio, row.actual / row.bound);
  }
  out.push_back(le_row("b_equation_coefficient_residual", worst_res, 1e-14));
  out.push_back(le_row("b_equation_exponential_ratio", worst_ratio, 1.0));
}

void suite_polar(std::uint64_t seed, std::vector<CheckRow>& out) {
  const BasisPtr b = SeriesBasis::uniform(5, 256);
  const NormContext ctx = ctx_at(WeightFunction::make(WeightFamily::Analytic), 0.1);
  Sampler s(seed, 500);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    FourierSeries G = random_series(b, 1 + i % 12, 0.4, s);
    G = (s.uniform(0.005, 0.1) / norm_r(G, ctx)) * G;
    const PolarResult p = polar_decompose(G);
    for (std::size_t row = 0; row < b->size(); ++row)
      for (int t = 0; t < 4096; ++t) {
        const double th = t / 4096.0;
        const cplx lhs = (1.0 + evaluate(p.rho, row, th).real()) *
                         std::polar(1.0, 2.0 * kPi * (b->lambda[row] + evaluate(p.B, row, th).real()));
        const cplx rhs = std::polar(1.0, 2.0 * kPi * b->lambda[row]) + evaluate(G, row, th);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  }
  out.push_back(le_row("polar_pointwise", worst, 1e-12));
}

void suite_divisors(std::vector<CheckRow>& out) {
  const Alpha alpha = Alpha::parse("golden");
  const ContinuedFraction cf = expand(alpha, 200);
  const BridgeSelection sel = select_bridges(cf, 2.0);
  const BasisPtr b = SeriesBasis::uniform(257, 64);
  const double gamma = 0.01, tau = 2.0;
  for (int n = 0; n <= 3; ++n) {
    if (n + 1 >= static_cast<int>(sel.Qbar.size())) {
      out.push_back(flag_row("small_divisors:n=" + std::to_string(n), false, "bridge list too short"));
      continue;
    }
    const BigInt& Q = sel.Q[n + 1];
    const BigInt& Qb = sel.Qbar[n + 1];
    const long K = static_cast<long>(boost::multiprecision::sqrt(Qb));
    const AlphaTable at(alpha, K + 1);
    DcSet dc;
    dc.gamma = gamma;
    dc.tau = tau;
    dc.K = K;
    dc.intervals = IntervalSet(0.25, 0.75);
    dc.intervals.subtract(resonance_zones(*b, {}, at, gamma, tau, 0, K + 1));
    const SmallDivisorReport rep = certify_small_divisor(dc, *b, alpha, Q, Qb);
    CheckRow row{"small_divisors:n=" + std::to_string(n), rep.bound, rep.min_value, rep.pass, true,
                 std::to_string(rep.checked) + " divisors, " + std::to_string(rep.violation_count) + " violations"};
    out.push_back(row);
  }
}

void suite_area(std::vector<CheckRow>& out) {
  const BasisPtr b = SeriesBasis::uniform(9, 64);
  const NormContext ctx = ctx_at(WeightFunction::make(WeightFamily::Analytic), 0.1);
  const SkewMap zero = make_model(Preset::Zero, 0.0, b, 4, ctx);
  out.push_back(le_row("area:zero", check_area(zero, 32, 5, 0.2, 1).max_defect, 1e-10));
  const SkewMap kick = make_model(Preset::Kick, 1e-3, b, 6, ctx);
  out.push_back(le_row("area:kick", check_area(kick, 32, 5, 0.2, 1).max_defect, 1e-8));
  const SkewMap stress = make_model(Preset::Stress, 1e-3, b, 6, ctx);
  out.push_back(le_row("area:stress", check_area(stress, 32, 5, 0.2, 1).max_defect, 1e-8));
  const double eps = 1e-3;
  const SkewMap bad = make_model(Preset::NonSymplectic, eps, b, 4, ctx);
  const double d = check_area(bad, 32, 5, 0.2, 1).max_defect;
  out.push_back(le_row("area:nonsymplectic_defect_over_eps_minus_1", std::fabs(d / eps - 1.0), 1e-3));
}

void suite_model(std::vector<CheckRow>& out) {
  const BasisPtr b = SeriesBasis::uniform(5, 64);
  const NormContext ctx = ctx_at(WeightFunction::make(WeightFamily::Analytic), 0.1);
  for (Preset p : {Preset::Forcing, Preset::Kick, Preset::Stress}) {
    const SkewMap map = make_model(p, 1e-3, b, 6, ctx);
    const Su11Form f = conjugate_to_su11(map);
    double worst = 0.0;
    Sampler s(7, 600);
    for (std::size_t row = 0; row < b->size(); ++row)
      for (int t = 0; t < 16; ++t) {
        const double th = t / 16.0;
        // |x| < s/2 with s = 0.5
        const double rad = s.uniform(0.0, 0.25), ang = s.uniform(0.0, 1.0);
        const Vec2 x{rad * std::cos(2.0 * kPi * ang), rad * std::sin(2.0 * kPi * ang)};
        const Vec2 y = apply_map(map, row, th, x);
        const cplx v(x.x1 / std::sqrt(2.0), x.x2 / std::sqrt(2.0));
        const cplx Fv = cplx(y.x1, y.x2) / std::sqrt(2.0);
        const cplx model = f.A[row] * v + evaluate(f.U.v, row, th) + evaluate(f.W.a, row, th) * v +
                           evaluate(f.W.b, row, th) * std::conj(v) + evaluate(f.R, row, th, v, std::conj(v));
        worst = std::max(worst, std::abs(Fv - model));
      }
    out.push_back(le_row("su11_form_pointwise:" + preset_name(p), worst, 1e-10));
  }
}

void suite_measure(std::vector<CheckRow>& out) {
  const Alpha alpha = Alpha::parse("golden");
  const BasisPtr b = SeriesBasis::uniform(257, 64);
  const double gamma = 0.01, tau = 2.0;
  const long K = 200;
  const AlphaTable at(alpha, K);
  const double measured = resonance_zones(*b, {}, at, gamma, tau, 1, K).measure();
  // interval-sum oracle: every zone clipped to [1/4, 3/4], merged by a sort-and-sweep
  std::vector<std::pair<double, double>> z;
  for (long k = -(K - 1); k <= K - 1; ++k) {
    if (k == 0) continue;
    const double c = exact_frac(k, alpha);
    for (int l = 1; l <= 2; ++l) {
      const double hw = gamma / std::pow(static_cast<double>(std::labs(k) + l), tau) / l;
      for (int m = -2; m <= 2; ++m) {
        const double ctr = (c + m) / l;
        const double lo = std::max(ctr - hw, 0.25), hi = std::min(ctr + hw, 0.75);
        if (hi > lo) z.push_back({lo, hi});
      }
    }
  }
  std::sort(z.begin(), z.end());
  double total = 0.0, cur_lo = 0.0, cur_hi = -1.0;
  for (const auto& [lo, hi] : z) {
    if (lo > cur_hi) {
      if (cur_hi > cur_lo) total += cur_hi - cur_lo;
      cur_lo = lo;
      cur_hi = hi;
    } else {
      cur_hi = std::max(cur_hi, hi);
    }
  }
  if (cur_hi > cur_lo) total += cur_hi - cur_lo;
  out.push_back(le_row("zones_vs_interval_sum", std::fabs(measured - total), 1e-12));
}

void suite_kam(const RunConfig& base, std::vector<CheckRow>& out) {
  struct Case {
    const char* name;
    RunConfig cfg;
  };
  RunConfig a = base;
  a.alpha = "golden";
  a.preset = "a";
  a.epsilon = 1e-8;
  a.gamma = 0.05;
  a.tau = 2.0;
  a.d_max = 4;
  a.K_cap = 256;
  a.K_support = 512;
  a.lambda_points = 129;
  a.N_max = 1;
  a.A = 2.0;
  a.T = 80.0;
  a.force = false;
  a.oracle_stride = 16;
  RunConfig kb = a;
  kb.preset = "b";
  kb.epsilon = 1e-6;
  kb.d_max = 6;
  kb.K_cap = 64;
  kb.K_support = 256;
  kb.lambda_points = 65;
  kb.N_max = 2;
  kb.substeps_cap = 8;
  kb.force = true;
  for (const Case& c : {Case{"a", a}, Case{"b", kb}}) {
    const RunResult res = run(c.cfg);
    double oracle = 0.0, contraction = 0.0;
    std::size_t oracles = 0;
    for (const SubRecord& s : res.subs) {
      if (s.oracle.run) {
        oracle = std::max(oracle, s.oracle.rel);
        ++oracles;
      }
      if (s.U_in > 0.0) contraction = std::max(contraction, s.U_out / s.U_in);
    }
    const std::string tag = std::string(":") + c.name;
    CheckRow orow = le_row("substitution_oracle" + tag, oracle, 1e-10);
    orow.note = std::to_string(oracles) + " sub-steps";
    if (oracles == 0) orow.pass = false;
    out.push_back(orow);
    out.push_back(le_row("U_substep_contraction" + tag, contraction, std::exp(-1.0) * 1.1));
    out.push_back(le_row("factor_det_defect" + tag, res.factor_det_defect, 1e-8));
    out.push_back(le_row("composition_det_defect" + tag, res.composition_det_defect, 1e-8));
  }
}

}  // namespace

Sampler::Sampler(std::uint64_t seed, std::uint64_t stream)
    : ld_(1, splitmix(splitmix(seed) ^ (stream * 0x9e3779b97f4a7c15ULL))) {}

cplx Sampler::centered() {
  const double x = uniform() - 0.5;
  return {x, uniform() - 0.5};
}

FourierSeries random_series(const BasisPtr& b, int kmax, double decay, Sampler& s, bool real) {
  FourierSeries f(b, kmax);
  for (int k = -kmax; k <= kmax; ++k) {
    if (real && k < 0) continue;
    const double w = std::exp(-decay * std::abs(k));
    const cplx x = s.centered(), y = s.centered();
    for (std::size_t i = 0; i < b->size(); ++i) {
      cplx c = w * (x + y * (b->lambda[i] - 0.5));
      if (real && k == 0) c = c.real();
      f.at(i, k) = c;
      if (real && k > 0) f.at(i, -k) = std::conj(c);
    }
  }
  return f;
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> s = {"weights", "algebra",  "cfrac", "bridges", "tail",    "solver", "bequation",
                                             "polar",   "divisors", "area",  "model",   "measure", "kam"};
  return s;
}

std::vector<VerifyRow> run_verify(const std::string& suite, const RunConfig& cfg) {
  const auto& all = verify_suites();
  if (suite != "all" && std::find(all.begin(), all.end(), suite) == all.end())
    throw ConfigError("verify: unknown suite '" + suite + "'");
  std::vector<VerifyRow> rows;
  for (const std::string& name : all) {
    if (suite != "all" && suite != name) continue;
    std::vector<CheckRow> out;
    if (name == "weights") suite_weights(out);
    else if (name == "algebra") suite_algebra(cfg.seed, out);
    else if (name == "cfrac") suite_cfrac(out);
    else if (name == "bridges") suite_bridges(out);
    else if (name == "tail") suite_tail(cfg.seed, out);
    else if (name == "solver") suite_solver(cfg.seed, out);
    else if (name == "bequation") suite_bequation(cfg.seed, out);
    else if (name == "polar") suite_polar(cfg.seed, out);
    else if (name == "divisors") suite_divisors(out);
    else if (name == "area") suite_area(out);
    else if (name == "model") suite_model(out);
    else if (name == "measure") suite_measure(out);
    else if (name == "kam") suite_kam(cfg, out);
    for (auto& r : out) rows.push_back({name, std::move(r)});
  }
  return rows;
}

std::string verify_csv(const std::vector<VerifyRow>& rows) {
  std::ostringstream os;
  os << "suite,check,bound,actual,pass,binding,note\n";
  for (const auto& r : rows)
    os << r.suite << ',' << r.row.check << ',' << num(r.row.bound) << ',' << num(r.row.actual) << ','
       << (r.row.pass ? 1 : 0) << ',' << (r.row.binding ? 1 : 0) << ',' << csv_field(r.row.note) << '\n';
  return os.str();
}

}  // namespace liokam
