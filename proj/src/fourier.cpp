#include "fourier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "fft.hpp"
#include "parallel.hpp"

namespace liokam {

namespace {

constexpr double kDrop = 1e-16;
constexpr double kSeriesTol = 1e-16;
constexpr int kSeriesCap = 64;

void require_same(const FourierSeries& f, const FourierSeries& g, const char* op) {
  if (!f.valid() || !g.valid()) throw TypeError(std::string(op) + ": uninitialized series");
  if (f.basis() != g.basis() && f.basis()->lambda != g.basis()->lambda)
    throw TypeError(std::string(op) + ": lambda grids differ");
}

bool row_active(const NormContext& ctx, std::size_t i) {
  return !ctx.active || (*ctx.active)[i];
}

// Products grow the support; this keeps it finite. Per row, entries below
// kDrop times the row l1 mass are zeroed, then |k| > cap is clipped.
void drop_and_clip(FourierSeries& f) {
  const std::size_t n = f.rows();
  const int w = f.width();
  for (std::size_t i = 0; i < n; ++i) {
    cplx* r = f.row(i);
    double mass = 0.0;
    for (int j = 0; j < w; ++j) mass += std::abs(r[j]);
    const double thr = kDrop * mass;
    for (int j = 0; j < w; ++j)
      if (std::abs(r[j]) < thr) r[j] = 0.0;
  }
  const int cap = f.basis()->k_cap;
  if (f.kmax() > cap) f.resize_kmax(cap);
  f.trim();
}

}  // namespace

std::shared_ptr<const SeriesBasis> SeriesBasis::uniform(std::size_t n, int k_cap, double lo, double hi) {
  if (n == 0) throw ConfigError("lambda.points must be positive");
  auto b = std::make_shared<SeriesBasis>();
  b->k_cap = k_cap;
  b->lambda.resize(n);
  if (n == 1) {
    b->lambda[0] = 0.5 * (lo + hi);
  } else {
    for (std::size_t i = 0; i < n; ++i) b->lambda[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  return b;
}

std::shared_ptr<const SeriesBasis> SeriesBasis::from_grid(std::vector<double> grid, int k_cap) {
  if (grid.empty()) throw ConfigError("empty lambda grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ConfigError("lambda grid must be ascending");
  auto b = std::make_shared<SeriesBasis>();
  b->lambda = std::move(grid);
  b->k_cap = k_cap;
  return b;
}

cplx PhaseTable::operator()(long k) const {
  long a = k < 0 ? -k : k;
  if (a >= static_cast<long>(e_.size())) throw InternalError("phase table too short for mode " + std::to_string(k));
  return k < 0 ? std::conj(e_[a]) : e_[a];
}

FourierSeries::FourierSeries(BasisPtr b, int kmax) : basis_(std::move(b)), kmax_(kmax) {
  if (!basis_) throw TypeError("series needs a basis");
  if (kmax < 0) throw InternalError("negative kmax");
  c_.assign(basis_->size() * width(), cplx{});
}

FourierSeries FourierSeries::constant(BasisPtr b, cplx c) {
  FourierSeries f(std::move(b), 0);
  for (std::size_t i = 0; i < f.rows(); ++i) f.at(i, 0) = c;
  return f;
}

FourierSeries FourierSeries::per_lambda(BasisPtr b, const std::vector<cplx>& v) {
  FourierSeries f(std::move(b), 0);
  if (v.size() != f.rows()) throw TypeError("per_lambda: size mismatch");
  for (std::size_t i = 0; i < f.rows(); ++i) f.at(i, 0) = v[i];
  return f;
}

FourierSeries FourierSeries::mode(BasisPtr b, int k, cplx c) {
  FourierSeries f(std::move(b), std::abs(k));
  for (std::size_t i = 0; i < f.rows(); ++i) f.at(i, k) = c;
  return f;
}

void FourierSeries::resize_kmax(int kmax) {
  if (kmax == kmax_) return;
  FourierSeries g(basis_, kmax);
  int m = std::min(kmax, kmax_);
  for (std::size_t i = 0; i < rows(); ++i)
    for (int k = -m; k <= m; ++k) g.at(i, k) = at(i, k);
  *this = std::move(g);
}

void FourierSeries::trim() {
  int top = 0;
  for (std::size_t i = 0; i < rows(); ++i) {
    const cplx* r = row(i);
    for (int k = kmax_; k > top; --k)
      if (r[k + kmax_] != cplx{} || r[-k + kmax_] != cplx{}) {
        top = k;
        break;
      }
  }
  resize_kmax(top);
}

bool FourierSeries::is_zero() const {
  for (const auto& z : c_)
    if (z != cplx{}) return false;
  return true;
}

FourierSeries operator+(const FourierSeries& f, const FourierSeries& g) {
  require_same(f, g, "add");
  FourierSeries h(f.basis(), std::max(f.kmax(), g.kmax()));
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (int k = -f.kmax(); k <= f.kmax(); ++k) h.at(i, k) += f.coeff(i, k);
    for (int k = -g.kmax(); k <= g.kmax(); ++k) h.at(i, k) += g.coeff(i, k);
  }
  return h;
}

FourierSeries operator-(const FourierSeries& f) {
  FourierSeries h = f;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.width(); ++j) h.row(i)[j] = -h.row(i)[j];
  return h;
}

FourierSeries operator-(const FourierSeries& f, const FourierSeries& g) {
  require_same(f, g, "sub");
  FourierSeries h(f.basis(), std::max(f.kmax(), g.kmax()));
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (int k = -f.kmax(); k <= f.kmax(); ++k) h.at(i, k) += f.coeff(i, k);
    for (int k = -g.kmax(); k <= g.kmax(); ++k) h.at(i, k) -= g.coeff(i, k);
  }
  return h;
}

FourierSeries operator*(cplx s, const FourierSeries& f) {
  FourierSeries h = f;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.width(); ++j) h.row(i)[j] *= s;
  return h;
}

FourierSeries scale_rows(const FourierSeries& f, const std::vector<cplx>& s) {
  if (s.size() != f.rows()) throw TypeError("scale_rows: size mismatch");
  FourierSeries h = f;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.width(); ++j) h.row(i)[j] *= s[i];
  return h;
}

FourierSeries add_constant(const FourierSeries& f, cplx c) {
  FourierSeries h = f;
  for (std::size_t i = 0; i < h.rows(); ++i) h.at(i, 0) += c;
  return h;
}

FourierSeries multiply(const FourierSeries& f, const FourierSeries& g) {
  require_same(f, g, "multiply");
  if (f.is_zero() || g.is_zero()) return FourierSeries(f.basis(), 0);
  const int kf = f.kmax(), kg = g.kmax();
  // only |k1 + k2| <= k_cap survives the clip, so nothing outside is formed
  const int kh = std::min(kf + kg, f.basis()->k_cap);
  FourierSeries h(f.basis(), kh);
  const int wf = f.width(), wg = g.width();
  auto do_row = [&](std::size_t i) {
    const cplx* a = f.row(i);
    const cplx* b = g.row(i);
    cplx* out = h.row(i);
    int lo = 0, hi = wg - 1;
    while (lo <= hi && b[lo] == 0.0) ++lo;
    while (hi >= lo && b[hi] == 0.0) --hi;
    if (lo > hi) return;
    // output slot of (j1, j2) is j1 + j2 - kf - kg + kh
    const int off = kh - kf - kg;
    for (int j1 = 0; j1 < wf; ++j1) {
      const double ar = a[j1].real(), ai = a[j1].imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const int j2lo = std::max(lo, -off - j1), j2hi = std::min(hi, 2 * kh - off - j1);
      cplx* o = out + j1 + off;
      for (int j2 = j2lo; j2 <= j2hi; ++j2) {
        const double br = b[j2].real(), bi = b[j2].imag();
        o[j2] += cplx(ar * br - ai * bi, ar * bi + ai * br);
      }
    }
  };
  const std::size_t work = static_cast<std::size_t>(wf) * wg;
  parallel_for(h.rows(), do_row, work > 4096 ? 1 : h.rows());
  drop_and_clip(h);
  return h;
}

FourierSeries operator*(const FourierSeries& f, const FourierSeries& g) { return multiply(f, g); }

FourierSeries conj_fn(const FourierSeries& f) {
  FourierSeries h(f.basis(), f.kmax());
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (int k = -f.kmax(); k <= f.kmax(); ++k) h.at(i, k) = std::conj(f.coeff(i, -k));
  return h;
}

FourierSeries shift(const FourierSeries& f, const PhaseTable& ph) {
  FourierSeries h = f;
  for (int k = -f.kmax(); k <= f.kmax(); ++k) {
    if (k == 0) continue;
    const cplx e = ph(k);
    for (std::size_t i = 0; i < h.rows(); ++i) h.at(i, k) *= e;
  }
  return h;
}

FourierSeries truncate(const FourierSeries& f, long K) {
  int top = static_cast<int>(std::min<long>(f.kmax(), std::max<long>(K - 1, 0)));
  FourierSeries h(f.basis(), top);
  if (K <= 0) return h;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (int k = -top; k <= top; ++k) h.at(i, k) = f.coeff(i, k);
  return h;
}

FourierSeries project_tail(const FourierSeries& f, long K) {
  FourierSeries h = f;
  long top = std::min<long>(f.kmax(), std::max<long>(K - 1, -1));
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (long k = -top; k <= top; ++k) h.at(i, static_cast<int>(k)) = 0.0;
  h.trim();
  return h;
}

std::vector<cplx> average(const FourierSeries& f) {
  std::vector<cplx> v(f.rows());
  for (std::size_t i = 0; i < f.rows(); ++i) v[i] = f.coeff(i, 0);
  return v;
}

double coeff_seminorm(const FourierSeries& f, long k, const NormContext& ctx) {
  if (!f.valid() || f.rows() == 0) throw ConfigError("norm over an empty lambda grid");
  const auto& lam = f.basis()->lambda;
  const std::size_t n = f.rows();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!row_active(ctx, i)) continue;
    double v = std::abs(f.coeff(i, k));
    if (ctx.lambda_derivative) {
      bool lo = i > 0 && row_active(ctx, i - 1);
      bool hi = i + 1 < n && row_active(ctx, i + 1);
      double d = 0.0;
      if (lo && hi)
        d = std::abs(f.coeff(i + 1, k) - f.coeff(i - 1, k)) / (lam[i + 1] - lam[i - 1]);
      else if (hi)
        d = std::abs(f.coeff(i + 1, k) - f.coeff(i, k)) / (lam[i + 1] - lam[i]);
      else if (lo)
        d = std::abs(f.coeff(i, k) - f.coeff(i - 1, k)) / (lam[i] - lam[i - 1]);
      v += d;
    }
    best = std::max(best, v);
  }
  return best;
}

double log_norm_r(const FourierSeries& f, const NormContext& ctx) {
  if (!f.valid() || f.rows() == 0) throw ConfigError("norm over an empty lambda grid");
  // log-sum-exp over modes; weights e^{Lambda(2 pi |k| r)} overflow for wide strips.
  std::vector<double> terms;
  terms.reserve(f.width());
  for (int k = -f.kmax(); k <= f.kmax(); ++k) {
    double c = coeff_seminorm(f, k, ctx);
    if (c == 0.0) continue;
    double lw = k == 0 ? 0.0 : ctx.weight.lambda(2.0 * std::numbers::pi * std::abs(k) * ctx.r);
    terms.push_back(std::log(c) + lw);
  }
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  double m = *std::max_element(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

double norm_r(const FourierSeries& f, const NormContext& ctx) { return std::exp(log_norm_r(f, ctx)); }

double analytic_norm(const FourierSeries& f, const NormContext& ctx) {
  double s = 0.0;
  for (int k = -f.kmax(); k <= f.kmax(); ++k) {
    double c = coeff_seminorm(f, k, ctx);
    if (c != 0.0) s += c * std::exp(2.0 * std::numbers::pi * std::abs(k) * ctx.r);
  }
  return s;
}

double sup_l1(const FourierSeries& f) {
  double best = 0.0;
  for (std::size_t i = 0; i < f.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < f.width(); ++j) s += std::abs(f.row(i)[j]);
    best = std::max(best, s);
  }
  return best;
}

double imag_defect(const FourierSeries& f) {
  double best = 0.0;
  for (std::size_t i = 0; i < f.rows(); ++i) {
    double s = 0.0;
    for (int k = -f.kmax(); k <= f.kmax(); ++k) s += std::abs(f.coeff(i, k) - std::conj(f.coeff(i, -k)));
    best = std::max(best, 0.5 * s);
  }
  return best;
}

double norm_r(const C2Vector& v, const NormContext& ctx) {
  // The second entry conj_fn(v) has the same coefficient moduli mirrored in
  // k, and the weights are even in k, so the maximum is the first entry.
  return norm_r(v.v, ctx);
}

double log_norm_r(const Su11Matrix& m, const NormContext& ctx) {
  return std::max(log_norm_r(m.a, ctx), log_norm_r(m.b, ctx));
}

double norm_r(const Su11Matrix& m, const NormContext& ctx) { return std::exp(log_norm_r(m, ctx)); }

FourierSeries exp_i(const FourierSeries& B, int l) {
  if (l != 1 && l != 2) throw DomainError("exp_i: l must be 1 or 2");
  const double defect = imag_defect(B);
  if (defect >= 1e-12) throw DomainError("exp_i: argument is not real-valued (imag defect " + std::to_string(defect) + ")");
  const double c = 2.0 * std::numbers::pi * l;
  if (B.kmax() == 0) {
    FourierSeries h(B.basis(), 0);
    for (std::size_t i = 0; i < h.rows(); ++i) h.at(i, 0) = std::polar(1.0, c * B.coeff(i, 0).real());
    return h;
  }
  // Scaling and squaring: the power series runs on X / 2^s with |X/2^s| <= 1/2.
  const double mag = c * sup_l1(B);
  int s = 0;
  while (mag / std::ldexp(1.0, s) > 0.5) ++s;
  FourierSeries X = cplx(0.0, c / std::ldexp(1.0, s)) * B;
  FourierSeries sum = FourierSeries::constant(B.basis(), 1.0);
  FourierSeries term = sum;
  int n = 1;
  for (;; ++n) {
    if (n > kSeriesCap) throw DomainError("exp_i: power series did not converge in 64 terms");
    term = (1.0 / n) * multiply(term, X);
    sum = sum + term;
    if (sup_l1(term) < kSeriesTol) break;
  }
  for (int j = 0; j < s; ++j) sum = multiply(sum, sum);
  return sum;
}

Su11Matrix exp_su11_parts(const Su11Matrix& D) {
  if (!D.a.is_zero()) throw DomainError("exp_su11: diagonal of D must vanish");
  const auto& b = D.b.basis();
  // D^2 = |d|^2 I with |d|^2 represented by s = d * conj_fn(d).
  FourierSeries s = multiply(D.b, conj_fn(D.b));
  FourierSeries P1(b, 0);   // cosh part minus 1
  FourierSeries Qf1(b, 0);  // sinh(x)/x minus 1
  FourierSeries sp = FourierSeries::constant(b, 1.0);  // s^n
  double fact_even = 1.0, fact_odd = 1.0;
  for (int n = 1;; ++n) {
    if (n > kSeriesCap) throw DomainError("exp_su11: power series did not converge in 64 terms");
    sp = multiply(sp, s);
    if (sp.is_zero()) break;
    fact_even *= (2.0 * n - 1.0) * (2.0 * n);
    fact_odd *= (2.0 * n) * (2.0 * n + 1.0);
    FourierSeries te = (1.0 / fact_even) * sp;
    P1 = P1 + te;
    Qf1 = Qf1 + (1.0 / fact_odd) * sp;
    if (sup_l1(te) < kSeriesTol) break;
  }
  return Su11Matrix{P1, multiply(Qf1, D.b)};
}

Su11Matrix exp_su11(const Su11Matrix& D) {
  Su11Matrix e = exp_su11_parts(D);
  return Su11Matrix{add_constant(e.a, 1.0), e.b + D.b};
}

FourierSeries reciprocal(const FourierSeries& f) {
  std::vector<cplx> c0 = average(f);
  std::vector<cplx> inv(c0.size());
  for (std::size_t i = 0; i < c0.size(); ++i) {
    if (std::abs(c0[i]) == 0.0) throw DomainError("reciprocal: zero average");
    inv[i] = 1.0 / c0[i];
  }
  FourierSeries rest = f;
  for (std::size_t i = 0; i < rest.rows(); ++i) rest.at(i, 0) = 0.0;
  FourierSeries x = -scale_rows(rest, inv);  // 1/f = (1/c0) sum x^n
  if (sup_l1(x) >= 0.5) throw DomainError("reciprocal: perturbation too large for a Neumann series");
  FourierSeries sum = FourierSeries::constant(f.basis(), 1.0);
  FourierSeries term = sum;
  for (int n = 1;; ++n) {
    if (n > kSeriesCap) throw DomainError("reciprocal: Neumann series did not converge in 64 terms");
    term = multiply(term, x);
    sum = sum + term;
    if (sup_l1(term) < kSeriesTol || term.is_zero()) break;
  }
  return scale_rows(sum, inv);
}

Su11Matrix identity(const BasisPtr& b) {
  return Su11Matrix{FourierSeries::constant(b, 1.0), FourierSeries(b, 0)};
}

Su11Matrix operator+(const Su11Matrix& x, const Su11Matrix& y) { return {x.a + y.a, x.b + y.b}; }
Su11Matrix operator-(const Su11Matrix& x, const Su11Matrix& y) { return {x.a - y.a, x.b - y.b}; }

Su11Matrix operator*(const Su11Matrix& x, const Su11Matrix& y) {
  // [[a,b],[b~,a~]] [[c,d],[d~,c~]] = [[ac + b d~, ad + b c~], ...]
  return {multiply(x.a, y.a) + multiply(x.b, conj_fn(y.b)),
          multiply(x.a, y.b) + multiply(x.b, conj_fn(y.a))};
}

Su11Matrix shift(const Su11Matrix& x, const PhaseTable& ph) { return {shift(x.a, ph), shift(x.b, ph)}; }

C2Vector apply(const Su11Matrix& x, const C2Vector& v) {
  return C2Vector{multiply(x.a, v.v) + multiply(x.b, conj_fn(v.v))};
}

cplx evaluate(const FourierSeries& f, std::size_t row, double theta) {
  cplx s{};
  const cplx* r = f.row(row);
  for (int k = -f.kmax(); k <= f.kmax(); ++k) {
    if (r[k + f.kmax()] == cplx{}) continue;
    s += r[k + f.kmax()] * std::polar(1.0, 2.0 * std::numbers::pi * k * theta);
  }
  return s;
}

std::vector<cplx> sample_row(const FourierSeries& f, std::size_t row, int n) {
  std::vector<cplx> out(n);
  if (n > 2 * f.kmax()) {
    fft::synthesize(f.row(row), f.kmax(), n, out.data());
    return out;
  }
  for (int j = 0; j < n; ++j) out[j] = evaluate(f, row, static_cast<double>(j) / n);
  return out;
}

void set_row_from_samples(FourierSeries& f, std::size_t row, const std::vector<cplx>& x) {
  fft::analyze(x.data(), static_cast<int>(x.size()), f.kmax(), f.row(row));
}

namespace {
void put_double(std::ostream& os, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  os.write(buf, res.ptr - buf);
}

double parse_double(const std::string& tok, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ConfigError("coefficient dump line " + std::to_string(line) + ": bad number '" + tok + "'");
  return v;
}
}  // namespace

void dump(const FourierSeries& f, std::ostream& os) {
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (int k = -f.kmax(); k <= f.kmax(); ++k) {
      cplx c = f.coeff(i, k);
      os << i << ' ' << k << ' ';
      put_double(os, c.real());
      os << ' ';
      put_double(os, c.imag());
      os << '\n';
    }
}

FourierSeries load(const BasisPtr& b, std::istream& is) {
  struct Entry {
    std::size_t row;
    long k;
    cplx c;
  };
  std::vector<Entry> entries;
  long top = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string a, k, re, im;
    if (!(ss >> a >> k >> re >> im)) throw ConfigError("coefficient dump line " + std::to_string(lineno) + ": expected 4 fields");
    long row = std::stol(a);
    if (row < 0 || static_cast<std::size_t>(row) >= b->size())
      throw ConfigError("coefficient dump line " + std::to_string(lineno) + ": lambda index out of range");
    long kk = std::stol(k);
    top = std::max(top, std::abs(kk));
    entries.push_back({static_cast<std::size_t>(row), kk, cplx(parse_double(re, lineno), parse_double(im, lineno))});
  }
  if (top > b->k_cap) throw ConfigError("coefficient dump exceeds the support cap");
  FourierSeries f(b, static_cast<int>(top));
  for (const auto& e : entries) f.at(e.row, static_cast<int>(e.k)) = e.c;
  return f;
}

}  // namespace liokam
