#include "cfrac.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace liokam {

namespace mp = boost::multiprecision;
using BigFloat = mp::cpp_bin_float_100;

namespace {

BigInt floor_rat(const BigRat& x) {
  BigInt n = mp::numerator(x), d = mp::denominator(x);  // d > 0
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

bool is_integer_text(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt parse_big(const std::string& s, const std::string& what) {
  if (!is_integer_text(s)) throw ConfigError("alpha: bad integer '" + s + "' in " + what);
  return BigInt(s);
}

// sqrt(n) * 2^bits lies in [s, s + 1)
BigInt scaled_isqrt(const BigInt& n, unsigned bits) { return mp::sqrt(BigInt(n << (2 * bits))); }

}  // namespace

Alpha Alpha::parse(const std::string& raw, unsigned bits) {
  Alpha a;
  a.spec_ = raw;
  a.bits_ = bits < 64 ? 64 : bits;
  std::string s = raw;
  if (s == "golden") {
    a.kind_ = Kind::Golden;
  } else if (s == "silver") {
    a.kind_ = Kind::Silver;
  } else if (s.rfind("sqrt:", 0) == 0) {
    a.kind_ = Kind::Sqrt;
    std::string t = s.substr(5);
    if (!is_integer_text(t)) throw ConfigError("alpha: sqrt:n needs a positive integer");
    a.sqrt_n_ = std::stoul(t);
    unsigned long r = static_cast<unsigned long>(std::sqrt(static_cast<double>(a.sqrt_n_)));
    while (r * r > a.sqrt_n_) --r;
    while ((r + 1) * (r + 1) <= a.sqrt_n_) ++r;
    if (r * r == a.sqrt_n_) throw ConfigError("alpha: sqrt:n needs a non-square n");
  } else if (s.rfind("cf:", 0) == 0) {
    a.kind_ = Kind::Cf;
    std::stringstream ss(s.substr(3));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      BigInt v = parse_big(tok, raw);
      if (v < 1) throw ConfigError("alpha: partial quotients must be positive");
      a.prefix_.push_back(v);
    }
  } else if (s == "liouville" || s.rfind("liouville:", 0) == 0) {
    a.kind_ = Kind::Cf;
    int m = 10;
    if (s.size() > 9) {
      std::string t = s.substr(10);
      if (!is_integer_text(t)) throw ConfigError("alpha: liouville:m needs a positive integer");
      m = std::stoi(t);
      if (m < 1 || m > 24) throw ConfigError("alpha: liouville:m must lie in [1, 24]");
    }
    for (int k = 1; k <= m; ++k) a.prefix_.push_back(mp::pow(BigInt(10), 1u << (k - 1)));
  } else if (auto slash = s.find('/'); slash != std::string::npos) {
    a.kind_ = Kind::Rational;
    BigInt p = parse_big(s.substr(0, slash), raw), q = parse_big(s.substr(slash + 1), raw);
    if (q == 0) throw ConfigError("alpha: zero denominator");
    a.lo_ = a.hi_ = BigRat(p, q);
  } else if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '.')) {
    a.kind_ = Kind::Rational;
    auto dot = s.find('.');
    std::string ip = dot == std::string::npos ? s : s.substr(0, dot);
    std::string fp = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!is_integer_text(ip) || (!fp.empty() && !is_integer_text(fp))) throw ConfigError("alpha: bad decimal '" + raw + "'");
    BigInt num(ip + fp);
    BigInt den = mp::pow(BigInt(10), static_cast<unsigned>(fp.size()));
    a.lo_ = a.hi_ = BigRat(num, den);
  } else {
    throw ConfigError("alpha: unknown spec '" + raw + "'");
  }
  if (a.kind_ != Kind::Rational) a.build();
  if (!(a.lo_ > 0 && a.hi_ < 1)) throw ConfigError("alpha must lie in (0,1)");
  return a;
}

void Alpha::build() {
  const BigInt one = 1;
  const BigInt scale = one << bits_;
  switch (kind_) {
    case Kind::Golden: {
      BigInt s = scaled_isqrt(5, bits_);
      lo_ = BigRat(s - scale, scale * 2);
      hi_ = BigRat(s + 1 - scale, scale * 2);
      break;
    }
    case Kind::Silver: {
      BigInt s = scaled_isqrt(2, bits_);
      lo_ = BigRat(s - scale, scale);
      hi_ = BigRat(s + 1 - scale, scale);
      break;
    }
    case Kind::Sqrt: {
      BigInt s = scaled_isqrt(sqrt_n_, bits_);
      BigInt f = mp::sqrt(BigInt(sqrt_n_));
      lo_ = BigRat(s - f * scale, scale);
      hi_ = BigRat(s + 1 - f * scale, scale);
      break;
    }
    case Kind::Cf: {
      // [0; a_1..a_m, y] with golden tail y = [1; 1, 1, ...] = 1 + g.
      BigInt s = scaled_isqrt(5, bits_);
      BigRat glo(s - scale, scale * 2), ghi(s + 1 - scale, scale * 2);
      BigInt pm2 = 1, qm2 = 0, pm1 = 0, qm1 = 1;  // p_{-1}, q_{-1}, p_0, q_0
      for (const auto& ak : prefix_) {
        BigInt p = ak * pm1 + pm2, q = ak * qm1 + qm2;
        pm2 = pm1;
        qm2 = qm1;
        pm1 = p;
        qm1 = q;
      }
      auto value = [&](const BigRat& y) { return (BigRat(pm1) * y + BigRat(pm2)) / (BigRat(qm1) * y + BigRat(qm2)); };
      BigRat v1 = value(1 + glo), v2 = value(1 + ghi);
      lo_ = v1 < v2 ? v1 : v2;
      hi_ = v1 < v2 ? v2 : v1;
      break;
    }
    case Kind::Rational:
      break;
  }
}

Alpha Alpha::refined() const {
  if (kind_ == Kind::Rational) return *this;
  Alpha a = *this;
  a.bits_ = bits_ * 2;
  a.build();
  return a;
}

double Alpha::to_double() const { return static_cast<double>((lo_ + hi_) / 2); }

ContinuedFraction expand_once(const Alpha& alpha, int max_depth) {
  ContinuedFraction cf;
  cf.alpha = alpha;
  cf.a.push_back(0);
  cf.p.push_back(0);
  cf.q.push_back(1);
  BigInt pm2 = 1, qm2 = 0;
  // Remainders x = n/d for both endpoints; Euclid on each side, no gcd needed.
  BigInt nl = mp::numerator(alpha.lo()), dl = mp::denominator(alpha.lo());
  BigInt nh = mp::numerator(alpha.hi()), dh = mp::denominator(alpha.hi());
  for (int k = 1; k <= max_depth; ++k) {
    if (nl == 0 || nh == 0)
      throw PrecisionExhausted("continued fraction terminates: alpha is rational within working precision at depth " +
                                   std::to_string(k - 1),
                               k - 1);
    // 1/x over [x_lo, x_hi] is [dh/nh, dl/nl]
    BigInt alo = dh / nh, ahi = dl / nl;
    if (alo != ahi)
      throw PrecisionExhausted("working precision exhausted after depth " + std::to_string(k - 1), k - 1);
    BigInt a = alo;
    BigInt rl = dh - a * nh, rh = dl - a * nl;  // new remainders rl/nh (low), rh/nl (high)
    BigInt n_lo = rl, d_lo = nh, n_hi = rh, d_hi = nl;
    nl = n_lo;
    dl = d_lo;
    nh = n_hi;
    dh = d_hi;
    BigInt p = a * cf.p.back() + pm2, q = a * cf.q.back() + qm2;
    pm2 = cf.p.back();
    qm2 = cf.q.back();
    cf.a.push_back(a);
    cf.p.push_back(p);
    cf.q.push_back(q);
  }
  return cf;
}

ContinuedFraction expand(const Alpha& alpha, int max_depth, unsigned max_bits) {
  if (max_depth < 0) throw ConfigError("alpha.depth must be nonnegative");
  Alpha cur = alpha;
  for (;;) {
    try {
      return expand_once(cur, max_depth);
    } catch (const PrecisionExhausted&) {
      if (!cur.refinable() || cur.bits() * 2 > max_bits) throw;
      cur = cur.refined();
    }
  }
}

RatInterval dist_to_int(const RatInterval& x) {
  BigInt fl = floor_rat(x.lo), fh = floor_rat(x.hi);
  const BigRat half(1, 2);
  if (fl != fh) return {BigRat(0), half};
  BigRat a = x.lo - BigRat(fl), b = x.hi - BigRat(fl);
  if (b <= half) return {a, b};
  if (a >= half) return {1 - b, 1 - a};
  BigRat m = a < 1 - b ? a : 1 - b;
  return {m, half};
}

RatInterval small_divisor_exact(const BigInt& k, const Alpha& alpha) {
  BigInt ak = k < 0 ? BigInt(-k) : k;
  return dist_to_int({BigRat(ak) * alpha.lo(), BigRat(ak) * alpha.hi()});
}

double small_divisor(long k, const Alpha& alpha) {
  RatInterval r = small_divisor_exact(BigInt(k), alpha);
  return static_cast<double>((r.lo + r.hi) / 2);
}

double norm_T(double x) {
  double f = x - std::floor(x);
  return f > 0.5 ? 1.0 - f : f;
}

double log_big(const BigInt& x) {
  if (x <= 0) throw DomainError("log of a nonpositive integer");
  unsigned m = mp::msb(x);
  if (m < 900) return std::log(static_cast<double>(x));
  unsigned sh = m - 60;
  BigInt top = x >> sh;
  return std::log(static_cast<double>(top)) + sh * std::numbers::ln2;
}

namespace {

// x <= base^e (le) or x >= base^e (ge), exact when e is integral and the power
// stays below 65536 bits, otherwise in 100-digit logarithms with 1e-30 slack.
bool cmp_pow(const BigInt& x, const BigInt& base, double e, bool le) {
  if (base == 1) return le ? x <= 1 : x >= 1;
  double ip;
  if (std::modf(e, &ip) == 0.0 && e >= 0 && (mp::msb(base) + 1.0) * e <= 65536.0) {
    BigInt pw = mp::pow(base, static_cast<unsigned>(e));
    return le ? x <= pw : x >= pw;
  }
  BigFloat lx = mp::log(BigFloat(x)), lb = mp::log(BigFloat(base)) * BigFloat(e);
  BigFloat slack("1e-30");
  return le ? lx <= lb + slack : lx + slack >= lb;
}

}  // namespace

bool is_cd_bridge(const ContinuedFraction& cf, int m, int n, double A, double B, double C) {
  if (m < 0 || n < m || n > cf.depth()) throw DomainError("is_cd_bridge: indices out of range");
  for (int i = m; i < n; ++i)
    if (!cmp_pow(cf.q[i + 1], cf.q[i], A, true)) return false;
  return cmp_pow(cf.q[n], cf.q[m], C, true) && cmp_pow(cf.q[n], cf.q[m], B, false);
}

BridgeSelection select_bridges(const ContinuedFraction& cf, double A) {
  if (!(A >= 1.0)) throw ConfigError("bridge exponent A must be >= 1");
  BridgeSelection sel;
  sel.A = A;
  const int depth = cf.depth();
  int n0 = 0;
  for (int n = 0; n + 1 <= depth; ++n)
    if (cf.q[n] == 1) n0 = n;
  const double A3 = A * A * A, A4 = A3 * A;

  std::vector<int> path{n0}, best{n0};
  std::set<std::pair<int, int>> dead;
  bool reached_end = false;

  std::function<bool()> dfs = [&]() -> bool {
    if (path.size() > best.size()) best = path;
    const int k = static_cast<int>(path.size()) - 1;
    const int cur = path[k];
    const int prev = k > 0 ? path[k - 1] : -1;
    if (dead.count({prev, cur})) return false;
    if (cur + 1 > depth) return true;
    const BigInt& Q = cf.q[cur];
    const BigInt& Qb = cf.q[cur + 1];
    const bool first_alt = cmp_pow(Qb, Q, A, false);
    const bool left_bridge = k > 0 && is_cd_bridge(cf, prev + 1, cur, A, A, A3);
    // no successor can qualify; without this the depth cut below would
    // accept the dead end as "ran out of certified depth"
    if (!first_alt && !left_bridge) {
      dead.insert({prev, cur});
      return false;
    }
    for (int m = cur + 1;; ++m) {
      if (m + 1 > depth) return true;  // candidates run past the certified depth
      if (!cmp_pow(cf.q[m], Qb, A4, true)) break;
      if (!cmp_pow(cf.q[m], Q, A, false) || !cmp_pow(cf.q[m + 1], Qb, A, false)) continue;
      if (!first_alt && !(left_bridge && is_cd_bridge(cf, cur, m, A, A, A3))) continue;
      path.push_back(m);
      if (dfs()) return true;
      path.pop_back();
    }
    dead.insert({prev, cur});
    return false;
  };
  if (depth >= 1) reached_end = dfs();
  const std::vector<int>& chosen = reached_end ? path : best;
  sel.index = chosen;
  sel.truncated = true;
  for (int idx : chosen) {
    sel.Q.push_back(cf.q[idx]);
    if (idx + 1 <= depth) sel.Qbar.push_back(cf.q[idx + 1]);
  }
  sel.certified = static_cast<int>(chosen.size()) - 1;
  return sel;
}

std::vector<BridgeCheck> verify_bridges(const ContinuedFraction& cf, const BridgeSelection& sel) {
  std::vector<BridgeCheck> out;
  const double A = sel.A, A3 = A * A * A, A4 = A3 * A;
  out.push_back({"Q0_is_1", 0, !sel.Q.empty() && sel.Q[0] == 1});
  for (int k = 0; k < sel.certified; ++k) {
    const int n = sel.index[k], m = sel.index[k + 1];
    out.push_back({"Q_next_le_Qbar_pow_A4", k, cmp_pow(sel.Q[k + 1], sel.Qbar[k], A4, true)});
    out.push_back({"Q_next_ge_Q_pow_A", k, cmp_pow(sel.Q[k + 1], sel.Q[k], A, false)});
    if (k + 1 < static_cast<int>(sel.Qbar.size()))
      out.push_back({"Qbar_next_ge_Qbar_pow_A", k, cmp_pow(sel.Qbar[k + 1], sel.Qbar[k], A, false)});
    bool alt = cmp_pow(sel.Qbar[k], sel.Q[k], A, false);
    if (!alt && k > 0)
      alt = is_cd_bridge(cf, sel.index[k - 1] + 1, n, A, A, A3) && is_cd_bridge(cf, n, m, A, A, A3);
    out.push_back({"gap_or_paired_bridges", k, alt});
  }
  return out;
}

AlphaTable::AlphaTable(const Alpha& alpha, long kmax) {
  if (kmax < 0) kmax = 0;
  const BigInt num = mp::numerator(alpha.lo()), den = mp::denominator(alpha.lo());
  frac_.resize(kmax + 1);
  std::vector<cplx> ph(kmax + 1);
  BigInt N = 0;
  for (long k = 0; k <= kmax; ++k) {
    if (k > 0) {
      N += num;
      if (N >= den) N -= den;
    }
    BigInt top = (N << 64) / den;
    double f = std::ldexp(static_cast<double>(top), -64);
    frac_[k] = f;
    ph[k] = std::polar(1.0, 2.0 * std::numbers::pi * f);
  }
  phases_ = PhaseTable(std::move(ph));
}

double AlphaTable::frac(long k) const {
  long a = k < 0 ? -k : k;
  if (a > kmax()) throw InternalError("AlphaTable: mode out of range");
  double f = frac_[a];
  if (k < 0 && f != 0.0) f = 1.0 - f;
  return f;
}

}  // namespace liokam
