#include "schedule.hpp"

#include <climits>
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace liokam {

namespace {

constexpr long kSaturate = LONG_MAX / 4;

long saturating_ceil(double x) {
  if (!(x < static_cast<double>(kSaturate))) return kSaturate;
  return static_cast<long>(std::ceil(x));
}

CheckRow log_le_row(std::string name, double log_actual, double log_bound, std::string note) {
  CheckRow r{std::move(name), log_bound, log_actual, log_actual <= log_bound, false, std::move(note)};
  return r;
}

}  // namespace

double log_gamma_threshold(const WeightFunction& w, double target) {
  const double lt = std::log(target);
  double lo = 1.0;
  if (w.log_gamma_at_log(lo) >= lt) return lo;
  double hi = 2.0;
  while (w.log_gamma_at_log(hi) < lt) {
    hi *= 2.0;
    if (hi > 1e8) throw DomainError("Gamma never reaches " + std::to_string(target) + " for weight " + w.name());
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (w.log_gamma_at_log(mid) >= lt)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double Schedule::eps(int n) const { return std::exp(log_eps.at(n)); }
double Schedule::eps_pow(int n, double e) const { return std::exp(e * log_eps.at(n)); }

double Schedule::r_tilde(int n, int j) const { return r_tilde0.at(n) * (1.0 - j * sigma.at(n)); }

double Schedule::s_tilde(int n, int j) const {
  double sum = 0.0;
  for (int i = 0; i < j; ++i) sum += 1.0 / ((i + 2.0) * (i + 2.0));
  return s.at(n) * (1.0 - eta.at(n) * sum);
}

Report Schedule::smallness() const {
  Report rep;
  const double le = log_eps.at(0), A4 = std::pow(p.A, 4.0), t2 = p.tau * p.tau;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  rep.push_back(log_le_row("eps_le_ln2_term", le, 3.0 * std::log(std::log(2.0) / (16.0 * pi2)), "natural logs"));
  rep.push_back(log_le_row("eps_le_T_power", le, -18.0 * A4 * t2 * log_T, "natural logs"));
  rep.push_back(log_le_row("eps_le_s_term", le, 3.0 * std::log(p.s / 240.0), "natural logs"));
  rep.push_back(CheckRow{"A_gt_18", 18.0, p.A, p.A > 18.0, false, "desk runs lower A"});
  const double a4_min = (1.0 + 2.0 * std::log(48.0 * p.c)) / (4.0 * t2);
  rep.push_back(CheckRow{"A4_lower_bound", a4_min, A4, A4 >= a4_min, false, {}});
  if (n0 + 1 < static_cast<int>(bridges.Q.size())) {
    rep.push_back(log_le_row("n0_Q_next_le_T_pow_A4", log_big(bridges.Q[n0 + 1]), A4 * log_T, "natural logs"));
    CheckRow r{"n0_Qbar_next_ge_T", log_T, log_big(bridges.Qbar[n0 + 1]), log_big(bridges.Qbar[n0 + 1]) >= log_T,
               false, "natural logs"};
    rep.push_back(r);
  }
  return rep;
}

Schedule make_schedule(const ScheduleParams& p, const ContinuedFraction& cf, const WeightFunction& w) {
  if (!(p.eps >= 0.0)) throw ConfigError("epsilon must be nonnegative");
  if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
  if (!(p.tau > 1.0)) throw ConfigError("tau must exceed 1");
  if (!(p.r > 0.0 && p.r < 1.0)) throw ConfigError("r must lie in (0, 1)");
  if (!(p.s > 0.0)) throw ConfigError("s must be positive");
  if (p.N_max < 1) throw ConfigError("N_max must be at least 1");
  if (p.K_cap < 1) throw ConfigError("K.cap must be positive");

  Schedule S;
  S.p = p;
  S.weight = w;
  S.bridges = select_bridges(cf, p.A);
  const auto& Q = S.bridges.Q;
  const auto& Qb = S.bridges.Qbar;

  S.log_T_tilde = log_gamma_threshold(w, 324.0 * std::pow(p.A, 8.0) * std::pow(p.tau, 4.0));
  S.T_tilde = std::exp(S.log_T_tilde);
  if (p.T > 0.0) {
    S.log_T = std::log(p.T);
  } else {
    S.log_T = std::max({std::log(20.0 / p.r), std::log(48.0 * p.c / (p.gamma * p.gamma)), 3.0 * S.log_T_tilde});
  }
  S.T = std::exp(S.log_T);

  // m0: Q_{m0} <= T <= Q_{m0+1}
  int m0 = -1;
  for (std::size_t k = 0; k + 1 < Q.size(); ++k)
    if (log_big(Q[k]) <= S.log_T && S.log_T <= log_big(Q[k + 1])) {
      m0 = static_cast<int>(k);
      break;
    }
  if (p.n0 >= 0) {
    S.n0 = p.n0;
    S.m0 = m0;
  } else {
    if (m0 < 0)
      throw DepthError("bridges (" + std::to_string(Q.size()) + " found) do not bracket T = e^" +
                       std::to_string(S.log_T) + "; raise alpha.depth or lower schedule.T");
    S.m0 = m0;
    S.n0 = log_big(Qb[m0]) >= S.log_T ? std::max(m0 - 1, 0) : m0;
  }
  const int need = S.n0 + p.N_max;
  if (need >= static_cast<int>(Q.size()))
    throw DepthError("bridges reach level " + std::to_string(static_cast<int>(Q.size()) - 1 - S.n0) +
                     " but N_max = " + std::to_string(p.N_max) + " needs one more; raise alpha.depth or lower N_max");

  const int N = p.N_max;
  for (int n = 0; n <= N; ++n) {
    S.Q.push_back(Q[S.n0 + n]);
    S.Qbar.push_back(Qb[S.n0 + n]);
    S.log_Q.push_back(log_big(Q[S.n0 + n]));
    S.log_Qbar.push_back(log_big(Qb[S.n0 + n]));
    S.eta.push_back(1.0 / ((n + 2.0) * (n + 2.0)));
    S.gamma.push_back(p.gamma * S.eta.back());
  }
  S.log_eps.push_back(p.eps > 0.0 ? std::log(p.eps) : -std::numeric_limits<double>::infinity());
  S.s.push_back(p.s);
  S.r.push_back(p.r);
  for (int n = 0; n < N; ++n) {
    const double lqb = S.log_Qbar[n + 1];
    if (!(lqb > 0.0)) throw DomainError("Qbar_{n+1} = 1 leaves Gamma undefined");
    const double g_half = std::exp(0.5 * w.log_gamma_at_log(lqb / 3.0));
    const double lE = -g_half * lqb;
    S.log_eps.push_back(S.log_eps[n] + lE);
    S.log_L_exact.push_back(g_half * lqb);
    S.L.push_back(std::max(1L, saturating_ceil(g_half * lqb)));
    S.s.push_back(S.s[n] * (1.0 - S.eta[n]));
    S.r.push_back(p.r * std::exp(-2.0 * S.log_Qbar[n]));
    S.r_tilde0.push_back(2.0 * p.r * std::exp(-2.0 * S.log_Qbar[n]));
    S.sigma.push_back(0.5 / static_cast<double>(S.L.back()));
    S.log_K.push_back(0.5 * lqb);
    long kf = kSaturate;
    if (lqb < 2.0 * std::log(static_cast<double>(kSaturate))) {
      BigInt root = boost::multiprecision::sqrt(S.Qbar[n + 1]);
      kf = static_cast<long>(root);
    }
    S.K_floor.push_back(kf);
    S.K_eff.push_back(std::min(kf, p.K_cap));
  }
  return S;
}

}  // namespace liokam
