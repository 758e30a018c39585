#pragma once

#include <vector>

#include "cfrac.hpp"
#include "report.hpp"
#include "weights.hpp"

namespace liokam {

struct ScheduleParams {
  double eps = 1e-8;
  double gamma = 0.05;
  double tau = 2.0;
  double s = 0.5;
  double r = 0.1;
  double A = 19.0;
  double c = 1.0;
  double T = 0.0;   // 0: max{20/r, 48c/gamma^2, Ttilde^3}
  int n0 = -1;      // -1: located from T
  int N_max = 4;    // levels 0..N_max-1 are stepped
  long K_cap = 256;
  int substeps_cap = 64;
};

// Everything indexed by the shifted level n (bridge index n0 + n). Huge
// quantities are carried as natural logs.
struct Schedule {
  ScheduleParams p;
  WeightFunction weight;
  BridgeSelection bridges;
  double T = 0.0, T_tilde = 0.0;
  double log_T = 0.0, log_T_tilde = 0.0;
  int m0 = 0, n0 = 0;

  // n = 0..N_max
  std::vector<double> log_eps;   // ln eps_n
  std::vector<double> eta, gamma, s, r;
  std::vector<double> log_Q, log_Qbar;
  std::vector<BigInt> Q, Qbar;
  // n = 0..N_max-1
  std::vector<double> log_K;     // ln Qbar_{n+1}^{1/2}
  std::vector<long> K_eff;       // min(floor K_n, K_cap)
  std::vector<long> K_floor;     // floor K_n, saturated at LONG_MAX / 4
  std::vector<long> L;           // sub-steps (uncapped), saturated
  std::vector<double> log_L_exact;  // Gamma^{1/2}(Qbar_{n+1}^{1/3}) ln Qbar_{n+1}
  std::vector<double> r_tilde0, sigma;

  double eps(int n) const;
  double eps_pow(int n, double e) const;  // eps_n^e without underflow surprises
  int levels() const { return p.N_max; }

  // eta_j-driven sub-step widths for level n: r~_j = r~_0 (1 - j sigma),
  // s~_j = s_n (1 - eta_n sum_{i<j} eta_i).
  double r_tilde(int n, int j) const;
  double s_tilde(int n, int j) const;

  // Theoretical smallness: eps <= min{((16 pi^2)^{-1} ln 2)^3, T^{-18 A^4 tau^2}, (s/240)^3}.
  Report smallness() const;
};

// Smallest x with Gamma(x) >= target (Gamma nondecreasing), as ln x.
double log_gamma_threshold(const WeightFunction& w, double target);

// Builds the schedule. DepthError when the bridges cannot locate n0 or do
// not reach level N_max.
Schedule make_schedule(const ScheduleParams& p, const ContinuedFraction& cf, const WeightFunction& w);

}  // namespace liokam
