#pragma once

#include <string>
#include <vector>

#include "cfrac.hpp"
#include "config.hpp"
#include "fourier.hpp"
#include "intervals.hpp"
#include "jet.hpp"
#include "model.hpp"
#include "report.hpp"
#include "schedule.hpp"

namespace liokam {

struct KamOptions {
  int substeps_cap = 64;
  int oracle_stride = 64;   // every n-th active row; 0 disables the oracle
  int oracle_theta = 4096;
  bool force = false;
};

// A certification row tagged with where it was produced (sub = -1: level).
struct TaggedCheck {
  int level = 0;
  int sub = -1;
  CheckRow row;
};

// (Eq)_j of one sub-iteration: the linear part is diag(m_j, conj m_j) + W_j
// with m_j = e^{i 2 pi lambda} + G + g_j.
struct SubState {
  int j = 0;
  FourierSeries g;
  C2Vector U;
  Su11Matrix W;
  PowerFourierSeries R;
};

struct LevelContext {
  const Schedule* sched = nullptr;
  int n = 0;
  const AlphaTable* at = nullptr;
  NormContext ctx;  // weight, lambda_derivative and the active rows of O_n
  FourierSeries G;
  KamOptions opt;
};

struct OracleResult {
  bool run = false;
  std::size_t rows = 0;
  double max_abs = 0.0;
  double rel = 0.0;  // max_abs / eps~_j
};

struct SubRecord {
  int level = 0, j = 0;
  double r_in = 0.0, r_out = 0.0;
  double eps_in = 0.0, eps_out = 0.0;  // eps~_j, eps~_{j+1}
  double U_in = 0.0, U_out = 0.0, W_in = 0.0, W_out = 0.0;
  double D_norm = 0.0, Delta_norm = 0.0;
  double conditioning = 0.0;
  OracleResult oracle;
  Report report;
};

struct SubResult {
  SubState next;
  Factor factor;
  SubRecord rec;
};

// m = e^{i 2 pi lambda} + G + g as a series.
FourierSeries diagonal_entry(const FourierSeries& G, const FourierSeries& g);

// One pass j -> j+1. Homological solves whose right-hand side is exactly zero
// are skipped (zero is their exact solution).
SubResult sub_iteration_step(const SubState& s, const LevelContext& lc);

// Pointwise check, on `theta` points of every `stride`-th active row, that
// substituting X = e^{D} X+ + Delta into (Eq)_j reproduces e^{D(theta+alpha)}
// times (Eq)_{j+1}. The test section X+ has amplitude eps~_j.
OracleResult substitution_oracle(const SubState& before, const SubState& after, const Factor& f,
                                 const LevelContext& lc, double eps_t);

struct KamState {
  int level = 0;
  FourierSeries G;
  C2Vector U;
  Su11Matrix W;
  PowerFourierSeries R;
  double r = 0.0, s = 0.0;
  IntervalSet O;  // O_{n-1}
  std::vector<Factor> factors;
};

KamState initial_state(const Su11Form& form, const Schedule& S);

// Resonance zones for K_lo <= |k| < K_hi, l = 1, 2, intersected with
// [1/4, 3/4]. With shift identically zero the zones are the exact intervals
// around (frac(k alpha) + m) / l; otherwise the root of l(lambda + shift) -
// k alpha = m is located on the grid and the zone is inflated using the slope
// bound 1/2.
IntervalSet resonance_zones(const SeriesBasis& basis, const std::vector<double>& shift, const AlphaTable& at,
                            double gamma, double tau, long k_lo, long k_hi);

struct StepResult {
  KamState next;
  IntervalSet zones;
  std::vector<SubRecord> subs;
  std::vector<TaggedCheck> checks;
  int substeps = 0;
  bool early_exit = false;  // targets met before L sub-steps
  bool stalled = false;     // a sub-step reduced neither U nor W
};

// One outer step n -> n+1: exclusion, up to min(L_n, cap) sub-steps, level
// certification. Certification failures are recorded, not thrown.
StepResult kam_step(const KamState& st, const Schedule& S, const AlphaTable& at, const NormContext& base,
                    const KamOptions& opt);

// 4 gamma0 sum_{n>=1} (n+2)^{-2} sum_{kappa>=1} kappa^{-tau}
double measure_bound(double gamma0, double tau);

struct MeasureReport {
  std::vector<double> per_level;   // measure of the zones of level n inside [1/4, 3/4]
  std::vector<double> cumulative;  // measure of [1/4, 3/4] \ O_n
  double total = 0.0;
  double bound = 0.0;
  bool monotone = true;
  bool pass = true;  // total <= bound
};
MeasureReport measure_report(const std::vector<IntervalSet>& zones_per_level, double gamma0, double tau);

struct LevelRow {
  int level = 0;
  double r = 0.0;
  double eps_target = 0.0;
  double U_norm = 0.0, W_norm = 0.0;
  double residual = 0.0;
  double residual_floor = 0.0;
  double excursion = 0.0;
  double excluded_measure = 0.0;
  double wall_ms = 0.0;
  int substeps = 0;
  long K = 0;
};

struct RunResult {
  RunConfig cfg;
  Schedule schedule;
  BasisPtr basis;
  SkewMap model;
  std::vector<LevelRow> levels;
  std::vector<IntervalSet> zones;
  std::vector<SubRecord> subs;
  std::vector<TaggedCheck> checks;
  MeasureReport measure;
  KamState final_state;
  struct Snapshot {
    FourierSeries G;
    C2Vector U;
    Su11Matrix W;
  };
  std::vector<Snapshot> snapshots;  // levels 0..N_max
  TorusApprox torus;
  std::vector<std::vector<char>> active;  // rows of O_n after each stepped level
  double factor_det_defect = 0.0;         // max over factors
  double composition_det_defect = 0.0;
  bool certified = true;  // every binding check passed
};

// Iterates kam_step from level 0 to N_max. ParameterExhausted and solver
// errors propagate with the level attached to the message.
RunResult run(const RunConfig& cfg);

// summary.csv, exclusions.csv, substeps.csv, checks.csv, per-level dumps and
// the torus export. wall_ms is written as 0 unless cfg.timing.
void write_outputs(const RunResult& res, const std::string& dir);
std::string summary_csv(const RunResult& res);

}  // namespace liokam
