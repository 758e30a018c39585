// Command-line front end. Links only against the C API.
//
// Exit codes: 0 success, 1 certification failure or runtime failure
// (conditioning, preconditions, exhausted parameter set), 2 configuration,
// depth, precision, type and domain errors.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "liokam/liokam.h"

namespace {

int exit_code(int status) {
  switch (status) {
    case LK_OK: return 0;
    case LK_ERR_CONFIG:
    case LK_ERR_DEPTH:
    case LK_ERR_PRECISION:
    case LK_ERR_TYPE:
    case LK_ERR_DOMAIN: return 2;
    default: return 1;
  }
}

// Reports a failed call and yields its exit code.
int fail(int status) {
  std::cerr << "liokam: " << lk_status_name(status) << ": " << lk_last_error() << "\n";
  return exit_code(status);
}

struct String {
  lk_string* p = nullptr;
  ~String() { lk_string_free(p); }
  std::string str() const { return {lk_string_data(p), lk_string_size(p)}; }
};

struct Config {
  lk_config* p = nullptr;
  ~Config() { lk_config_free(p); }
};

struct Run {
  lk_run* p = nullptr;
  ~Run() { lk_run_free(p); }
};

struct Globals {
  std::string config;
  std::string out = "liokam_out";
  int jobs = 1;
  bool force = false;
  bool timing = false;
  long long seed = -1;
};

// Config file first, then flag overrides.
int make_config(const Globals& g, Config& cfg) {
  int st = lk_config_new(&cfg.p);
  if (st != LK_OK) return st;
  if (!g.config.empty() && (st = lk_config_load(cfg.p, g.config.c_str())) != LK_OK) return st;
  if (g.force && (st = lk_config_set(cfg.p, "force", "true")) != LK_OK) return st;
  if (g.timing && (st = lk_config_set(cfg.p, "timing", "true")) != LK_OK) return st;
  if (g.seed >= 0 && (st = lk_config_set(cfg.p, "seed", std::to_string(g.seed).c_str())) != LK_OK) return st;
  return LK_OK;
}

int do_run(const Globals& g, Config& cfg, Run& run) {
  int st = make_config(g, cfg);
  if (st != LK_OK) return st;
  if (g.force) std::cerr << "liokam: warning: --force: theoretical preconditions are reported, not enforced\n";
  return lk_run_new(cfg.p, &run.p);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-periodically forced area-preserving maps: KAM scheme with certified bookkeeping"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "key = value configuration file");
  app.add_option("--out", g.out, "output directory for kam-run and solve-homological");
  app.add_option("--jobs", g.jobs, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  app.add_flag("--force", g.force, "turn theoretical preconditions into warnings");
  app.add_option("--seed", g.seed, "seed of the low-discrepancy streams")->check(CLI::NonNegativeNumber);
  app.add_flag("--timing", g.timing, "record wall-clock times in summary.csv");

  auto* cfrac = app.add_subcommand("cfrac", "continued fraction table");
  std::string alpha = "golden";
  int depth = 20;
  double bridges = 0.0;
  cfrac->add_option("--alpha", alpha, "golden, silver, sqrt:N, cf:a1,a2,..., liouville, p/q or a decimal");
  cfrac->add_option("--depth", depth)->check(CLI::PositiveNumber);
  cfrac->add_option("--bridges", bridges, "bridge exponent A; marks the selected Q_k and Qbar_k");

  auto* norms = app.add_subcommand("norms", "norm table of a coefficient dump or of the model's initial data");
  std::string norms_input;
  norms->add_option("--input", norms_input, "coefficient dump");

  auto* solve = app.add_subcommand("solve-homological", "solve one homological equation");
  std::string solve_input, solve_B, solve_b;
  lk_solve_params sp{1, 16, 0.05, 2.0, 0, 0.0, 0.0, 0.0};
  solve->add_option("--input", solve_input, "right-hand side u (coefficient dump)")->required();
  solve->add_option("--B", solve_B, "real phase B (coefficient dump)");
  solve->add_option("--b", solve_b, "multiplier b (coefficient dump)");
  solve->add_option("--l", sp.l)->check(CLI::IsMember({1, 2}));
  solve->add_option("--K", sp.K)->check(CLI::PositiveNumber);
  solve->add_option("--gamma", sp.gamma);
  solve->add_option("--tau", sp.tau);
  solve->add_option("--Qbar", sp.Qbar);
  solve->add_option("--Q-next", sp.Q_next);
  solve->add_option("--r-tilde", sp.r_tilde);
  solve->add_option("--sigma", sp.sigma);

  auto* kam = app.add_subcommand("kam-run", "run the KAM iteration and write its outputs");
  auto* measure = app.add_subcommand("measure", "excluded parameter measure of a run against its bound");

  auto* verify = app.add_subcommand("verify", "invariant and oracle suites");
  std::string suite = "all";
  verify->add_option("--suite,suite", suite, "suite name or all");

  for (auto* sub : {cfrac, norms, solve, kam, measure, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (int st = lk_set_jobs(g.jobs); st != LK_OK) return fail(st);

  if (*cfrac) {
    String out;
    if (int st = lk_cfrac_csv(alpha.c_str(), depth, bridges, &out.p); st != LK_OK) return fail(st);
    std::cout << out.str();
    return 0;
  }

  if (*norms) {
    Config cfg;
    if (int st = make_config(g, cfg); st != LK_OK) return fail(st);
    String out;
    if (int st = lk_norms_csv(cfg.p, norms_input.empty() ? nullptr : norms_input.c_str(), &out.p); st != LK_OK)
      return fail(st);
    std::cout << out.str();
    return 0;
  }

  if (*solve) {
    Config cfg;
    if (int st = make_config(g, cfg); st != LK_OK) return fail(st);
    String rep;
    int ok = 0;
    int st = lk_solve_homological(cfg.p, solve_input.c_str(), solve_B.empty() ? nullptr : solve_B.c_str(),
                                  solve_b.empty() ? nullptr : solve_b.c_str(), &sp, g.out.c_str(), &rep.p, &ok);
    if (st != LK_OK) return fail(st);
    std::cout << rep.str();
    return ok ? 0 : 1;
  }

  if (*kam) {
    Config cfg;
    Run run;
    if (int st = do_run(g, cfg, run); st != LK_OK) return fail(st);
    if (int st = lk_run_write(run.p, g.out.c_str()); st != LK_OK) return fail(st);
    String summary, failures;
    lk_run_summary_csv(run.p, &summary.p);
    lk_run_failures(run.p, &failures.p);
    std::cout << summary.str();
    int certified = 0;
    lk_run_certified(run.p, &certified);
    if (!certified) {
      std::cerr << "liokam: certification failed (level,sub,check,bound,actual):\n" << failures.str();
      return 1;
    }
    return 0;
  }

  if (*measure) {
    Config cfg;
    Run run;
    if (int st = do_run(g, cfg, run); st != LK_OK) return fail(st);
    String out;
    lk_run_measure_csv(run.p, &out.p);
    std::cout << out.str();
    double total = 0.0, bound = 0.0;
    lk_run_measure(run.p, &total, &bound);
    std::printf("total,%.17g,bound,%.17g\n", total, bound);
    return total <= bound ? 0 : 1;
  }

  if (*verify) {
    Config cfg;
    if (int st = make_config(g, cfg); st != LK_OK) return fail(st);
    String out;
    int ok = 0;
    if (int st = lk_verify_csv(cfg.p, suite.c_str(), &out.p, &ok); st != LK_OK) return fail(st);
    std::cout << out.str();
    return ok ? 0 : 1;
  }
  return 2;
}
