#include "liokam/liokam.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "cfrac.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "homological.hpp"
#include "kam.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "verify.hpp"

struct lk_config {
  liokam::RunConfig cfg;
};

struct lk_run {
  liokam::RunResult res;
};

struct lk_string {
  std::string s;
};

namespace {

using namespace liokam;

thread_local std::string g_last_error;

template <class F>
int guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return LK_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LK_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LK_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw TypeError(std::string("null argument: ") + what);
}

lk_string* make_string(std::string s) { return new lk_string{std::move(s)}; }

std::string num(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

BasisPtr config_basis(const RunConfig& c) {
  return SeriesBasis::uniform(static_cast<std::size_t>(c.lambda_points), c.K_support);
}

NormContext config_ctx(const RunConfig& c, double r) {
  NormContext ctx;
  ctx.weight = WeightFunction::parse(c.weight_family, c.weight_param);
  ctx.r = r;
  ctx.lambda_derivative = c.lambda_derivative;
  return ctx;
}

FourierSeries load_dump(const BasisPtr& b, const char* path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string("cannot open coefficient dump '") + path + "'");
  return load(b, in);
}

void write_dump(const FourierSeries& f, const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw ConfigError("cannot write '" + p.string() + "'");
  dump(f, os);
}

}  // namespace

extern "C" {

const char* lk_version(void) { return "0.1.0"; }

const char* lk_last_error(void) { return g_last_error.c_str(); }

const char* lk_status_name(int status) {
  switch (status) {
    case LK_OK: return "ok";
    case LK_ERR_CONFIG: return "configuration error";
    case LK_ERR_DOMAIN: return "domain error";
    case LK_ERR_PRECISION: return "precision exhausted";
    case LK_ERR_CONDITIONING: return "conditioning error";
    case LK_ERR_PRECONDITION: return "precondition failed";
    case LK_ERR_DEPTH: return "depth error";
    case LK_ERR_EXHAUSTED: return "parameter set exhausted";
    case LK_ERR_TYPE: return "type error";
    case LK_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int lk_set_jobs(int jobs) {
  return guarded([&] {
    if (jobs < 1) throw ConfigError("jobs must be positive");
    set_jobs(jobs);
  });
}

const char* lk_string_data(const lk_string* s) { return s ? s->s.c_str() : ""; }
size_t lk_string_size(const lk_string* s) { return s ? s->s.size() : 0; }
void lk_string_free(lk_string* s) { delete s; }

int lk_config_new(lk_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new lk_config{};
  });
}

void lk_config_free(lk_config* cfg) { delete cfg; }

int lk_config_load(lk_config* cfg, const char* path) {
  return guarded([&] {
    need(cfg, "cfg");
    need(path, "path");
    cfg->cfg = load_config(path, cfg->cfg);
  });
}

int lk_config_set(lk_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "cfg");
    need(key, "key");
    need(value, "value");
    RunConfig c = cfg->cfg;
    apply_setting(c, key, value);
    cfg->cfg = c;
  });
}

int lk_config_text(const lk_config* cfg, lk_string** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = make_string(to_string(cfg->cfg));
  });
}

int lk_run_new(const lk_config* cfg, lk_run** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    auto r = std::make_unique<lk_run>();
    r->res = run(cfg->cfg);
    *out = r.release();
  });
}

void lk_run_free(lk_run* run) { delete run; }

int lk_run_certified(const lk_run* run, int* certified) {
  return guarded([&] {
    need(run, "run");
    need(certified, "certified");
    *certified = run->res.certified ? 1 : 0;
  });
}

int lk_run_level_count(const lk_run* run, size_t* count) {
  return guarded([&] {
    need(run, "run");
    need(count, "count");
    *count = run->res.levels.size();
  });
}

int lk_run_level(const lk_run* run, size_t index, lk_level_row* row) {
  return guarded([&] {
    need(run, "run");
    need(row, "row");
    if (index >= run->res.levels.size()) throw DomainError("level index out of range");
    const LevelRow& L = run->res.levels[index];
    *row = lk_level_row{L.level, L.r, L.eps_target, L.U_norm, L.W_norm, L.residual, L.excluded_measure, L.wall_ms,
                        L.substeps};
  });
}

int lk_run_measure(const lk_run* run, double* total, double* bound) {
  return guarded([&] {
    need(run, "run");
    if (total) *total = run->res.measure.total;
    if (bound) *bound = run->res.measure.bound;
  });
}

int lk_run_write(const lk_run* run, const char* dir) {
  return guarded([&] {
    need(run, "run");
    need(dir, "dir");
    write_outputs(run->res, dir);
  });
}

int lk_run_summary_csv(const lk_run* run, lk_string** out) {
  return guarded([&] {
    need(run, "run");
    need(out, "out");
    *out = make_string(summary_csv(run->res));
  });
}

int lk_run_measure_csv(const lk_run* run, lk_string** out) {
  return guarded([&] {
    need(run, "run");
    need(out, "out");
    const MeasureReport& m = run->res.measure;
    std::ostringstream os;
    os << "level,zone_measure,cumulative,bound\n";
    for (std::size_t n = 0; n < m.per_level.size(); ++n)
      os << n << ',' << num(m.per_level[n]) << ',' << num(m.cumulative[n]) << ',' << num(m.bound) << '\n';
    *out = make_string(os.str());
  });
}

int lk_run_failures(const lk_run* run, lk_string** out) {
  return guarded([&] {
    need(run, "run");
    need(out, "out");
    std::ostringstream os;
    for (const TaggedCheck& t : run->res.checks)
      if (t.row.binding && !t.row.pass)
        os << t.level << ',' << t.sub << ',' << t.row.check << ',' << num(t.row.bound) << ',' << num(t.row.actual)
           << '\n';
    *out = make_string(os.str());
  });
}

int lk_cfrac_csv(const char* alpha, int depth, double bridges_A, lk_string** out) {
  return guarded([&] {
    need(alpha, "alpha");
    need(out, "out");
    if (depth < 1) throw ConfigError("depth must be positive");
    const ContinuedFraction cf = expand(Alpha::parse(alpha), depth);
    std::vector<char> sel(cf.a.size(), 0), bar(cf.a.size(), 0);
    if (bridges_A > 0.0) {
      const BridgeSelection b = select_bridges(cf, bridges_A);
      for (int i : b.index) {
        sel[i] = 1;
        if (i + 1 <= cf.depth()) bar[i + 1] = 1;
      }
    }
    std::ostringstream os;
    os << "k,a_k,q_k,selected_flag,Qbar_flag\n";
    for (int k = 0; k <= cf.depth(); ++k)
      os << k << ',' << cf.a[k] << ',' << cf.q[k] << ',' << int(sel[k]) << ',' << int(bar[k]) << '\n';
    *out = make_string(os.str());
  });
}

int lk_norms_csv(const lk_config* cfg, const char* input, lk_string** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    const RunConfig& c = cfg->cfg;
    const BasisPtr b = config_basis(c);
    std::vector<std::pair<std::string, FourierSeries>> items;
    PowerFourierSeries R;
    if (input) {
      items.push_back({"input", load_dump(b, input)});
    } else {
      const SkewMap m = make_model(parse_preset(c.preset), c.epsilon, b, c.d_max, config_ctx(c, c.r));
      const Su11Form f = conjugate_to_su11(m);
      items.push_back({"U0", f.U.v});
      items.push_back({"W0.a", f.W.a});
      items.push_back({"W0.b", f.W.b});
      R = f.R;
    }
    std::ostringstream os;
    os << "object,r,weighted_norm,analytic_norm\n";
    for (double r : {c.r, c.r / 2.0, c.r / 4.0}) {
      const NormContext ctx = config_ctx(c, r);
      NormContext an = ctx;
      an.weight = WeightFunction::make(WeightFamily::Analytic);
      for (const auto& [name, f] : items)
        os << name << ',' << num(r) << ',' << num(norm_r(f, ctx)) << ',' << num(analytic_norm(f, ctx)) << '\n';
      if (R.basis())
        os << "R0(s)," << num(r) << ',' << num(norm_rs(R, ctx, c.s)) << ',' << num(norm_rs(R, an, c.s)) << '\n';
    }
    *out = make_string(os.str());
  });
}

int lk_solve_homological(const lk_config* cfg, const char* input, const char* B_input, const char* b_input,
                         const lk_solve_params* params, const char* out_dir, lk_string** report, int* all_pass) {
  return guarded([&] {
    need(cfg, "cfg");
    need(input, "input");
    need(params, "params");
    need(report, "report");
    const RunConfig& c = cfg->cfg;
    const lk_solve_params& p = *params;
    if (p.l != 1 && p.l != 2) throw ConfigError("l must be 1 or 2");
    if (p.K < 1) throw ConfigError("K must be positive");
    if (!(p.gamma > 0.0) || !(p.tau > 0.0)) throw ConfigError("gamma and tau must be positive");
    const BasisPtr b = config_basis(c);

    HomologicalInput in;
    in.u = load_dump(b, input);
    in.B = B_input ? load_dump(b, B_input) : FourierSeries(b, 0);
    in.b = b_input ? load_dump(b, b_input) : FourierSeries(b, 0);
    in.l = p.l;
    in.K = p.K;
    in.Qbar = p.Qbar > 0 ? p.Qbar : p.K;
    in.log_Q_next = std::log(p.Q_next > 0.0 ? p.Q_next : 2.0);
    in.gamma = p.gamma;
    in.tau = p.tau;
    in.r = c.r;
    in.r_tilde = p.r_tilde > 0.0 ? p.r_tilde : 0.8 * c.r;
    in.sigma = p.sigma > 0.0 ? p.sigma : in.r_tilde / 4.0;
    in.eps0 = c.epsilon;
    in.force = c.force;

    const AlphaTable at(Alpha::parse(c.alpha, c.alpha_bits), std::max<long>(in.K, in.Qbar) + 1);
    // active rows: lambda + [B] in the Diophantine set for |k| < K
    const std::vector<cplx> avg = average(in.B);
    std::vector<char> active(b->size(), 0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < b->size(); ++i) {
      active[i] = dc_margin(b->lambda[i] + avg[i].real(), at, in.gamma, in.tau, in.K - 1, in.l == 2) >= 1.0;
      count += active[i];
    }
    if (count == 0) throw ParameterExhausted("solve-homological: no lambda row satisfies the Diophantine condition");
    NormContext ctx = config_ctx(c, c.r);
    ctx.active = &active;
    const SolveResult res = solve_homological(in, at, ctx);

    if (out_dir) {
      std::filesystem::create_directories(out_dir);
      write_dump(res.delta, std::filesystem::path(out_dir) / "delta.dump");
      write_dump(res.error_term, std::filesystem::path(out_dir) / "error_term.dump");
    }
    std::ostringstream os;
    os << "check,bound,actual,pass\n";
    os << "active_rows," << b->size() << ',' << count << ",1\n";
    bool ok = true;
    for (const CheckRow& r : res.report) {
      os << r.check << ',' << num(r.bound) << ',' << num(r.actual) << ',' << (r.pass ? 1 : 0) << '\n';
      if (r.binding && !r.pass) ok = false;
    }
    *report = make_string(os.str());
    if (all_pass) *all_pass = ok ? 1 : 0;
  });
}

int lk_verify_csv(const lk_config* cfg, const char* suite, lk_string** out, int* all_pass) {
  return guarded([&] {
    need(cfg, "cfg");
    need(suite, "suite");
    need(out, "out");
    const auto rows = run_verify(suite, cfg->cfg);
    bool ok = true;
    for (const auto& r : rows)
      if (r.row.binding && !r.row.pass) ok = false;
    *out = make_string(verify_csv(rows));
    if (all_pass) *all_pass = ok ? 1 : 0;
  });
}

}  // extern "C"
