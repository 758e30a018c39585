#include "model.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "parallel.hpp"

namespace liokam {

namespace {

constexpr double kPi = std::numbers::pi;
const double kRt2 = std::sqrt(2.0);

// cos(2 pi k theta + phi) and sin(...) as coefficient pairs
void add_cos(FourierSeries& f, int k, double amp, double phi) {
  if (f.kmax() < k) f.resize_kmax(k);
  for (std::size_t i = 0; i < f.rows(); ++i) {
    f.at(i, k) += 0.5 * amp * std::polar(1.0, phi);
    f.at(i, -k) += 0.5 * amp * std::polar(1.0, -phi);
  }
}

void add_sin(FourierSeries& f, int k, double amp, double phi) {
  if (f.kmax() < k) f.resize_kmax(k);
  const cplx two_i(0.0, 2.0);
  for (std::size_t i = 0; i < f.rows(); ++i) {
    f.at(i, k) += amp * std::polar(1.0, phi) / two_i;
    f.at(i, -k) -= amp * std::polar(1.0, -phi) / two_i;
  }
}

std::vector<cplx> rotation_entry(const BasisPtr& b, bool sine, double sign) {
  std::vector<cplx> v(b->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double t = 2.0 * kPi * b->lambda[i];
    v[i] = sign * (sine ? std::sin(t) : std::cos(t));
  }
  return v;
}

// f1 = sum a e^{-k} cos(2 pi k theta + 0.3 k), f2 = sum 0.8 a e^{-k} sin(2 pi k theta + 0.7 k), k = 1..32
void forcing(const BasisPtr& b, double a, FourierSeries& f1, FourierSeries& f2) {
  f1 = FourierSeries(b, 32);
  f2 = FourierSeries(b, 32);
  for (int k = 1; k <= 32; ++k) {
    add_cos(f1, k, a * std::exp(-static_cast<double>(k)), 0.3 * k);
    add_sin(f2, k, 0.8 * a * std::exp(-static_cast<double>(k)), 0.7 * k);
  }
}

// Shear polynomial coefficients f_m(theta) of x1^m, m = 0..3, times `scale`.
std::vector<FourierSeries> shear_terms(const BasisPtr& b, double scale, bool with_constant) {
  std::vector<FourierSeries> t(4, FourierSeries(b, 0));
  if (with_constant) {
    add_cos(t[0], 1, scale, 0.0);
    add_sin(t[0], 2, 0.5 * scale, 0.0);
  }
  t[1] = FourierSeries::constant(b, 0.5 * scale);
  add_cos(t[1], 1, 0.3 * scale, 0.0);
  t[2] = FourierSeries::constant(b, 0.5 * scale);
  t[3] = FourierSeries::constant(b, 0.2 * scale);
  return t;
}

// N = L(lambda) (0, sum_m f_m x1^m)
void add_rotated_shear(SkewMap& m, const std::vector<FourierSeries>& terms) {
  const auto msin = rotation_entry(m.basis, true, -1.0), cos_ = rotation_entry(m.basis, false, 1.0);
  for (int d = 0; d < static_cast<int>(terms.size()); ++d) {
    if (terms[d].is_zero()) continue;
    m.N1.coef(d, 0) = m.N1.coef(d, 0) + scale_rows(terms[d], msin);
    m.N2.coef(d, 0) = m.N2.coef(d, 0) + scale_rows(terms[d], cos_);
  }
}

double sampled_real(const std::vector<cplx>& s, int j) { return s[j].real(); }

}  // namespace

Preset parse_preset(const std::string& name) {
  if (name == "zero") return Preset::Zero;
  if (name == "a" || name == "forcing") return Preset::Forcing;
  if (name == "b" || name == "kick") return Preset::Kick;
  if (name == "c" || name == "stress") return Preset::Stress;
  if (name == "nonsymplectic") return Preset::NonSymplectic;
  throw ConfigError("unknown model.preset '" + name + "' (zero, a|forcing, b|kick, c|stress, nonsymplectic)");
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::Zero: return "zero";
    case Preset::Forcing: return "forcing";
    case Preset::Kick: return "kick";
    case Preset::Stress: return "stress";
    case Preset::NonSymplectic: return "nonsymplectic";
  }
  return "?";
}

SkewMap make_model(Preset preset, double eps, const BasisPtr& basis, int dmax, const NormContext& ctx) {
  if (dmax < 2) throw ConfigError("d_max must be at least 2");
  if ((preset == Preset::Kick || preset == Preset::Stress) && dmax < 3)
    throw ConfigError("the shear presets are cubic in x; d_max must be at least 3");
  SkewMap m;
  m.preset = preset;
  m.eps = eps;
  m.basis = basis;
  m.dmax = dmax;
  m.N1 = PowerFourierSeries(basis, dmax);
  m.N2 = PowerFourierSeries(basis, dmax);

  auto add_forcing = [&]() {
    FourierSeries f1, f2;
    forcing(basis, 1.0, f1, f2);
    double unit = norm_r((1.0 / kRt2) * (f1 + cplx(0.0, 1.0) * f2), ctx);
    m.forcing_scale = eps > 0.0 ? 0.5 * eps / unit : 0.0;
    m.N1.coef(0, 0) = m.forcing_scale * f1;
    m.N2.coef(0, 0) = m.forcing_scale * f2;
  };

  switch (preset) {
    case Preset::Zero: break;
    case Preset::Forcing: add_forcing(); break;
    case Preset::Kick:
      m.forcing_scale = eps;
      add_rotated_shear(m, shear_terms(basis, eps, true));
      break;
    case Preset::Stress:
      add_forcing();
      add_rotated_shear(m, shear_terms(basis, 0.1 * eps, false));
      break;
    case Preset::NonSymplectic: {
      // eps N = eps L(lambda) (x1, 0): det DF = 1 + eps
      m.N1.coef(1, 0) = scale_rows(FourierSeries::constant(basis, eps), rotation_entry(basis, false, 1.0));
      m.N2.coef(1, 0) = scale_rows(FourierSeries::constant(basis, eps), rotation_entry(basis, true, 1.0));
      break;
    }
  }
  for (int d = 0; d <= dmax; ++d)
    for (int m2 = 0; m2 <= d; ++m2) {
      m.N1.coef(d - m2, m2).trim();
      m.N2.coef(d - m2, m2).trim();
    }
  return m;
}

Su11Form conjugate_to_su11(const SkewMap& map) {
  const BasisPtr& b = map.basis;
  const cplx I(0.0, 1.0);
  Su11Form out;
  out.A.resize(b->size());
  for (std::size_t i = 0; i < b->size(); ++i) out.A[i] = std::polar(1.0, 2.0 * kPi * b->lambda[i]);
  out.U.v = (1.0 / kRt2) * (map.N1.coef(0, 0) + I * map.N2.coef(0, 0));
  const FourierSeries &S11 = map.N1.coef(1, 0), &S12 = map.N1.coef(0, 1), &S21 = map.N2.coef(1, 0),
                      &S22 = map.N2.coef(0, 1);
  out.W.a = 0.5 * ((S11 + S22) + I * (S21 - S12));
  out.W.b = 0.5 * ((S11 - S22) + I * (S21 + S12));
  out.W.a.trim();
  out.W.b.trim();

  // C(x) = (P1 + i P2) / sqrt 2 in real x, then x1 = (v + w)/sqrt 2, x2 = -i (v - w)/sqrt 2
  const int dm = map.dmax;
  PowerFourierSeries X1(b, dm), X2(b, dm);
  X1.coef(1, 0) = FourierSeries::constant(b, 1.0 / kRt2);
  X1.coef(0, 1) = FourierSeries::constant(b, 1.0 / kRt2);
  X2.coef(1, 0) = FourierSeries::constant(b, -I / kRt2);
  X2.coef(0, 1) = FourierSeries::constant(b, I / kRt2);
  std::vector<PowerFourierSeries> p1(dm + 1), p2(dm + 1);
  PowerFourierSeries one(b, dm);
  one.coef(0, 0) = FourierSeries::constant(b, 1.0);
  p1[0] = one;
  p2[0] = one;
  for (int d = 1; d <= dm; ++d) {
    p1[d] = multiply(p1[d - 1], X1);
    p2[d] = multiply(p2[d - 1], X2);
  }
  PowerFourierSeries R(b, dm);
  for (int d = 2; d <= dm; ++d)
    for (int m2 = 0; m2 <= d; ++m2) {
      const int m1 = d - m2;
      FourierSeries c = (1.0 / kRt2) * (map.N1.coef(m1, m2) + I * map.N2.coef(m1, m2));
      if (c.is_zero()) continue;
      R = R + scale(c, multiply(p1[m1], p2[m2]));
    }
  out.R = drop_low(R);
  return out;
}

Vec2 apply_map(const SkewMap& map, std::size_t row, double theta, Vec2 x) {
  const double t = 2.0 * kPi * map.basis->lambda[row];
  const double c = std::cos(t), s = std::sin(t);
  Vec2 y{c * x.x1 - s * x.x2, s * x.x1 + c * x.x2};
  y.x1 += evaluate(map.N1, row, theta, x.x1, x.x2).real();
  y.x2 += evaluate(map.N2, row, theta, x.x1, x.x2).real();
  return y;
}

AreaReport check_area(const SkewMap& map, int theta_points, int x_points, double radius, std::size_t lambda_stride) {
  if (theta_points < 1 || x_points < 1 || lambda_stride < 1) throw ConfigError("check_area: empty grid");
  const std::size_t n = map.basis->size();
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < n; i += lambda_stride) rows.push_back(i);
  struct Out {
    double defect = 0.0, theta = 0.0;
  };
  std::vector<Out> out(rows.size());
  const double h = 1e-6;
  parallel_for(rows.size(), [&](std::size_t ri) {
    const std::size_t i = rows[ri];
    for (int j = 0; j < theta_points; ++j) {
      const double th = static_cast<double>(j) / theta_points;
      for (int a = 0; a < x_points; ++a)
        for (int bb = 0; bb < x_points; ++bb) {
          const double x1 = x_points == 1 ? 0.0 : -radius + 2.0 * radius * a / (x_points - 1);
          const double x2 = x_points == 1 ? 0.0 : -radius + 2.0 * radius * bb / (x_points - 1);
          Vec2 p1 = apply_map(map, i, th, {x1 + h, x2}), m1 = apply_map(map, i, th, {x1 - h, x2});
          Vec2 p2 = apply_map(map, i, th, {x1, x2 + h}), m2 = apply_map(map, i, th, {x1, x2 - h});
          const double j11 = (p1.x1 - m1.x1) / (2 * h), j21 = (p1.x2 - m1.x2) / (2 * h);
          const double j12 = (p2.x1 - m2.x1) / (2 * h), j22 = (p2.x2 - m2.x2) / (2 * h);
          const double def = std::abs(j11 * j22 - j12 * j21 - 1.0);
          if (def > out[ri].defect) out[ri] = {def, th};
        }
    }
  });
  AreaReport rep;
  rep.samples = rows.size() * static_cast<std::size_t>(theta_points) * x_points * x_points;
  for (std::size_t ri = 0; ri < rows.size(); ++ri)
    if (ri == 0 || out[ri].defect > rep.max_defect) {
      rep.max_defect = out[ri].defect;
      rep.worst_theta = out[ri].theta;
      rep.worst_lambda = map.basis->lambda[rows[ri]];
    }
  return rep;
}

double factor_det_defect(const Factor& f, int theta_points, const std::vector<char>* active) {
  const std::size_t n = f.P.rows();
  std::vector<double> worst(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    if (active && !(*active)[i]) return;
    auto P = sample_row(f.P, i, theta_points), Q = sample_row(f.Q, i, theta_points);
    for (int j = 0; j < theta_points; ++j)
      worst[i] = std::max(worst[i], std::abs(std::norm(P[j]) - std::norm(Q[j]) - 1.0));
  });
  return worst.empty() ? 0.0 : *std::max_element(worst.begin(), worst.end());
}

double composition_det_defect(const std::vector<Factor>& fs, int theta_points, const std::vector<char>* active) {
  if (fs.empty()) return 0.0;
  const std::size_t n = fs.front().P.rows();
  std::vector<double> worst(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    if (active && !(*active)[i]) return;
    std::vector<cplx> m00(theta_points, 1.0), m01(theta_points, 0.0), m10(theta_points, 0.0), m11(theta_points, 1.0);
    for (const auto& f : fs) {
      auto P = sample_row(f.P, i, theta_points), Q = sample_row(f.Q, i, theta_points);
      for (int j = 0; j < theta_points; ++j) {
        // M <- M [[P, Q], [conj Q, conj P]]
        cplx a = m00[j] * P[j] + m01[j] * std::conj(Q[j]);
        cplx b = m00[j] * Q[j] + m01[j] * std::conj(P[j]);
        cplx c = m10[j] * P[j] + m11[j] * std::conj(Q[j]);
        cplx d = m10[j] * Q[j] + m11[j] * std::conj(P[j]);
        m00[j] = a;
        m01[j] = b;
        m10[j] = c;
        m11[j] = d;
      }
    }
    for (int j = 0; j < theta_points; ++j)
      worst[i] = std::max(worst[i], std::abs(m00[j] * m11[j] - m01[j] * m10[j] - 1.0));
  });
  return *std::max_element(worst.begin(), worst.end());
}

TorusApprox reconstruct_torus(const std::vector<Factor>& factors, const BasisPtr& basis, int level) {
  FourierSeries x(basis, 0);
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    FourierSeries nx = it->delta;
    if (!x.is_zero()) nx = nx + multiply(it->P, x) + multiply(it->Q, conj_fn(x));
    x = std::move(nx);
  }
  TorusApprox t;
  t.X1 = x;
  FourierSeries xc = conj_fn(x);
  t.K1 = (1.0 / kRt2) * (x + xc);
  t.K2 = cplx(0.0, -1.0 / kRt2) * (x - xc);
  t.K1.trim();
  t.K2.trim();
  t.level = level;
  t.factors = factors.size();
  return t;
}

ResidualReport residual(const SkewMap& map, const TorusApprox& torus, const PhaseTable& ph, int theta_points,
                        const std::vector<char>* active, double s) {
  const std::size_t n = map.basis->size();
  const FourierSeries K1s = shift(torus.K1, ph), K2s = shift(torus.K2, ph);
  struct Mono {
    int m1, m2;
    const FourierSeries* c1;
    const FourierSeries* c2;
  };
  std::vector<Mono> monos;
  for (int d = 0; d <= map.dmax; ++d)
    for (int m2 = 0; m2 <= d; ++m2) {
      const int m1 = d - m2;
      const auto &c1 = map.N1.coef(m1, m2), &c2 = map.N2.coef(m1, m2);
      if (c1.is_zero() && c2.is_zero()) continue;
      monos.push_back({m1, m2, &c1, &c2});
    }

  ResidualReport rep;
  rep.per_lambda.assign(n, 0.0);
  std::vector<double> fl(n, 0.0), exc(n, 0.0);
  const int N = theta_points;
  parallel_for(n, [&](std::size_t i) {
    if (active && !(*active)[i]) return;
    const auto k1 = sample_row(torus.K1, i, N), k2 = sample_row(torus.K2, i, N);
    const auto k1s = sample_row(K1s, i, N), k2s = sample_row(K2s, i, N);
    const double t = 2.0 * kPi * map.basis->lambda[i];
    const double c = std::cos(t), sn = std::sin(t);
    std::vector<double> F1(N), F2(N);
    for (int j = 0; j < N; ++j) {
      const double x1 = sampled_real(k1, j), x2 = sampled_real(k2, j);
      F1[j] = c * x1 - sn * x2;
      F2[j] = sn * x1 + c * x2;
    }
    for (const auto& m : monos) {
      const auto a = sample_row(*m.c1, i, N), b = sample_row(*m.c2, i, N);
      for (int j = 0; j < N; ++j) {
        const double p = std::pow(sampled_real(k1, j), m.m1) * std::pow(sampled_real(k2, j), m.m2);
        F1[j] += a[j].real() * p;
        F2[j] += b[j].real() * p;
      }
    }
    double res = 0.0, kmax = 0.0, fmax = 0.0;
    for (int j = 0; j < N; ++j) {
      res = std::max(res, std::hypot(F1[j] - k1s[j].real(), F2[j] - k2s[j].real()));
      kmax = std::max(kmax, std::hypot(k1[j].real(), k2[j].real()));
      fmax = std::max(fmax, std::hypot(F1[j], F2[j]));
    }
    rep.per_lambda[i] = res;
    fl[i] = 64.0 * DBL_EPSILON * (kmax + fmax);
    exc[i] = kmax;
  });
  for (std::size_t i = 0; i < n; ++i) {
    rep.max = std::max(rep.max, rep.per_lambda[i]);
    rep.floor = std::max(rep.floor, fl[i]);
    rep.excursion = std::max(rep.excursion, exc[i]);
  }
  rep.outside = rep.excursion >= s;
  return rep;
}

}  // namespace liokam
