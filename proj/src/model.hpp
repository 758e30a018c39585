#pragma once

#include <string>
#include <vector>

#include "fourier.hpp"
#include "jet.hpp"

namespace liokam {

enum class Preset {
  Zero,
  Forcing,        // (a): x-independent forcing, W = R = 0
  Kick,           // (b): rotation after a potential-generated shear
  Stress,         // (c): forcing plus a weak shear
  NonSymplectic,  // deliberate det != 1, for the area check only
};

Preset parse_preset(const std::string& name);
std::string preset_name(Preset p);

// F(x, theta, lambda) = L(lambda) x + eps N(x, theta, lambda) with L the
// rotation by 2 pi lambda. N1, N2 hold eps N as polynomials in the real
// coordinates: coef(m1, m2) multiplies x1^m1 x2^m2.
struct SkewMap {
  Preset preset = Preset::Zero;
  double eps = 0.0;
  double forcing_scale = 0.0;  // amplitude a of the forcing part
  BasisPtr basis;
  int dmax = 6;
  PowerFourierSeries N1, N2;
};

// The forcing amplitude is chosen so that ||U_0||_{r} = eps / 2 under ctx.
SkewMap make_model(Preset preset, double eps, const BasisPtr& basis, int dmax, const NormContext& ctx);

// X = M x with M = [[1, i], [1, -i]] / sqrt 2; X = (v, conj v).
struct Su11Form {
  std::vector<cplx> A;  // e^{i 2 pi lambda}
  C2Vector U;
  Su11Matrix W;
  PowerFourierSeries R;  // first component of M P(M^{-1} X), |m| >= 2
};
Su11Form conjugate_to_su11(const SkewMap& map);

struct Vec2 {
  double x1 = 0.0, x2 = 0.0;
};
// Direct pointwise evaluation; slow, for small grids.
Vec2 apply_map(const SkewMap& map, std::size_t row, double theta, Vec2 x);

struct AreaReport {
  double max_defect = 0.0;  // max |det DF - 1|
  double worst_theta = 0.0;
  double worst_lambda = 0.0;
  std::size_t samples = 0;
};
// Central differences with step 1e-6 on an (x, theta) grid: x in
// [-radius, radius]^2, every lambda_stride-th row.
AreaReport check_area(const SkewMap& map, int theta_points, int x_points, double radius, std::size_t lambda_stride);

// One affine factor X_prev = e^{D} X + Delta with e^{D} = [[P, Q], [conj Q, conj P]].
struct Factor {
  int level = 0;
  int sub = 0;
  FourierSeries d;  // generator entry of D
  FourierSeries P, Q;
  FourierSeries delta;
};

// max over rows and theta-grid of | |P|^2 - |Q|^2 - 1 |
double factor_det_defect(const Factor& f, int theta_points, const std::vector<char>* active = nullptr);
// Same for the linear part of the whole composition f_0 o f_1 o ... .
double composition_det_defect(const std::vector<Factor>& fs, int theta_points, const std::vector<char>* active = nullptr);

struct TorusApprox {
  FourierSeries K1, K2;  // real-valued
  FourierSeries X1;      // first complex coordinate
  int level = 0;
  std::size_t factors = 0;
};

// Pushes X = 0 through the factors right to left, then K = sqrt 2 (Re X1, Im X1).
TorusApprox reconstruct_torus(const std::vector<Factor>& factors, const BasisPtr& basis, int level = 0);

struct ResidualReport {
  std::vector<double> per_lambda;  // sup_theta |F(K(theta)) - K(theta + alpha)|, 0 for inactive rows
  double max = 0.0;
  double floor = 0.0;      // 64 DBL_EPSILON (sup |K| + sup |F(K)|)
  double excursion = 0.0;  // sup |K|
  bool outside = false;    // excursion >= s
};
ResidualReport residual(const SkewMap& map, const TorusApprox& torus, const PhaseTable& ph, int theta_points,
                        const std::vector<char>* active, double s);

}  // namespace liokam
