#pragma once

#include <vector>

#include "quadloop/config.hpp"
#include "quadloop/continuation.hpp"
#include "quadloop/errors.hpp"
#include "quadloop/loop.hpp"
#include "quadloop/quadric.hpp"
#include "quadloop/types.hpp"

namespace quadloop {

struct ExtensionDiagnostics {
  int schedule = 0;        // which radial extension family was used
  int damping = 0;         // escalation level of the radial exponents
  int gl_nodes = 0;        // Gauss-Legendre radial resolution
  double min_cover_norm = 0.0;  // min |W| over the extension grid
};

struct LoopFunctionValue {
  Cx value;
  ExtensionDiagnostics diag;
};

struct FEvalOptions {
  int schedule = 0;   // 0: c_n r^{|n|};  1: c_0 (1 - r^2) + r^2 * schedule 0
  int gl_nodes = 32;
  int max_damping = 6;
};

// f(x) = integral over the disc of xi^* omega, where xi extends x through the
// double cover: closed cover lift, spectral radial damping, push-down to M'.
LoopFunctionValue f_eval(const Loop& x, const FEvalOptions& opts = {},
                         const Tolerances& tol = {});

// (7.6): df(v) = integral over [0, 2pi) of omega(v(s), x'(s)) ds.
// v_samples live on the loop evaluation grid and must be tangent to M.
Cx df_eval(const Loop& x, const std::vector<C3>& v_samples, const Tolerances& tol = {});

// Quadrature of omega over the unit 2-sphere of real points; converges to 4 pi.
double period_K(int resolution = 256, bool flip_orientation = false);

// Rotationally symmetric collapse of the closed disc onto K: polar angle
// Theta(|sigma|) = pi (3|sigma| - |sigma|^3) / 2, azimuth arg sigma.
C3 collapse_map(Cx sigma);

struct DemoCurve {
  LoopCurve curve;       // t -> x_t with x_t(s) = collapse(1 - t + t e^{is})
  C3 collapse_point;     // common value of the (constant) end loops
};

DemoCurve demo_curve(int t_grid, int n_loop = 32, int sobolev_k = 1);

struct MonodromyOptions {
  double eps_push = 0.5;
  int t_grid = 256;
  int max_retries = 8;
  FEvalOptions f_opts;
  RunSeed seed;
};

struct MonodromyResult {
  Cx increment;              // f_end - f_start along the chain
  ContinuationChain chain;
  double frame_holonomy = 0.0;
  bool anchored = false;
  double boundary_kappa_min = 0.0;
};

// build_regular_lift + slide with f_eval over a closed loop curve.
MonodromyResult monodromy_increment(const LoopCurve& c, const MonodromyOptions& opts = {},
                                    const Tolerances& tol = {});

}  // namespace quadloop
