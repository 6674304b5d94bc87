#pragma once

#include <vector>

#include "quadloop/config.hpp"
#include "quadloop/disc.hpp"
#include "quadloop/errors.hpp"
#include "quadloop/quadric.hpp"
#include "quadloop/types.hpp"

namespace quadloop {

// Chart of the du-kernel bundle E over M[a,b]: tau is the coefficient along
// e_basis(base), valid while |tau| < r_V(base).
struct FiberChart {
  QuadricPoint base;
  Cx tau;
  double r_V = 0.0;
};

// Validity radius of the fiber chart at z; proportional to kappa(z), which on
// the quadric encodes the height u(z) above the real locus.
double fiber_radius(const QuadricPoint& z);

FiberChart make_fiber_chart(const QuadricPoint& z, Cx tau, const Tolerances& tol = {});

// The fiberwise map phi: solves q(zeta, z) = 0 on M with prescribed
// E-component tau * e_basis(z), by complex Newton from zeta = z + tau e.
QuadricPoint phi_map(const FiberChart& chart, const Tolerances& tol = {});

// Residuals of the defining equations of phi at a solved point, for audits.
struct PhiResiduals {
  double quadric = 0.0;   // |sum zeta^2 - 1|
  double level = 0.0;     // |q(zeta, z)|
  double fiber = 0.0;     // |<zeta - z, e> - tau|
};
PhiResiduals phi_residuals(const FiberChart& chart, const QuadricPoint& zeta);

struct FiberScan {
  std::vector<double> offsets;  // signed offsets t along tau = t e^{i beta}
  std::vector<double> values;   // u(phi(t e^{i beta} e_basis(z)))
  bool monotone_left = false;   // decreasing toward 0 from the left
  bool monotone_right = false;  // increasing away from 0 on the right
  bool min_at_zero = false;     // t = 0 is the unique sampled minimum
};

// Profile of u along a real line through the origin of the fiber E_z.
FiberScan fiber_line_scan(const QuadricPoint& z, double beta, int steps,
                          const Tolerances& tol = {});

// Largest safe boundary push height: half of the worst-case u-increase
// attainable within the fiber charts along the disc boundary.
double delta0_scan(const AnalyticDisc& kappa_disc, const RegionSpec& region,
                   const Tolerances& tol = {});

// Single-disc boundary-pushing problem: push u up by alpha(s) along the
// boundary of kappa_disc while pinning the center, via the (t s)^J substitution.
struct PushProblem {
  AnalyticDisc kappa_disc;    // boundary must classify into M(a, b)
  std::vector<double> alpha;  // per boundary sample, values in (0, delta0]
  double eta = 0.0;
  int J = 16;                 // Fejer window and substitution exponent
  RegionSpec region;

  void validate(double delta0, const Tolerances& tol = {}) const;
};

struct PushReport {
  double delta0 = 0.0;
  double identity_error = 0.0;    // (i)  sup |lambda(0, s) - kappa(s)|
  double center_error = 0.0;      // (ii) sup_t |lambda(t, 0) - kappa(0)|
  double boundary_low = 0.0;      // (iii) min of u(lambda(1,s)) - u(kappa(s)) - (alpha - eta)
  double boundary_high = 0.0;     // (iii) min of (alpha + eta) - (u(lambda(1,s)) - u(kappa(s)))
  double interior_low = 0.0;      // (iv) analogous margins over all grid t
  double interior_high = 0.0;
  bool pass_i = false;
  bool pass_ii = false;
  bool pass_iii = false;
  bool pass_iv = false;
  double fejer_error = 0.0;       // max |u(psi) - u(rho(chi))| on the check grid
  double section_phase = 0.0;     // total phase correction applied to the section
  bool degree_support_ok = false; // added spectrum lies on exponents i + jJ, j >= 1
};

struct PushFamily {
  std::vector<double> t_grid;
  std::vector<AnalyticDisc> discs;  // lambda(t, .) per grid t
  PushReport report;
};

PushFamily push_disc(const PushProblem& p, const Tolerances& tol = {},
                     const GridDefaults& grids = {});

}  // namespace quadloop
