#pragma once

#include <optional>
#include <vector>

#include "quadloop/config.hpp"
#include "quadloop/errors.hpp"
#include "quadloop/types.hpp"

namespace quadloop {

// The quadric {z in C^3 : z1^2 + z2^2 + z3^2 = 1}, its real locus
// K = {z in M : Im z = 0} (the unit 2-sphere), the exhaustion u(z) = |z|^2,
// and the explicit holomorphic retraction rho(w) = w / sqrt(sum w_j^2).

struct AmbientPoint {
  C3 w;
};

struct QuadricPoint {
  C3 z;
};

// Levels of the exhaustion; a > 1 keeps K strictly inside M(a).
struct RegionSpec {
  double a = 1.5;
  double b = 4.0;
  double c = 2.5;

  void validate() const;
};

struct TangentVector {
  QuadricPoint base;
  C3 v;
};

// Point of C^2 \ {0}; the double cover of M' is the quotient by w ~ -w.
struct CoverPoint {
  Cx w1;
  Cx w2;
};

struct Classification {
  double u = 0.0;          // |z|^2
  double kappa = 0.0;      // ||Im z||_2
  bool in_K = false;
  bool in_M_prime = false; // kappa > tau_K
  bool in_Ma = false;      // u < a
  bool in_Mab_open = false;  // a < u < b
  bool in_Mab_closed = false;  // a <= u <= b
};

struct CoverLift {
  std::vector<CoverPoint> path;  // one entry per loop sample
  bool closed = false;           // endpoint equals start (not its negative)
};

// g(w) = sum w_j^2. Domain of the retraction: g not on the cut (-inf, 0].
Cx quadric_g(const C3& w);
bool in_retraction_domain(const C3& w, const Tolerances& tol = {});

// rho(w) = w / sqrt(g(w)), principal branch. Throws BranchCut near the cut.
QuadricPoint retract_ambient(const AmbientPoint& w, const Tolerances& tol = {});
C3 retract_point(const C3& w, const Tolerances& tol = {});

Classification classify(const QuadricPoint& z, const RegionSpec& region,
                        const Tolerances& tol = {});

// Holomorphic projection v - (sum z_j v_j) z onto T_z M (uses sum z_j^2 = 1).
TangentVector project_tangent(const QuadricPoint& z, const C3& v);

// Unit-norm spanning vector of E_z = {v : sum z_j v_j = 0, sum conj(z_j) v_j = 0},
// phase-fixed so that the largest-modulus component is real positive
// (ties broken by lowest index). Throws CriticalPoint on the real locus.
TangentVector e_basis(const QuadricPoint& z, const Tolerances& tol = {});

// omega = z1 dz2^dz3 - z2 dz1^dz3 + z3 dz1^dz2 evaluated on a pair of tangents.
Cx omega_eval(const QuadricPoint& z, const C3& v, const C3& w);

// Composite C^2\{0} -> W0 = {sum z^2 = 0} -> M'.
QuadricPoint cover_push(const CoverPoint& w, const Tolerances& tol = {});

// Inverse construction M' -> W0 -> two preimages +-w in C^2 \ {0}.
std::pair<CoverPoint, CoverPoint> cover_preimages(const QuadricPoint& z,
                                                  const Tolerances& tol = {});

// Branch-tracked lift of a sampled loop in M'. Samples are the loop values on a
// uniform circle grid; the last sample is compared back against the first.
CoverLift cover_lift(const std::vector<C3>& loop_samples, const Tolerances& tol = {});

}  // namespace quadloop
