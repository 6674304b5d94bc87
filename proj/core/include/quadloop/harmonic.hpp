#pragma once

#include <utility>
#include <vector>

#include "quadloop/config.hpp"
#include "quadloop/errors.hpp"
#include "quadloop/types.hpp"

namespace quadloop {

// Open arc of the unit circle from `start` to `end`, counterclockwise.
struct BoundaryArc {
  double start = 0.0;
  double end = 0.0;
  double length() const { return end - start; }
};

// Finite union of disjoint open boundary arcs, normalized on construction.
class BoundaryArcSet {
 public:
  BoundaryArcSet() = default;
  static BoundaryArcSet from_arcs(std::vector<BoundaryArc> arcs);
  static BoundaryArcSet full_circle();

  const std::vector<BoundaryArc>& arcs() const { return arcs_; }
  double total_length() const;
  bool covers_circle() const;
  bool contains(double angle) const;
  // Distance from `angle` to the set, along the circle; 0 inside.
  double distance(double angle) const;
  // Each arc shortened symmetrically by `fraction` of its length.
  BoundaryArcSet shrunk(double fraction) const;
  BoundaryArcSet rotated(double phi) const;

 private:
  std::vector<BoundaryArc> arcs_;  // sorted, disjoint, starts in [0, 2pi)
};

double arc_measure(const BoundaryArcSet& gamma);

struct Polynomial {
  std::vector<Cx> coeffs;  // coeffs[k] multiplies z^k
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Cx eval(Cx z) const;
};

struct CertificateReport {
  bool pass = false;
  double value_at_zero_error = 0.0;
  double sup_re_disc = 0.0;      // max Re theta on the disc grid (must be < 1)
  double margin_off_gamma = 0.0; // max Re theta on boundary grid off Gamma (must be < 0)
  int boundary_grid = 0;
  int degree = 0;
};

struct HarmonicCertificate {
  Polynomial theta;
  double delta = 0.0;
  CertificateReport build_report;
};

struct CertificateOptions {
  double shrink_fraction = 0.01;
  int build_grid = 2048;
  int degree_max = 4096;
};

HarmonicCertificate certificate_build(const BoundaryArcSet& gamma, double delta,
                                      const CertificateOptions& opts = {});

CertificateReport certificate_verify(const HarmonicCertificate& cert,
                                     const BoundaryArcSet& gamma, int boundary_grid);

// Lemma 5.3 branch maps, exposed for tests.
Cx lemma53_g(Cx s);                         // 1 - sqrt(1 - s), principal branch
Cx lemma53_g_sigma(Cx s, double sigma);     // 1 - sqrt(1 - s/sigma)
Cx lemma53_psi(Cx t, double sigma);         // sigma * t * (2 - t), inverse of g_sigma
bool lemma53_in_U(Cx s, double eps);        // Delta(eps) plus open sector 0 < arg s < eps
bool lemma53_in_V(Cx t, double eps);        // V = g(U), tested through psi

struct KernelLadderEntry {
  int degree = 0;
  double best_margin = 0.0;  // worst Re theta over the sampled bad set
  int iterations = 0;
};

struct KernelReport {
  int grid_radial = 0;
  int grid_angular = 0;
  int degree = 0;           // degree of the accepted (or last attempted) candidate
  double margin = 0.0;      // worst sampled Re theta on the bad set after Horner re-evaluation
  double sup_re = 0.0;      // max sampled Re theta over the whole disc
  bool verified = false;
  std::vector<KernelLadderEntry> ladder;
};

struct KernelCertificate {
  double delta = 0.0;
  Polynomial theta;
  KernelReport report;
};

struct KernelOptions {
  int grid_radial = 32;
  int grid_angular = 128;
  std::vector<int> degree_ladder = {60, 120, 240};
  double margin = 0.05;     // required slack: Re theta <= -margin on the sample
  int max_iterations = 160;
};

// Constrained least-squares search for the Lemma 5.3 witness polynomial.
// Throws DegreeExhaustedError (carrying the best margin) when the ladder fails.
KernelCertificate lemma53_kernel(double eps, const KernelOptions& opts = {});

}  // namespace quadloop
