#pragma once

#include <functional>
#include <vector>

#include "quadloop/config.hpp"
#include "quadloop/errors.hpp"
#include "quadloop/types.hpp"

namespace quadloop {

// Finite-spectrum analytic disc: sigma -> sum_{m=0}^{M} a_m sigma^m with
// values in C^3, plus the boundary grid used for all pointwise work.
class AnalyticDisc {
 public:
  AnalyticDisc() = default;
  AnalyticDisc(std::vector<C3> coeffs, int n_grid);

  static AnalyticDisc constant(const C3& value, int m_deg, int n_grid);

  const std::vector<C3>& coeffs() const { return coeffs_; }
  int m_deg() const { return static_cast<int>(coeffs_.size()) - 1; }
  int n_grid() const { return n_grid_; }

  C3 eval(Cx sigma) const;
  C3 center() const { return coeffs_.empty() ? C3{} : coeffs_[0]; }

  // Values on the uniform boundary grid sigma_j = exp(2 pi i j / N).
  std::vector<C3> boundary_samples() const;

  // Magnitude of the top coefficient, reported as a spectral-decay diagnostic.
  double tail_magnitude() const;

 private:
  std::vector<C3> coeffs_;
  int n_grid_ = 0;
};

struct ProjectionResult {
  AnalyticDisc disc;
  double residual = 0.0;  // l2 energy in the non-representable frequencies
};

// Discrete analytic projection: FFT of N boundary samples, the frequencies
// 0..m_deg become the disc, everything else is the holomorphy defect.
ProjectionResult analytic_project(const std::vector<C3>& boundary_samples, int m_deg);

// Pointwise retraction to the quadric on the boundary grid followed by
// analytic projection. Fails SpectralOverflow if the residual exceeds
// tau_spec (under-resolved grid), since rho of a holomorphic disc is again
// holomorphic.
AnalyticDisc disc_retract(const AnalyticDisc& x, const Tolerances& tol = {});

// Trapezoidal boundary mean of f over x(e^{2 pi i tau}), tau in [0,1).
Cx boundary_mean(const std::function<Cx(const C3&)>& f, const AnalyticDisc& x);

// sup-norm distance, evaluated on the shared boundary grid (valid for
// holomorphic differences by the maximum principle).
double disc_distance(const AnalyticDisc& x, const AnalyticDisc& y);

}  // namespace quadloop
