#pragma once

#include <functional>
#include <vector>

#include "quadloop/config.hpp"
#include "quadloop/errors.hpp"
#include "quadloop/loop.hpp"
#include "quadloop/quadric.hpp"
#include "quadloop/types.hpp"

namespace quadloop {

// Analytic disc of loops: Xi(sigma, s) = sum_m sigma^m A_m(s), each sigma
// coefficient A_m itself a Fourier loop. Holomorphic in sigma by construction.
class LoopDisc {
 public:
  LoopDisc() = default;
  explicit LoopDisc(std::vector<Loop> coeffs);

  int m_deg() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Loop>& coeffs() const { return coeffs_; }
  const Loop& center() const { return coeffs_.front(); }

  Loop eval(Cx sigma) const;  // Horner over loop coefficients

  // Sup over an (interior + boundary) sigma grid and the loop grid of the
  // quadric defect; the membership invariant check.
  double quadric_defect_sup() const;

 private:
  std::vector<Loop> coeffs_;
};

// Sample a sigma-circle family of loops back into a LoopDisc (FFT in sigma).
LoopDisc loop_disc_from_samples(const std::vector<Loop>& circle_samples, int m_deg);

struct RegularLift {
  std::vector<double> t_grid;
  std::vector<LoopDisc> discs;
  double boundary_kappa_min = 0.0;  // min kappa over all boundary circles
  double disc0_kappa_min = 0.0;     // min kappa over the full t = 0 disc
  bool anchored = false;            // t = 0 disc entirely off the real locus
  double center_error = 0.0;        // sup_t || disc center - x_t ||
  double epsilon_push = 0.0;
  int retries_used = 0;
  double frame_holonomy = 0.0;      // accumulated push-frame rotation over t
};

// Construct-and-verify lift of a loop curve: centers reproduce the curve,
// boundary circles are pushed off the real locus by eps_push. Curves touching
// K get the unanchored variant (every disc pushed, including t = 0).
RegularLift build_regular_lift(const LoopCurve& c, double eps_push, int max_retries,
                               const Tolerances& tol = {}, const GridDefaults& grids = {},
                               const RunSeed& seed = {});

struct SafetyRadius {
  double epsilon = 0.0;
  double cut_margin = 0.0;  // distance of sampled disc values to the branch cut
  double k_margin = 0.0;    // calibrated radius keeping boundary loops off K
};

SafetyRadius safety_radius(const RegularLift& L, const Tolerances& tol = {});

using LoopFunctional = std::function<Cx(const Loop&)>;

struct ChainRecord {
  double t = 0.0;
  Loop center;
  Cx value;                       // f_t(x_t) by the boundary-mean formula
  double delta1 = 0.0;            // validity ball radius at this step
  double overlap_residual = 0.0;  // |f_i - f_{i+1}| at the shared probe center
};

struct ContinuationChain {
  std::vector<ChainRecord> records;
  double delta = 0.0;    // step bound: ||xi_t - xi_s|| < eps/2 for |t-s| < delta
  double epsilon = 0.0;  // safety radius of the lift
  Cx start_value() const { return records.front().value; }
  Cx end_value() const { return records.back().value; }
};

// Sliding-disc continuation of f along c over the lift L.
ContinuationChain slide(const LoopFunctional& f, const LoopCurve& c,
                        const RegularLift& L, const Tolerances& tol = {});

// |boundary mean of f - f(center)| for a disc of loops inside M'-loops.
double mean_value_audit(const LoopFunctional& f, const LoopDisc& D,
                        const Tolerances& tol = {});

}  // namespace quadloop
