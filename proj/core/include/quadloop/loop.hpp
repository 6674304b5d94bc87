#pragma once

#include <string>
#include <vector>

#include "quadloop/config.hpp"
#include "quadloop/errors.hpp"
#include "quadloop/types.hpp"

namespace quadloop {

// Truncated Fourier loop S^1 -> C^3: s -> sum_{|n|<=N} c_n e^{ins}, carried in
// the Hilbertian Sobolev class W^{k,2} with spectral weight (1+n^2)^k.
class Loop {
 public:
  Loop() = default;
  Loop(std::vector<C3> coeffs, int sobolev_k);  // coeffs size 2N+1, index n+N

  static Loop constant(const C3& value, int n_loop, int sobolev_k);

  // Fourier analysis of uniform samples, truncated at n_loop. Returns the
  // truncation defect (l2 energy of dropped modes) through *defect if set.
  static Loop from_samples(const std::vector<C3>& samples, int n_loop, int sobolev_k,
                           double* defect = nullptr);

  int n_loop() const { return (static_cast<int>(coeffs_.size()) - 1) / 2; }
  int sobolev_k() const { return sobolev_k_; }
  const std::vector<C3>& coeffs() const { return coeffs_; }
  const C3& coeff(int n) const { return coeffs_[static_cast<std::size_t>(n + n_loop())]; }

  C3 eval(double s) const;
  C3 eval(Cx unit) const;  // evaluation at a unit-modulus point e^{is}

  int grid_size() const;               // power of two >= 4*n_loop
  std::vector<C3> grid_samples() const;

  double sobolev_norm() const;

  // s-derivative as a loop (spectral differentiation).
  Loop derivative() const;

 private:
  std::vector<C3> coeffs_;
  int sobolev_k_ = 1;
};

struct LoopAnalysis {
  double quadric_defect_sup = 0.0;  // sup over grid of |sum z^2 - 1|
  double kappa_min = 0.0;
  double sobolev_norm = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
};

LoopAnalysis loop_analyze(const Loop& x);

// Pointwise retraction on the grid, re-expanded and truncated at n_loop.
Loop loop_retract(const Loop& x, const Tolerances& tol = {});

// w(x) = sup_s u(rho(x(s))) on the evaluation grid.
double loop_exhaustion(const Loop& x, const Tolerances& tol = {});

// Sup distance on the shared evaluation grid.
double loop_distance(const Loop& x, const Loop& y);

// Continuous curve of loops, sampled in t with linear-in-coefficients
// interpolation between knots.
class LoopCurve {
 public:
  LoopCurve() = default;
  LoopCurve(std::vector<double> times, std::vector<Loop> loops,
            const Tolerances& tol = {});

  const std::vector<double>& times() const { return times_; }
  const std::vector<Loop>& loops() const { return loops_; }
  std::size_t size() const { return times_.size(); }

  Loop at(double t) const;
  bool closed(const Tolerances& tol = {}) const;

 private:
  std::vector<double> times_;
  std::vector<Loop> loops_;
};

struct SmoothedCurve {
  LoopCurve curve;      // rho(P(t)) resampled on the input grid
  int degree = 0;
  double sup_error = 0.0;  // sup distance to the input on the sample grid
};

// Least-squares polynomial fit in t of the loop coefficients, composed with
// the retraction: the analytic-in-t approximation of a continuous curve.
SmoothedCurve smooth_curve(const LoopCurve& c, int degree, const Tolerances& tol = {});

}  // namespace quadloop
