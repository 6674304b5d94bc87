#include "quadloop/loop.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "quadloop/fft.hpp"
#include "quadloop/quadric.hpp"

namespace quadloop {

Loop::Loop(std::vector<C3> coeffs, int sobolev_k)
    : coeffs_(std::move(coeffs)), sobolev_k_(sobolev_k) {
  if (coeffs_.empty() || coeffs_.size() % 2 == 0) {
    throw PreconditionError("loop coefficient count must be odd (2N+1)");
  }
  if (sobolev_k_ < 1) throw PreconditionError("Sobolev index k must be >= 1");
}

Loop Loop::constant(const C3& value, int n_loop, int sobolev_k) {
  std::vector<C3> c(2 * static_cast<std::size_t>(n_loop) + 1, C3{});
  c[static_cast<std::size_t>(n_loop)] = value;
  return Loop(std::move(c), sobolev_k);
}

Loop Loop::from_samples(const std::vector<C3>& samples, int n_loop, int sobolev_k,
                        double* defect) {
  const int n = static_cast<int>(samples.size());
  if (n < 4 || (n & (n - 1)) != 0) {
    throw GridMismatchError("loop sampling needs a power-of-two grid >= 4");
  }
  if (2 * n_loop + 1 > n) throw GridMismatchError("grid too small for n_loop");
  std::vector<C3> coeffs(2 * static_cast<std::size_t>(n_loop) + 1, C3{});
  double dropped = 0.0;
  for (int comp = 0; comp < 3; ++comp) {
    std::vector<Cx> vals(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) vals[static_cast<std::size_t>(j)] = samples[static_cast<std::size_t>(j)][comp];
    auto spec = fourier_coeffs(std::move(vals));
    for (int m = -n_loop; m <= n_loop; ++m) {
      const int idx = (m + n) % n;
      coeffs[static_cast<std::size_t>(m + n_loop)][comp] = spec[static_cast<std::size_t>(idx)];
    }
    for (int kk = n_loop + 1; kk < n - n_loop; ++kk) {
      dropped += std::norm(spec[static_cast<std::size_t>(kk)]);
    }
  }
  if (defect) *defect = std::sqrt(dropped);
  return Loop(std::move(coeffs), sobolev_k);
}

C3 Loop::eval(double s) const { return eval(Cx(std::cos(s), std::sin(s))); }

C3 Loop::eval(Cx unit) const {
  const int N = n_loop();
  // Two Horner passes: positive and negative frequencies.
  C3 pos{};
  for (int m = N; m >= 1; --m) pos = unit * (pos + coeff(m));
  C3 neg{};
  const Cx conj_unit = std::conj(unit);
  for (int m = N; m >= 1; --m) neg = conj_unit * (neg + coeff(-m));
  return coeff(0) + pos + neg;
}

int Loop::grid_size() const {
  int want = std::max(8, 4 * n_loop());
  int g = 8;
  while (g < want) g <<= 1;
  return g;
}

std::vector<C3> Loop::grid_samples() const {
  const int n = grid_size();
  const int N = n_loop();
  std::vector<C3> out(static_cast<std::size_t>(n));
  for (int comp = 0; comp < 3; ++comp) {
    std::vector<Cx> spec(static_cast<std::size_t>(n), Cx(0.0));
    for (int m = -N; m <= N; ++m) {
      spec[static_cast<std::size_t>((m + n) % n)] = coeff(m)[comp];
    }
    auto vals = fourier_synthesis(std::move(spec));
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)][comp] = vals[static_cast<std::size_t>(j)];
  }
  return out;
}

double Loop::sobolev_norm() const {
  const int N = n_loop();
  double acc = 0.0;
  for (int m = -N; m <= N; ++m) {
    const double w = std::pow(1.0 + static_cast<double>(m) * m, sobolev_k_);
    acc += w * norm2_sq(coeff(m));
  }
  return std::sqrt(acc);
}

Loop Loop::derivative() const {
  const int N = n_loop();
  std::vector<C3> d(coeffs_.size());
  for (int m = -N; m <= N; ++m) {
    d[static_cast<std::size_t>(m + N)] = Cx(0.0, static_cast<double>(m)) * coeff(m);
  }
  return Loop(std::move(d), sobolev_k_);
}

LoopAnalysis loop_analyze(const Loop& x) {
  LoopAnalysis a;
  const auto samples = x.grid_samples();
  a.kappa_min = std::numeric_limits<double>::infinity();
  a.u_min = std::numeric_limits<double>::infinity();
  a.u_max = 0.0;
  for (const auto& z : samples) {
    a.quadric_defect_sup = std::max(a.quadric_defect_sup, quadric_defect(z));
    a.kappa_min = std::min(a.kappa_min, kappa(z));
    const double u = u_value(z);
    a.u_min = std::min(a.u_min, u);
    a.u_max = std::max(a.u_max, u);
  }
  a.sobolev_norm = x.sobolev_norm();
  return a;
}

Loop loop_retract(const Loop& x, const Tolerances& tol) {
  auto samples = x.grid_samples();
  for (auto& s : samples) s = retract_point(s, tol);
  double defect = 0.0;
  Loop out = Loop::from_samples(samples, x.n_loop(), x.sobolev_k(), &defect);
  if (defect > tol.tau_spec) {
    throw SpectralOverflowError("loop retraction truncation defect " +
                                std::to_string(defect) + " exceeds tau_spec");
  }
  return out;
}

double loop_exhaustion(const Loop& x, const Tolerances& tol) {
  const auto samples = x.grid_samples();
  double best = 0.0;
  for (const auto& s : samples) best = std::max(best, u_value(retract_point(s, tol)));
  return best;
}

double loop_distance(const Loop& x, const Loop& y) {
  if (x.n_loop() != y.n_loop()) {
    throw GridMismatchError("loop_distance requires matching truncation");
  }
  const auto xs = x.grid_samples();
  const auto ys = y.grid_samples();
  double best = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) best = std::max(best, norm2(xs[j] - ys[j]));
  return best;
}

LoopCurve::LoopCurve(std::vector<double> times, std::vector<Loop> loops,
                     const Tolerances& tol)
    : times_(std::move(times)), loops_(std::move(loops)) {
  if (times_.size() != loops_.size() || times_.size() < 2) {
    throw PreconditionError("curve needs matching times/loops with >= 2 knots");
  }
  if (times_.front() != 0.0 || times_.back() != 1.0) {
    throw PreconditionError("curve times must run from 0 to 1");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw PreconditionError("curve times must be strictly increasing");
    }
    if (loop_distance(loops_[i], loops_[i - 1]) > tol.tau_cont) {
      throw PreconditionError("consecutive loops exceed the continuity bound tau_cont");
    }
  }
}

Loop LoopCurve::at(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return loops_.front();
  if (it == times_.end()) return loops_.back();
  const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  const Loop& a = loops_[lo];
  const Loop& b = loops_[hi];
  std::vector<C3> c(a.coeffs().size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    c[j] = (1.0 - w) * a.coeffs()[j] + w * b.coeffs()[j];
  }
  return Loop(std::move(c), a.sobolev_k());
}

bool LoopCurve::closed(const Tolerances& tol) const {
  return loop_distance(loops_.front(), loops_.back()) <= 1e3 * tol.tau_M;
}

SmoothedCurve smooth_curve(const LoopCurve& c, int degree, const Tolerances& tol) {
  const auto& ts = c.times();
  const std::size_t nt = ts.size();
  const std::size_t ncoef = c.loops().front().coeffs().size();
  if (degree < 0 || static_cast<std::size_t>(degree) + 1 > nt) {
    throw PreconditionError("polynomial degree must satisfy 0 <= d < #knots");
  }

  // Least-squares Vandermonde fit of every Fourier coefficient in t.
  Eigen::MatrixXd V(nt, degree + 1);
  for (std::size_t i = 0; i < nt; ++i) {
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      V(static_cast<Eigen::Index>(i), d) = p;
      p *= ts[i];
    }
  }
  Eigen::MatrixXcd rhs(nt, 3 * ncoef);
  for (std::size_t i = 0; i < nt; ++i) {
    const auto& coeffs = c.loops()[i].coeffs();
    for (std::size_t j = 0; j < ncoef; ++j) {
      for (int comp = 0; comp < 3; ++comp) {
        rhs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(3 * j + comp)) =
            coeffs[j][comp];
      }
    }
  }
  Eigen::MatrixXcd sol =
      V.colPivHouseholderQr().solve(rhs.real()).cast<Cx>() +
      Cx(0.0, 1.0) * V.colPivHouseholderQr().solve(rhs.imag()).cast<Cx>();

  const int k = c.loops().front().sobolev_k();
  // The fitted polynomial loops live off M until retracted; their truncation
  // defect is part of the reported error, not a hard failure.
  Tolerances fit_tol = tol;
  fit_tol.tau_spec = std::numeric_limits<double>::infinity();
  std::vector<Loop> fitted;
  fitted.reserve(nt);
  double sup_err = 0.0;
  for (std::size_t i = 0; i < nt; ++i) {
    std::vector<C3> coeffs(ncoef, C3{});
    double p = 1.0;
    Eigen::RowVectorXd tp(degree + 1);
    for (int d = 0; d <= degree; ++d) {
      tp(d) = p;
      p *= ts[i];
    }
    Eigen::RowVectorXcd row = tp.cast<Cx>() * sol;
    for (std::size_t j = 0; j < ncoef; ++j) {
      for (int comp = 0; comp < 3; ++comp) {
        coeffs[j][comp] = row(static_cast<Eigen::Index>(3 * j + comp));
      }
    }
    Loop fitted_loop = loop_retract(Loop(std::move(coeffs), k), fit_tol);
    sup_err = std::max(sup_err, loop_distance(fitted_loop, c.loops()[i]));
    fitted.push_back(std::move(fitted_loop));
  }
  Tolerances loose = tol;
  loose.tau_cont = std::numeric_limits<double>::infinity();
  return SmoothedCurve{LoopCurve(std::vector<double>(ts), std::move(fitted), loose),
                       degree, sup_err};
}

}  // namespace quadloop
