#include "quadloop/disc.hpp"

#include <algorithm>
#include <cmath>

#include "quadloop/fft.hpp"
#include "quadloop/quadric.hpp"

namespace quadloop {

AnalyticDisc::AnalyticDisc(std::vector<C3> coeffs, int n_grid)
    : coeffs_(std::move(coeffs)), n_grid_(n_grid) {
  if (coeffs_.empty()) throw PreconditionError("disc needs at least one coefficient");
  if (n_grid_ < 4 || (n_grid_ & (n_grid_ - 1)) != 0) {
    throw GridMismatchError("disc grid must be a power of two >= 4");
  }
  if (n_grid_ < 2 * static_cast<int>(coeffs_.size())) {
    throw GridMismatchError("disc grid too small for the coefficient count");
  }
}

AnalyticDisc AnalyticDisc::constant(const C3& value, int m_deg, int n_grid) {
  std::vector<C3> c(static_cast<std::size_t>(m_deg) + 1, C3{});
  c[0] = value;
  return AnalyticDisc(std::move(c), n_grid);
}

C3 AnalyticDisc::eval(Cx sigma) const {
  C3 acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = sigma * acc + *it;
  }
  return acc;
}

std::vector<C3> AnalyticDisc::boundary_samples() const {
  // Synthesis by FFT: place coefficient m at frequency m.
  std::vector<C3> out(static_cast<std::size_t>(n_grid_));
  for (int comp = 0; comp < 3; ++comp) {
    std::vector<Cx> spec(static_cast<std::size_t>(n_grid_), Cx(0.0));
    for (std::size_t m = 0; m < coeffs_.size(); ++m) spec[m] = coeffs_[m][comp];
    auto vals = fourier_synthesis(std::move(spec));
    for (int j = 0; j < n_grid_; ++j) out[static_cast<std::size_t>(j)][comp] = vals[static_cast<std::size_t>(j)];
  }
  return out;
}

double AnalyticDisc::tail_magnitude() const { return norm2(coeffs_.back()); }

ProjectionResult analytic_project(const std::vector<C3>& samples, int m_deg) {
  const int n = static_cast<int>(samples.size());
  if (n < 4 || (n & (n - 1)) != 0) {
    throw GridMismatchError("analytic_project needs a power-of-two sample count >= 4");
  }
  if (m_deg < 0 || m_deg >= n / 2) {
    throw GridMismatchError("m_deg must satisfy 0 <= m_deg < n_grid/2");
  }
  std::vector<C3> coeffs(static_cast<std::size_t>(m_deg) + 1, C3{});
  double defect_sq = 0.0;
  for (int comp = 0; comp < 3; ++comp) {
    std::vector<Cx> vals(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) vals[static_cast<std::size_t>(j)] = samples[static_cast<std::size_t>(j)][comp];
    auto spec = fourier_coeffs(std::move(vals));
    for (int m = 0; m <= m_deg; ++m) coeffs[static_cast<std::size_t>(m)][comp] = spec[static_cast<std::size_t>(m)];
    // Energy in negative frequencies and in the positive tail beyond m_deg.
    for (int k = m_deg + 1; k < n; ++k) defect_sq += std::norm(spec[static_cast<std::size_t>(k)]);
  }
  ProjectionResult out{AnalyticDisc(std::move(coeffs), n), std::sqrt(defect_sq)};
  return out;
}

AnalyticDisc disc_retract(const AnalyticDisc& x, const Tolerances& tol) {
  auto samples = x.boundary_samples();
  for (auto& s : samples) s = retract_point(s, tol);
  auto pr = analytic_project(samples, x.m_deg());
  if (pr.residual > tol.tau_spec) {
    throw SpectralOverflowError("retraction residual " + std::to_string(pr.residual) +
                                " exceeds tau_spec; grid under-resolved");
  }
  return pr.disc;
}

Cx boundary_mean(const std::function<Cx(const C3&)>& f, const AnalyticDisc& x) {
  const auto samples = x.boundary_samples();
  Cx acc(0.0);
  for (const auto& s : samples) acc += f(s);
  return acc / static_cast<double>(samples.size());
}

double disc_distance(const AnalyticDisc& x, const AnalyticDisc& y) {
  if (x.n_grid() != y.n_grid()) {
    throw GridMismatchError("disc_distance requires matching boundary grids");
  }
  const auto xs = x.boundary_samples();
  const auto ys = y.boundary_samples();
  double best = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) best = std::max(best, norm2(xs[j] - ys[j]));
  return best;
}

}  // namespace quadloop
