#include "quadloop/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "quadloop/fft.hpp"

namespace quadloop {

namespace {

constexpr int kSigmaGrid = 32;     // boundary-circle resolution of lift discs
constexpr int kSigmaDeg = 8;       // sigma spectrum kept for lift discs
constexpr double kNearK = 1e-3;    // curves dipping below this kappa get the
                                   // unanchored (always-pushed) lift

std::vector<Cx> sigma_circle(int n) {
  std::vector<Cx> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = std::exp(Cx(0.0, kTwoPi * k / n));
  return out;
}

}  // namespace

LoopDisc::LoopDisc(std::vector<Loop> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw PreconditionError("loop disc needs at least one coefficient");
  for (const auto& c : coeffs_) {
    if (c.n_loop() != coeffs_.front().n_loop()) {
      throw GridMismatchError("loop disc coefficients must share the Fourier truncation");
    }
  }
}

Loop LoopDisc::eval(Cx sigma) const {
  std::vector<C3> acc(coeffs_.front().coeffs().size(), C3{});
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    const auto& cs = it->coeffs();
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] = sigma * acc[k] + cs[k];
  }
  return Loop(std::move(acc), coeffs_.front().sobolev_k());
}

double LoopDisc::quadric_defect_sup() const {
  double worst = 0.0;
  for (double r : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (int k = 0; k < 16; ++k) {
      const Loop slice = eval(r * std::exp(Cx(0.0, kTwoPi * k / 16)));
      for (const auto& z : slice.grid_samples()) worst = std::max(worst, quadric_defect(z));
      if (r == 0.0) break;
    }
  }
  return worst;
}

LoopDisc loop_disc_from_samples(const std::vector<Loop>& circle_samples, int m_deg) {
  const int n = static_cast<int>(circle_samples.size());
  if (n < 4 || (n & (n - 1)) != 0) {
    throw GridMismatchError("loop_disc_from_samples needs a power-of-two circle grid");
  }
  if (m_deg < 0 || m_deg >= n / 2) throw GridMismatchError("m_deg out of range");
  const std::size_t width = circle_samples.front().coeffs().size();
  const int k_sob = circle_samples.front().sobolev_k();
  std::vector<std::vector<C3>> out(static_cast<std::size_t>(m_deg) + 1,
                                   std::vector<C3>(width, C3{}));
  for (std::size_t ci = 0; ci < width; ++ci) {
    for (int comp = 0; comp < 3; ++comp) {
      std::vector<Cx> vals(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        vals[static_cast<std::size_t>(j)] = circle_samples[static_cast<std::size_t>(j)].coeffs()[ci][comp];
      }
      auto spec = fourier_coeffs(std::move(vals));
      for (int m = 0; m <= m_deg; ++m) {
        out[static_cast<std::size_t>(m)][ci][comp] = spec[static_cast<std::size_t>(m)];
      }
    }
  }
  std::vector<Loop> loops;
  loops.reserve(out.size());
  for (auto& c : out) loops.emplace_back(std::move(c), k_sob);
  return LoopDisc(std::move(loops));
}

namespace {

R3 normalized(const R3& v) {
  const double n = norm2(v);
  return {v[0] / n, v[1] / n, v[2] / n};
}

R3 rotate_about(const R3& v, const R3& axis, double angle) {
  // Rodrigues rotation; axis must be unit.
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const R3 k_cross_v = cross(axis, v);
  const double k_dot_v = dot(axis, v);
  R3 out;
  for (int i = 0; i < 3; ++i) {
    out[i] = v[i] * c + k_cross_v[i] * s + axis[i] * k_dot_v * (1.0 - c);
  }
  return out;
}

// Transport a tangent direction onto the plane orthogonal to p.
R3 transport(const R3& a, const R3& p) {
  const double ap = dot(a, p);
  R3 out{a[0] - ap * p[0], a[1] - ap * p[1], a[2] - ap * p[2]};
  const double n = norm2(out);
  if (n < 1e-8) throw TrackingLossError("push frame degenerated during transport");
  return {out[0] / n, out[1] / n, out[2] / n};
}

struct FrameField {
  // a, b per loop sample: orthonormal tangent frame at the real direction p.
  std::vector<R3> a;
  std::vector<R3> b;
  double holonomy = 0.0;  // closure angle distributed along s (unwrapped)
};

// Parallel-transported isotropic push frame along one loop; seeded with a
// start direction, returns the unwrapped closure angle via *raw_angle.
FrameField loop_frame(const std::vector<C3>& xs, const R3& a_seed, double prev_angle) {
  const std::size_t n = xs.size();
  FrameField f;
  f.a.resize(n);
  f.b.resize(n);
  std::vector<R3> p(n);
  for (std::size_t j = 0; j < n; ++j) p[j] = normalized(real_part(xs[j]));
  f.a[0] = transport(a_seed, p[0]);
  for (std::size_t j = 1; j < n; ++j) f.a[j] = transport(f.a[j - 1], p[j]);
  // Closure angle at the seam, measured in the tangent plane at p[0].
  const R3 around = transport(f.a[n - 1], p[0]);
  double gamma = std::atan2(dot(cross(around, f.a[0]), p[0]), dot(around, f.a[0]));
  // Unwrap against the previous t-slice so the holonomy is continuous in t.
  while (gamma - prev_angle > kPi) gamma -= kTwoPi;
  while (gamma - prev_angle < -kPi) gamma += kTwoPi;
  f.holonomy = gamma;
  for (std::size_t j = 0; j < n; ++j) {
    f.a[j] = rotate_about(f.a[j], p[j], gamma * static_cast<double>(j) / static_cast<double>(n));
    f.b[j] = cross(p[j], f.a[j]);
  }
  return f;
}

C3 isotropic_vector(const R3& a, const R3& b) {
  C3 v;
  for (int i = 0; i < 3; ++i) v[i] = Cx(a[i], b[i]);
  return v;
}

double uniform_angle(std::uint64_t bits) {
  return kTwoPi * static_cast<double>(bits >> 11) / static_cast<double>(1ull << 53);
}

}  // namespace

RegularLift build_regular_lift(const LoopCurve& c, double eps_push, int max_retries,
                               const Tolerances& tol, const GridDefaults& grids,
                               const RunSeed& seed) {
  if (!(eps_push > 0.0)) throw PreconditionError("eps_push must be positive");
  const auto circle = sigma_circle(kSigmaGrid);

  // Prefer the curve's own knots (exactly the loops handed in) once they are
  // at least as fine as the requested grid; interpolated loops drift off M.
  std::vector<double> ts;
  std::vector<Loop> xs_curve;
  if (static_cast<int>(c.size()) >= std::max(grids.t_grid, 2)) {
    ts = c.times();
    xs_curve = c.loops();
  } else {
    const int n_t = std::max(grids.t_grid, 2);
    for (int i = 0; i < n_t; ++i) {
      const double t = static_cast<double>(i) / (n_t - 1);
      ts.push_back(t);
      xs_curve.push_back(c.at(t));
    }
  }
  const int n_t = static_cast<int>(ts.size());

  double curve_kappa_min = std::numeric_limits<double>::infinity();
  for (const auto& x : xs_curve) {
    for (const auto& z : x.grid_samples()) curve_kappa_min = std::min(curve_kappa_min, kappa(z));
  }
  const bool near_K = curve_kappa_min < kNearK;

  double worst_margin = -std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    const double dither = uniform_angle(mix_seed(seed.seed, static_cast<std::uint64_t>(attempt)));
    RegularLift lift;
    lift.epsilon_push = eps_push;
    lift.retries_used = attempt;
    try {
      R3 a_seed{std::cos(dither), std::sin(dither), 0.0};
      double prev_angle = 0.0;
      for (int i = 0; i < n_t; ++i) {
        const double t = ts[static_cast<std::size_t>(i)];
        const Loop& x = xs_curve[static_cast<std::size_t>(i)];
        const auto xs = x.grid_samples();
        const std::size_t n_s = xs.size();
        std::vector<C3> push(n_s);
        if (near_K) {
          const FrameField frame = loop_frame(xs, a_seed, prev_angle);
          prev_angle = frame.holonomy;
          lift.frame_holonomy = frame.holonomy;
          a_seed = frame.a[0];
          for (std::size_t j = 0; j < n_s; ++j) {
            const C3 v = isotropic_vector(frame.a[j], frame.b[j]);
            push[j] = project_tangent(QuadricPoint{xs[j]}, v).v;
          }
        } else {
          const Cx phase = std::exp(Cx(0.0, dither));
          for (std::size_t j = 0; j < n_s; ++j) {
            C3 v = phase * Cx(0.0, 1.0) * to_complex(imag_part(xs[j]));
            v = project_tangent(QuadricPoint{xs[j]}, v).v;
            const double n = norm2(v);
            if (n <= tol.tau_K) throw TrackingLossError("push field vanished off K");
            push[j] = (1.0 / n) * v;
          }
        }
        // Anchored curves ramp the push in from zero so the t = 0 disc is the
        // (already off-K) center loop itself.
        const double chi = near_K ? 1.0 : std::min(1.0, 4.0 * t);
        std::vector<Loop> ring;
        ring.reserve(circle.size());
        for (const Cx sigma : circle) {
          std::vector<C3> samples(n_s);
          for (std::size_t j = 0; j < n_s; ++j) {
            samples[j] = retract_point(xs[j] + (chi * eps_push * sigma) * push[j], tol);
          }
          ring.push_back(Loop::from_samples(samples, x.n_loop(), x.sobolev_k()));
        }
        lift.discs.push_back(loop_disc_from_samples(ring, kSigmaDeg));
        lift.t_grid.push_back(t);
      }
    } catch (const NumericalError&) {
      if (attempt == max_retries) throw;
      continue;
    }

    // Certification: Def. 3.2 membership margins on the full grid.
    lift.boundary_kappa_min = std::numeric_limits<double>::infinity();
    lift.disc0_kappa_min = std::numeric_limits<double>::infinity();
    lift.center_error = 0.0;
    for (int i = 0; i < n_t; ++i) {
      const auto& disc = lift.discs[static_cast<std::size_t>(i)];
      for (const Cx sigma : circle) {
        const Loop bnd = disc.eval(sigma);
        for (const auto& z : bnd.grid_samples()) {
          lift.boundary_kappa_min = std::min(lift.boundary_kappa_min, kappa(z));
        }
      }
      if (i == 0) {
        for (double r : {0.0, 0.25, 0.5, 0.75}) {
          for (int k = 0; k < 8; ++k) {
            const Loop slice = disc.eval(r * std::exp(Cx(0.0, kTwoPi * k / 8)));
            for (const auto& z : slice.grid_samples()) {
              lift.disc0_kappa_min = std::min(lift.disc0_kappa_min, kappa(z));
            }
            if (r == 0.0) break;
          }
        }
      }
      lift.center_error = std::max(
          lift.center_error,
          loop_distance(disc.center(), xs_curve[static_cast<std::size_t>(i)]));
    }
    lift.anchored = lift.disc0_kappa_min > tol.tau_K;
    worst_margin = std::max(worst_margin, lift.boundary_kappa_min - tol.tau_K);
    if (lift.boundary_kappa_min > tol.tau_K && lift.center_error <= tol.tau_lift) {
      return lift;
    }
  }
  throw LiftFailureError("no admissible lift after " + std::to_string(max_retries + 1) +
                         " attempts; worst boundary kappa margin " +
                         std::to_string(worst_margin));
}

namespace {

double cut_distance(const C3& w) {
  const Cx g = quadric_g(w);
  return g.real() > 0.0 ? std::abs(g) : std::fabs(g.imag());
}

}  // namespace

SafetyRadius safety_radius(const RegularLift& L, const Tolerances& tol) {
  SafetyRadius out;
  out.cut_margin = std::numeric_limits<double>::infinity();
  double kappa_min = std::numeric_limits<double>::infinity();
  const auto circle = sigma_circle(16);
  for (const auto& disc : L.discs) {
    for (double r : {0.5, 1.0}) {
      for (const Cx sigma : circle) {
        const Loop slice = disc.eval(r * sigma);
        for (const auto& z : slice.grid_samples()) {
          out.cut_margin = std::min(out.cut_margin, cut_distance(z));
          if (r == 1.0) kappa_min = std::min(kappa_min, kappa(z));
        }
      }
    }
  }
  if (kappa_min <= tol.tau_K || out.cut_margin <= tol.tau_K) {
    throw DegenerateLiftError("lift margins underflow tau_K");
  }
  // Calibrated K margin: radius of ambient perturbation balls that provably
  // keep boundary loops off K. kappa is 1-Lipschitz in the ambient point and
  // the retraction is sampled to get its local stretch.
  double stretch = 1.0;
  const std::size_t step = std::max<std::size_t>(1, L.discs.size() / 4);
  for (std::size_t i = 0; i < L.discs.size(); i += step) {
    const Loop bnd = L.discs[i].eval(Cx(1.0));
    const auto zs = bnd.grid_samples();
    for (std::size_t j = 0; j < zs.size(); j += 8) {
      for (int d = 0; d < 4; ++d) {
        const double h = 1e-5;
        C3 dir{};
        dir[d % 3] = (d < 3) ? Cx(h) : Cx(0.0, h);
        const C3 moved = retract_point(zs[j] + dir, tol);
        stretch = std::max(stretch, norm2(moved - zs[j]) / h);
      }
    }
  }
  out.k_margin = (kappa_min - tol.tau_K) / stretch;
  out.epsilon = std::min(out.cut_margin, out.k_margin) / 3.0;
  return out;
}

ContinuationChain slide(const LoopFunctional& f, const LoopCurve& c,
                        const RegularLift& L, const Tolerances& tol) {
  if (L.discs.size() < 2) throw PreconditionError("slide needs a lift with >= 2 steps");
  const SafetyRadius safety = safety_radius(L, tol);
  const auto circle = sigma_circle(16);

  // Step bound (3.4): delta below which consecutive lift discs stay eps/2 close.
  double lip = 0.0;
  double max_gap = 0.0;
  for (std::size_t i = 0; i + 1 < L.discs.size(); ++i) {
    const double dt = L.t_grid[i + 1] - L.t_grid[i];
    double dist = 0.0;
    for (const Cx sigma : circle) {
      dist = std::max(dist, loop_distance(L.discs[i].eval(sigma), L.discs[i + 1].eval(sigma)));
    }
    lip = std::max(lip, dist / dt);
    max_gap = std::max(max_gap, dt);
  }
  const double delta = std::min(1.0, 0.5 * safety.epsilon / std::max(lip, 1e-12));
  if (max_gap >= delta) {
    throw StepFailureError("(3.4) requires step < " + std::to_string(delta) +
                           " but the lift grid spacing is " + std::to_string(max_gap));
  }

  // Validity radius delta_1 = eps / (2 L_rho), with L_rho a sampled Lipschitz
  // bound of the nearby-lift formula (3.3) in its center argument.
  double l_rho = 1.0;
  {
    const std::size_t mid = L.discs.size() / 2;
    const Loop x_mid = L.discs[mid].center();
    const auto xs = x_mid.grid_samples();
    const Loop bnd = L.discs[mid].eval(Cx(1.0));
    const auto bs = bnd.grid_samples();
    const double h = 1e-5;
    for (int d = 0; d < 6; ++d) {
      C3 dy{};
      dy[d % 3] = (d < 3) ? Cx(h) : Cx(0.0, h);
      double worst = 0.0;
      for (std::size_t j = 0; j < bs.size(); j += 8) {
        const C3 base = retract_point(bs[j], tol);
        const C3 moved = retract_point(bs[j] + dy, tol);
        worst = std::max(worst, norm2(moved - base) / h);
      }
      l_rho = std::max(l_rho, worst);
    }
    (void)xs;
  }
  const double delta1 = safety.epsilon / (2.0 * l_rho);

  const auto boundary_mean_at = [&](const LoopDisc& disc, const Loop* recenter_from,
                                    const Loop* recenter_to) {
    Cx acc(0.0);
    for (const Cx sigma : circle) {
      Loop bnd = disc.eval(sigma);
      if (recenter_from != nullptr) {
        // Nearby-lift formula (3.3): rho(xi(sigma) - x_t + y).
        const auto bsamp = bnd.grid_samples();
        const auto fsamp = recenter_from->grid_samples();
        const auto tsamp = recenter_to->grid_samples();
        std::vector<C3> moved(bsamp.size());
        for (std::size_t j = 0; j < bsamp.size(); ++j) {
          moved[j] = retract_point(bsamp[j] - fsamp[j] + tsamp[j], tol);
        }
        bnd = Loop::from_samples(moved, bnd.n_loop(), bnd.sobolev_k());
      }
      acc += f(bnd);
    }
    return acc / static_cast<double>(circle.size());
  };

  ContinuationChain chain;
  chain.delta = delta;
  chain.epsilon = safety.epsilon;
  for (std::size_t i = 0; i < L.discs.size(); ++i) {
    ChainRecord rec;
    rec.t = L.t_grid[i];
    rec.center = L.discs[i].center();
    rec.value = boundary_mean_at(L.discs[i], nullptr, nullptr);
    rec.delta1 = delta1;
    if (i + 1 < L.discs.size()) {
      // Overlap audit at the midpoint probe center.
      const double t_probe = 0.5 * (L.t_grid[i] + L.t_grid[i + 1]);
      const Loop y_star = c.at(t_probe);
      const Loop xi = L.discs[i].center();
      const Loop xj = L.discs[i + 1].center();
      const Cx fi = boundary_mean_at(L.discs[i], &xi, &y_star);
      const Cx fj = boundary_mean_at(L.discs[i + 1], &xj, &y_star);
      rec.overlap_residual = std::abs(fi - fj);
    }
    chain.records.push_back(std::move(rec));
  }
  return chain;
}

double mean_value_audit(const LoopFunctional& f, const LoopDisc& D,
                        const Tolerances& tol) {
  for (double r : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (int k = 0; k < 8; ++k) {
      const Loop slice = D.eval(r * std::exp(Cx(0.0, kTwoPi * k / 8)));
      for (const auto& z : slice.grid_samples()) {
        if (kappa(z) <= tol.tau_K) {
          throw PreconditionError("loop disc leaves M'-loops; mean-value audit undefined");
        }
      }
      if (r == 0.0) break;
    }
  }
  const auto circle = sigma_circle(std::max(16, 2 * (D.m_deg() + 1)));
  Cx mean(0.0);
  for (const Cx sigma : circle) mean += f(D.eval(sigma));
  mean /= static_cast<double>(circle.size());
  return std::abs(mean - f(D.center()));
}

}  // namespace quadloop
