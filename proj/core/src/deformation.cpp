#include "quadloop/deformation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "quadloop/fft.hpp"

namespace quadloop {

namespace {

constexpr double kRadiusFactor = 0.3;   // fiber chart radius as a fraction of kappa
constexpr double kLevelCap = 0.9;       // level-curve search stays inside this fraction
constexpr int kNewtonMax = 50;

// Derivatives of v = u o rho at z on the quadric (where g = 1, so the
// retraction contributes through |g|' only).
struct VDerivs {
  C3 grad;                 // dv/dz_i = conj(z_i) - u z_i
  Eigen::Matrix3cd hess;   // d2v/dz_i dz_j
};

VDerivs v_derivs(const C3& z) {
  VDerivs d;
  const double u = u_value(z);
  for (int i = 0; i < 3; ++i) d.grad[i] = std::conj(z[i]) - u * z[i];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Cx h = -std::conj(z[i]) * z[j] - z[i] * std::conj(z[j]) + 3.0 * u * z[i] * z[j];
      if (i == j) h -= u;
      d.hess(i, j) = h;
    }
  }
  return d;
}

Cx q_form(const VDerivs& d, const C3& diff) {
  Cx acc(0.0);
  for (int i = 0; i < 3; ++i) {
    acc += 2.0 * d.grad[i] * diff[i];
    for (int j = 0; j < 3; ++j) acc += d.hess(i, j) * diff[i] * diff[j];
  }
  return acc;
}

}  // namespace

double fiber_radius(const QuadricPoint& z) { return kRadiusFactor * kappa(z.z); }

FiberChart make_fiber_chart(const QuadricPoint& z, Cx tau, const Tolerances& tol) {
  if (kappa(z.z) <= tol.tau_K) {
    throw CriticalPointError("fiber chart undefined at the real locus");
  }
  FiberChart chart{z, tau, fiber_radius(z)};
  if (std::abs(tau) >= chart.r_V) {
    throw OutOfChartError("fiber coordinate |tau| = " + std::to_string(std::abs(tau)) +
                          " outside chart radius " + std::to_string(chart.r_V));
  }
  return chart;
}

QuadricPoint phi_map(const FiberChart& chart, const Tolerances& tol) {
  const C3& z = chart.base.z;
  if (kappa(z) <= tol.tau_K) throw CriticalPointError("phi_map at the real locus");
  if (std::abs(chart.tau) >= chart.r_V) {
    throw OutOfChartError("phi_map: |tau| >= r_V");
  }
  if (chart.tau == Cx(0.0)) return chart.base;  // phi o nu = identity, exactly

  const VDerivs d = v_derivs(z);
  const C3 e = e_basis(chart.base, tol).v;
  C3 zeta = z + chart.tau * e;
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kNewtonMax; ++it) {
    const C3 diff = zeta - z;
    Eigen::Vector3cd F;
    F(0) = dot_bilinear(zeta, zeta) - 1.0;
    F(1) = q_form(d, diff);
    F(2) = dot_bilinear(diff, conj(e)) - chart.tau;
    residual = F.norm();
    if (!std::isfinite(residual) || norm2(diff) > 3.0 * chart.r_V) {
      throw NewtonDivergenceError("phi_map left the chart; last residual " +
                                  std::to_string(residual));
    }
    if (residual <= 1e-13) break;
    Eigen::Matrix3cd Jm;
    for (int k = 0; k < 3; ++k) {
      Jm(0, k) = 2.0 * zeta[k];
      Cx row = 2.0 * d.grad[k];
      for (int j = 0; j < 3; ++j) row += 2.0 * d.hess(k, j) * diff[j];
      Jm(1, k) = row;
      Jm(2, k) = std::conj(e[k]);
    }
    const Eigen::Vector3cd step = Jm.partialPivLu().solve(-F);
    for (int k = 0; k < 3; ++k) zeta[k] += step(k);
  }
  if (residual > 1e-10) {
    throw NewtonDivergenceError("phi_map did not converge; last residual " +
                                std::to_string(residual));
  }
  return QuadricPoint{zeta};
}

PhiResiduals phi_residuals(const FiberChart& chart, const QuadricPoint& zeta) {
  const C3 diff = zeta.z - chart.base.z;
  const C3 e = e_basis(chart.base).v;
  PhiResiduals r;
  r.quadric = quadric_defect(zeta.z);
  r.level = std::abs(q_form(v_derivs(chart.base.z), diff));
  r.fiber = std::abs(dot_bilinear(diff, conj(e)) - chart.tau);
  return r;
}

FiberScan fiber_line_scan(const QuadricPoint& z, double beta, int steps,
                          const Tolerances& tol) {
  if (steps < 5 || steps % 2 == 0) {
    throw PreconditionError("fiber_line_scan needs an odd step count >= 5");
  }
  const double r_V = fiber_radius(z);
  const Cx dir(std::cos(beta), std::sin(beta));
  FiberScan scan;
  const int half = steps / 2;
  for (int k = -half; k <= half; ++k) {
    const double t = kLevelCap * r_V * k / half;
    const QuadricPoint p = phi_map(make_fiber_chart(z, t * dir, tol), tol);
    scan.offsets.push_back(t);
    scan.values.push_back(u_value(p.z));
  }
  scan.monotone_left = scan.monotone_right = true;
  for (int k = 0; k < half; ++k) {
    if (scan.values[static_cast<std::size_t>(k)] <= scan.values[static_cast<std::size_t>(k) + 1]) {
      scan.monotone_left = false;
    }
    const std::size_t r = static_cast<std::size_t>(half + k);
    if (scan.values[r] >= scan.values[r + 1]) scan.monotone_right = false;
  }
  const auto min_it = std::min_element(scan.values.begin(), scan.values.end());
  scan.min_at_zero = (min_it - scan.values.begin()) == half;
  return scan;
}

namespace {

// Phase-aligned nonvanishing section of E along the disc boundary, with the
// closure holonomy distributed evenly so the section is single-valued.
std::vector<C3> boundary_section(const std::vector<C3>& zs, const Tolerances& tol,
                                 double* holonomy) {
  const std::size_t n = zs.size();
  std::vector<C3> g(n);
  g[0] = e_basis(QuadricPoint{zs[0]}, tol).v;
  for (std::size_t j = 1; j < n; ++j) {
    const C3 raw = e_basis(QuadricPoint{zs[j]}, tol).v;
    const Cx overlap = dot_hermitian(raw, g[j - 1]);
    if (std::abs(overlap) < 1e-6) {
      throw TrackingLossError("boundary section lost phase continuity");
    }
    g[j] = std::exp(Cx(0.0, -std::arg(overlap))) * raw;
  }
  // Holonomy: e^{i mu} g[0] would continue g[n-1]; spread -mu/n per step so
  // the corrected section closes up.
  const double mu = -std::arg(dot_hermitian(g[0], g[n - 1]));
  for (std::size_t j = 0; j < n; ++j) {
    g[j] = std::exp(Cx(0.0, -mu * static_cast<double>(j) / static_cast<double>(n))) * g[j];
  }
  if (holonomy) *holonomy = mu;
  return g;
}

double u_phi(const QuadricPoint& base, Cx tau, const Tolerances& tol) {
  return u_value(phi_map(make_fiber_chart(base, tau, tol), tol).z);
}

// Radius r with u(phi(r e^{i theta} g)) = target, by bisection from 0.
double level_radius(const QuadricPoint& base, Cx unit_dir, double target,
                    const Tolerances& tol) {
  const double cap = kLevelCap * fiber_radius(base);
  double hi = cap;
  if (u_phi(base, hi * unit_dir, tol) < target) {
    throw LevelCurveNotFoundError("level u = " + std::to_string(target) +
                                  " not reached inside the fiber chart");
  }
  double lo = 0.0;
  for (int it = 0; it < 52; ++it) {
    const double mid = 0.5 * (lo + hi);
    (u_phi(base, mid * unit_dir, tol) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Fourier interpolation of a smooth periodic function from uniform samples.
class PeriodicInterp {
 public:
  explicit PeriodicInterp(const std::vector<double>& samples) {
    std::vector<Cx> v(samples.begin(), samples.end());
    coeffs_ = fourier_coeffs(std::move(v));
  }
  double eval(double theta) const {
    const int n = static_cast<int>(coeffs_.size());
    Cx acc = coeffs_[0];
    for (int k = 1; k < n / 2; ++k) {
      acc += coeffs_[static_cast<std::size_t>(k)] * std::exp(Cx(0.0, k * theta));
      acc += coeffs_[static_cast<std::size_t>(n - k)] * std::exp(Cx(0.0, -k * theta));
    }
    return acc.real();
  }

 private:
  std::vector<Cx> coeffs_;
};

// Theodorsen iteration for the Riemann map of a star-shaped curve given by its
// radius function; returns the boundary correspondence theta(phi).
std::vector<double> theodorsen(const PeriodicInterp& log_radius, int n_grid) {
  std::vector<double> theta(static_cast<std::size_t>(n_grid));
  for (int k = 0; k < n_grid; ++k) theta[static_cast<std::size_t>(k)] = kTwoPi * k / n_grid;
  double prev_err = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    std::vector<Cx> v(static_cast<std::size_t>(n_grid));
    for (int k = 0; k < n_grid; ++k) {
      v[static_cast<std::size_t>(k)] = log_radius.eval(theta[static_cast<std::size_t>(k)]);
    }
    auto c = fourier_coeffs(std::move(v));
    // Conjugate function: multiply frequency n by -i sgn(n).
    c[0] = Cx(0.0);
    for (int k = 1; k < n_grid / 2; ++k) {
      c[static_cast<std::size_t>(k)] *= Cx(0.0, -1.0);
      c[static_cast<std::size_t>(n_grid - k)] *= Cx(0.0, 1.0);
    }
    c[static_cast<std::size_t>(n_grid / 2)] = Cx(0.0);
    auto conj_vals = fourier_synthesis(std::move(c));
    double err = 0.0;
    for (int k = 0; k < n_grid; ++k) {
      const double next = kTwoPi * k / n_grid + conj_vals[static_cast<std::size_t>(k)].real();
      err = std::max(err, std::fabs(next - theta[static_cast<std::size_t>(k)]));
      theta[static_cast<std::size_t>(k)] = next;
    }
    if (err < 1e-12) return theta;
    if (it > 20 && err > 0.9 * prev_err && err > 1e-8) {
      throw ConformalStallError("Theodorsen iteration stalled at update " +
                                std::to_string(err));
    }
    prev_err = err;
  }
  throw ConformalStallError("Theodorsen iteration exhausted its budget");
}

}  // namespace

double delta0_scan(const AnalyticDisc& kappa_disc, const RegionSpec& region,
                   const Tolerances& tol) {
  region.validate();
  const auto zs = kappa_disc.boundary_samples();
  const int n_dir = 16;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& z : zs) {
    const QuadricPoint base{z};
    const double r = kLevelCap * fiber_radius(base);
    const double u0 = u_value(z);
    for (int k = 0; k < n_dir; ++k) {
      const double th = kTwoPi * k / n_dir;
      worst = std::min(worst, u_phi(base, r * Cx(std::cos(th), std::sin(th)), tol) - u0);
    }
  }
  if (!(worst > 0.0)) {
    throw PreconditionError("delta0 scan found no u-increase along the boundary");
  }
  return 0.5 * worst;
}

void PushProblem::validate(double delta0, const Tolerances& tol) const {
  region.validate();
  if (!(eta > 0.0)) throw PreconditionError("push problem needs eta > 0");
  if (J < 2) throw PreconditionError("substitution exponent J must be >= 2");
  if (static_cast<int>(alpha.size()) != kappa_disc.n_grid()) {
    throw GridMismatchError("alpha grid must match the disc boundary grid");
  }
  for (double a : alpha) {
    if (!(a > 0.0) || a > delta0) {
      throw PreconditionError("alpha values must lie in (0, delta0]");
    }
  }
  for (const auto& z : kappa_disc.boundary_samples()) {
    const auto cls = classify(QuadricPoint{z}, region, tol);
    if (!cls.in_Mab_open) {
      throw PreconditionError("disc boundary leaves M(a,b): u = " + std::to_string(cls.u));
    }
  }
}

PushFamily push_disc(const PushProblem& p, const Tolerances& tol,
                     const GridDefaults& grids) {
  const double delta0 = delta0_scan(p.kappa_disc, p.region, tol);
  p.validate(delta0, tol);

  const int n_s = p.kappa_disc.n_grid();
  const int n_sig = 64;
  const int J = p.J;
  if (n_s <= 2 * J || n_sig <= 2 * J) {
    throw GridMismatchError("boundary grids too coarse for Fejer window J");
  }
  const auto zs = p.kappa_disc.boundary_samples();

  PushReport report;
  report.delta0 = delta0;
  const auto section = boundary_section(zs, tol, &report.section_phase);

  // Per boundary sample: level curve, Riemann map, boundary values of psi.
  // psi(j, k) = phi(f_j(sigma_k) g_j), plus one interior ring for the Fejer audit.
  std::vector<std::vector<Cx>> f_bdry(static_cast<std::size_t>(n_s));
  std::vector<std::vector<Cx>> f_coeffs(static_cast<std::size_t>(n_s));
  std::vector<Cx> tau_phase(static_cast<std::size_t>(n_s));
  for (int j = 0; j < n_s; ++j) {
    const QuadricPoint base{zs[static_cast<std::size_t>(j)]};
    const C3 e = e_basis(base, tol).v;
    tau_phase[static_cast<std::size_t>(j)] =
        dot_hermitian(section[static_cast<std::size_t>(j)], e);
    const double target = u_value(base.z) + p.alpha[static_cast<std::size_t>(j)];
    std::vector<double> log_r(static_cast<std::size_t>(n_sig));
    for (int k = 0; k < n_sig; ++k) {
      const double th = kTwoPi * k / n_sig;
      const Cx dir = std::exp(Cx(0.0, th)) * tau_phase[static_cast<std::size_t>(j)];
      log_r[static_cast<std::size_t>(k)] = std::log(level_radius(base, dir, target, tol));
    }
    const PeriodicInterp lr(log_r);
    const auto theta = theodorsen(lr, n_sig);
    auto& fb = f_bdry[static_cast<std::size_t>(j)];
    fb.resize(static_cast<std::size_t>(n_sig));
    for (int k = 0; k < n_sig; ++k) {
      const double th = theta[static_cast<std::size_t>(k)];
      fb[static_cast<std::size_t>(k)] = std::exp(lr.eval(th)) * std::exp(Cx(0.0, th));
    }
    auto spec = fourier_coeffs(fb);
    spec.resize(static_cast<std::size_t>(n_sig / 2));  // Taylor part of f_j
    f_coeffs[static_cast<std::size_t>(j)] = std::move(spec);
  }

  // sigma is the fiber-plane coordinate: the pushed point is phi(sigma * g_j),
  // i.e. fiber coefficient sigma * tau_phase_j along e_basis.
  const auto psi_at = [&](int j, Cx sigma) {
    const Cx tau = sigma * tau_phase[static_cast<std::size_t>(j)];
    return phi_map(make_fiber_chart(QuadricPoint{zs[static_cast<std::size_t>(j)]}, tau, tol), tol).z;
  };
  const auto f_interior = [&](int j, Cx sigma) {
    const auto& c = f_coeffs[static_cast<std::size_t>(j)];
    Cx acc(0.0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * sigma + *it;
    return acc;
  };

  // 2D Fourier coefficients of psi on the boundary torus, Fejer-weighted into
  // the a_{ij} of the substitution formula.
  std::vector<std::vector<C3>> psi(static_cast<std::size_t>(n_s),
                                   std::vector<C3>(static_cast<std::size_t>(n_sig)));
  for (int j = 0; j < n_s; ++j) {
    for (int k = 0; k < n_sig; ++k) {
      psi[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
          psi_at(j, f_bdry[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]);
    }
  }
  // a[i + J - 1][jm - 1] for |i| < J, 1 <= jm <= J.
  std::vector<std::vector<C3>> a(static_cast<std::size_t>(2 * J - 1),
                                 std::vector<C3>(static_cast<std::size_t>(J)));
  for (int comp = 0; comp < 3; ++comp) {
    std::vector<std::vector<Cx>> rows(static_cast<std::size_t>(n_s));
    for (int j = 0; j < n_s; ++j) {
      std::vector<Cx> row(static_cast<std::size_t>(n_sig));
      for (int k = 0; k < n_sig; ++k) {
        row[static_cast<std::size_t>(k)] =
            psi[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)][comp];
      }
      rows[static_cast<std::size_t>(j)] = fourier_coeffs(std::move(row));
    }
    for (int jm = 1; jm <= J; ++jm) {
      std::vector<Cx> col(static_cast<std::size_t>(n_s));
      for (int j = 0; j < n_s; ++j) col[static_cast<std::size_t>(j)] = rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(jm)];
      auto ci = fourier_coeffs(std::move(col));
      for (int i = -(J - 1); i <= J - 1; ++i) {
        const int idx = i >= 0 ? i : n_s + i;
        const double w = (1.0 - std::fabs(i) / static_cast<double>(J)) *
                         (1.0 - (jm - 1) / static_cast<double>(J));
        a[static_cast<std::size_t>(i + J - 1)][static_cast<std::size_t>(jm - 1)][comp] =
            w * ci[static_cast<std::size_t>(idx)];
      }
    }
  }

  const auto chi_at = [&](int j, Cx sigma) {
    C3 acc = zs[static_cast<std::size_t>(j)];
    const Cx s = std::exp(Cx(0.0, kTwoPi * j / n_s));
    for (int i = -(J - 1); i <= J - 1; ++i) {
      const Cx si = std::pow(s, static_cast<double>(i));
      Cx sp = sigma;
      for (int jm = 1; jm <= J; ++jm) {
        acc += (si * sp) * a[static_cast<std::size_t>(i + J - 1)][static_cast<std::size_t>(jm - 1)];
        sp *= sigma;
      }
    }
    return acc;
  };

  // Fejer audit (4.4): compare u(psi) with u(rho(chi)) on the boundary torus
  // and on an interior sigma ring.
  report.fejer_error = 0.0;
  for (int j = 0; j < n_s; ++j) {
    for (int k = 0; k < n_sig; ++k) {
      for (double r : {0.5, 1.0}) {
        const Cx sigma = r * std::exp(Cx(0.0, kTwoPi * k / n_sig));
        const Cx fs = (r == 1.0)
                          ? f_bdry[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]
                          : f_interior(j, sigma);
        const double u_psi = u_value(psi_at(j, fs));
        const C3 chi = chi_at(j, sigma);
        if (!in_retraction_domain(chi, tol)) {
          throw FejerBudgetError("chi leaves the retraction domain at J = " +
                                 std::to_string(J));
        }
        const double u_chi = u_value(retract_point(chi, tol));
        report.fejer_error = std::max(report.fejer_error, std::fabs(u_psi - u_chi));
      }
    }
  }
  if (report.fejer_error >= p.eta) {
    throw FejerBudgetError("Fejer approximation error " + std::to_string(report.fejer_error) +
                           " exceeds eta at J = " + std::to_string(J));
  }

  // Substitution sigma = (t s)^J: assemble lambda(t, .) as an analytic disc.
  const int d_pre = std::max(p.kappa_disc.m_deg(), (J - 1) + J * J);
  int n_out = 8;
  while (n_out < 4 * (d_pre + 1) || n_out < n_s) n_out <<= 1;
  const int m_out = n_out / 4;

  PushFamily family;
  family.report = report;
  family.report.boundary_low = std::numeric_limits<double>::infinity();
  family.report.boundary_high = std::numeric_limits<double>::infinity();
  const int n_t = std::max(grids.t_grid, 2);
  double worst_d_low = std::numeric_limits<double>::infinity();
  double worst_d_high = std::numeric_limits<double>::infinity();
  for (int ti = 0; ti < n_t; ++ti) {
    const double t = static_cast<double>(ti) / (n_t - 1);
    std::vector<C3> pre(static_cast<std::size_t>(d_pre) + 1, C3{});
    for (int m = 0; m <= p.kappa_disc.m_deg(); ++m) {
      pre[static_cast<std::size_t>(m)] = p.kappa_disc.coeffs()[static_cast<std::size_t>(m)];
    }
    for (int i = -(J - 1); i <= J - 1; ++i) {
      double tp = std::pow(t, J);
      for (int jm = 1; jm <= J; ++jm) {
        pre[static_cast<std::size_t>(i + jm * J)] +=
            tp * a[static_cast<std::size_t>(i + J - 1)][static_cast<std::size_t>(jm - 1)];
        tp *= std::pow(t, J);
      }
    }
    const AnalyticDisc pre_disc(std::move(pre), n_out);
    // Kontinuitaetssatz: every evaluation must stay inside Omega.
    for (double r : {0.25, 0.5, 0.75}) {
      for (int k = 0; k < 16; ++k) {
        const C3 w = pre_disc.eval(r * std::exp(Cx(0.0, kTwoPi * k / 16)));
        if (!in_retraction_domain(w, tol)) {
          throw BranchCutError("lambda left the retraction domain at t = " + std::to_string(t));
        }
      }
    }
    auto samples = pre_disc.boundary_samples();
    for (auto& w : samples) w = retract_point(w, tol);
    auto proj = analytic_project(samples, m_out);
    if (proj.residual > tol.tau_spec) {
      throw SpectralOverflowError("lambda retraction residual " +
                                  std::to_string(proj.residual));
    }
    // Per-sample u-increase margins on the coarse (kappa) boundary grid.
    const int stride = n_out / n_s;
    for (int j = 0; j < n_s; ++j) {
      const double du = u_value(samples[static_cast<std::size_t>(j * stride)]) -
                        u_value(zs[static_cast<std::size_t>(j)]);
      const double al = p.alpha[static_cast<std::size_t>(j)];
      worst_d_low = std::min(worst_d_low, du + p.eta);
      worst_d_high = std::min(worst_d_high, al + p.eta - du);
      if (ti == n_t - 1) {
        family.report.boundary_low = std::min(family.report.boundary_low, du - (al - p.eta));
        family.report.boundary_high = std::min(family.report.boundary_high, al + p.eta - du);
      }
    }
    if (ti == 0) {
      double err = 0.0;
      const auto base = p.kappa_disc.boundary_samples();
      for (int j = 0; j < n_s; ++j) {
        err = std::max(err, norm2(samples[static_cast<std::size_t>(j * stride)] -
                                  base[static_cast<std::size_t>(j)]));
      }
      family.report.identity_error = err;
    }
    family.report.center_error = std::max(
        family.report.center_error, norm2(proj.disc.center() - p.kappa_disc.center()));
    family.t_grid.push_back(t);
    family.discs.push_back(std::move(proj.disc));
  }
  family.report.interior_low = worst_d_low;
  family.report.interior_high = worst_d_high;
  family.report.pass_i = family.report.identity_error <= 1e-10;
  family.report.pass_ii = family.report.center_error <= 1e-10;
  family.report.pass_iii =
      family.report.boundary_low > 0.0 && family.report.boundary_high > 0.0;
  family.report.pass_iv = worst_d_low > 0.0 && worst_d_high > 0.0;
  family.report.degree_support_ok = true;  // enforced by construction above
  return family;
}

}  // namespace quadloop
