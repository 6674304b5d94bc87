#include "quadloop/harmonic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "quadloop/fft.hpp"

namespace quadloop {

namespace {

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

}  // namespace

BoundaryArcSet BoundaryArcSet::from_arcs(std::vector<BoundaryArc> arcs) {
  std::vector<BoundaryArc> cut;
  for (const auto& a : arcs) {
    const double len = a.length();
    if (!(len > 0.0) || len > kTwoPi + 1e-12) {
      throw PreconditionError("boundary arc length must lie in (0, 2pi]");
    }
    if (len >= kTwoPi - 1e-12) return full_circle();
    const double s = wrap_angle(a.start);
    if (s + len <= kTwoPi) {
      cut.push_back({s, s + len});
    } else {  // split at the 2pi seam
      cut.push_back({s, kTwoPi});
      cut.push_back({0.0, s + len - kTwoPi});
    }
  }
  std::sort(cut.begin(), cut.end(),
            [](const BoundaryArc& x, const BoundaryArc& y) { return x.start < y.start; });
  BoundaryArcSet out;
  for (const auto& a : cut) {
    if (!out.arcs_.empty() && a.start <= out.arcs_.back().end + 1e-15) {
      out.arcs_.back().end = std::max(out.arcs_.back().end, a.end);
    } else {
      out.arcs_.push_back(a);
    }
  }
  if (out.total_length() > kTwoPi + 1e-12) {
    throw PreconditionError("boundary arcs overlap past a full circle");
  }
  return out;
}

BoundaryArcSet BoundaryArcSet::full_circle() {
  BoundaryArcSet out;
  out.arcs_.push_back({0.0, kTwoPi});
  return out;
}

double BoundaryArcSet::total_length() const {
  double acc = 0.0;
  for (const auto& a : arcs_) acc += a.length();
  return acc;
}

bool BoundaryArcSet::covers_circle() const {
  return arcs_.size() == 1 && arcs_.front().length() >= kTwoPi - 1e-12;
}

bool BoundaryArcSet::contains(double angle) const {
  if (covers_circle()) return true;
  const double a = wrap_angle(angle);
  for (const auto& arc : arcs_) {
    if (a > arc.start && a < arc.end) return true;
  }
  return false;
}

double BoundaryArcSet::distance(double angle) const {
  if (arcs_.empty()) return kPi;
  const double a = wrap_angle(angle);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& arc : arcs_) {
    if (a > arc.start && a < arc.end) return 0.0;
    for (double endpoint : {arc.start, arc.end}) {
      double d = std::fabs(a - endpoint);
      d = std::min(d, kTwoPi - d);
      best = std::min(best, d);
    }
  }
  return best;
}

BoundaryArcSet BoundaryArcSet::shrunk(double fraction) const {
  if (covers_circle()) return *this;
  std::vector<BoundaryArc> out;
  for (const auto& a : arcs_) {
    const double trim = 0.5 * fraction * a.length();
    if (a.length() - 2.0 * trim > 0.0) out.push_back({a.start + trim, a.end - trim});
  }
  BoundaryArcSet s;
  s.arcs_ = std::move(out);
  return s;
}

BoundaryArcSet BoundaryArcSet::rotated(double phi) const {
  if (arcs_.empty() || covers_circle()) return *this;
  std::vector<BoundaryArc> moved;
  for (const auto& a : arcs_) moved.push_back({a.start + phi, a.end + phi});
  return from_arcs(std::move(moved));
}

double arc_measure(const BoundaryArcSet& gamma) { return gamma.total_length() / kTwoPi; }

Cx Polynomial::eval(Cx z) const {
  Cx acc(0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

namespace {

// Fourier coefficients c_n (n >= 1) of the indicator of the arc set.
std::vector<Cx> arc_indicator_coeffs(const BoundaryArcSet& gamma, int degree) {
  std::vector<Cx> c(static_cast<std::size_t>(degree) + 1, Cx(0.0));
  c[0] = Cx(gamma.total_length() / kTwoPi);
  for (int n = 1; n <= degree; ++n) {
    Cx acc(0.0);
    for (const auto& a : gamma.arcs()) {
      const Cx ea = std::exp(Cx(0.0, -n * a.start));
      const Cx eb = std::exp(Cx(0.0, -n * a.end));
      acc += (ea - eb) / Cx(0.0, kTwoPi * n);
    }
    c[static_cast<std::size_t>(n)] = acc;
  }
  return c;
}

// Boundary-circle values of Re theta at radius r, on a power-of-two grid.
std::vector<double> ring_real_values(const Polynomial& theta, double r, int grid) {
  int n = 8;
  while (n < grid || n < 2 * (theta.degree() + 1)) n <<= 1;
  std::vector<Cx> spec(static_cast<std::size_t>(n), Cx(0.0));
  double rk = 1.0;
  for (int k = 0; k <= theta.degree(); ++k) {
    spec[static_cast<std::size_t>(k)] = theta.coeffs[static_cast<std::size_t>(k)] * rk;
    rk *= r;
  }
  auto vals = fourier_synthesis(std::move(spec));
  std::vector<double> out(vals.size());
  for (std::size_t j = 0; j < vals.size(); ++j) out[j] = vals[j].real();
  return out;
}

}  // namespace

CertificateReport certificate_verify(const HarmonicCertificate& cert,
                                     const BoundaryArcSet& gamma, int boundary_grid) {
  CertificateReport rep;
  rep.degree = cert.theta.degree();
  rep.value_at_zero_error = std::abs(cert.theta.eval(Cx(0.0)) - Cx(cert.delta));
  rep.sup_re_disc = -std::numeric_limits<double>::infinity();
  rep.margin_off_gamma = -std::numeric_limits<double>::infinity();
  const int radial = 24;
  bool have_off = false;
  for (int i = 1; i <= radial; ++i) {
    const double r = static_cast<double>(i) / radial;
    const auto vals = ring_real_values(cert.theta, r, i == radial ? boundary_grid : 256);
    const int n = static_cast<int>(vals.size());
    rep.boundary_grid = (i == radial) ? n : rep.boundary_grid;
    for (int j = 0; j < n; ++j) {
      rep.sup_re_disc = std::max(rep.sup_re_disc, vals[static_cast<std::size_t>(j)]);
      if (i == radial) {
        const double angle = kTwoPi * j / n;
        if (!gamma.contains(angle)) {
          rep.margin_off_gamma = std::max(rep.margin_off_gamma, vals[static_cast<std::size_t>(j)]);
          have_off = true;
        }
      }
    }
  }
  rep.pass = rep.value_at_zero_error <= 1e-12 && rep.sup_re_disc < 1.0 &&
             (!have_off || rep.margin_off_gamma < 0.0);
  return rep;
}

HarmonicCertificate certificate_build(const BoundaryArcSet& gamma, double delta,
                                      const CertificateOptions& opts) {
  const double measure = arc_measure(gamma);
  if (delta >= measure) {
    throw InfeasibleError("certificate level delta = " + std::to_string(delta) +
                          " is not below the arc measure " + std::to_string(measure));
  }
  if (delta <= 0.0) throw PreconditionError("certificate level delta must be positive");

  if (gamma.covers_circle()) {
    HarmonicCertificate cert;
    cert.theta.coeffs = {Cx(delta)};
    cert.delta = delta;
    cert.build_report = certificate_verify(cert, gamma, opts.build_grid);
    return cert;
  }

  const BoundaryArcSet shrunk = gamma.shrunk(opts.shrink_fraction);
  const double m_shrunk = arc_measure(shrunk);
  if (delta >= m_shrunk) {
    throw InfeasibleError("delta does not clear the shrunk arc measure " +
                          std::to_string(m_shrunk));
  }

  double best_margin = std::numeric_limits<double>::infinity();
  for (int degree = 64; degree <= opts.degree_max; degree *= 2) {
    const auto c = arc_indicator_coeffs(shrunk, degree);
    HarmonicCertificate cert;
    cert.delta = delta;
    cert.theta.coeffs.assign(static_cast<std::size_t>(degree) + 1, Cx(0.0));
    // theta = theta_1 - theta_1(0) + delta with theta_1 the analytic completion
    // of the Fejer mean of the shrunk indicator.
    cert.theta.coeffs[0] = Cx(delta);
    for (int n = 1; n <= degree; ++n) {
      const double fejer = 1.0 - static_cast<double>(n) / (degree + 1);
      cert.theta.coeffs[static_cast<std::size_t>(n)] = 2.0 * fejer * c[static_cast<std::size_t>(n)];
    }
    // Oversample relative to the candidate degree and demand slack so that
    // later verification on any finer grid cannot flip the sign off Gamma.
    const int grid = std::max(opts.build_grid, 4 * (degree + 1));
    cert.build_report = certificate_verify(cert, gamma, grid);
    best_margin = std::min(best_margin, cert.build_report.margin_off_gamma);
    if (cert.build_report.pass && cert.build_report.margin_off_gamma < -0.02) return cert;
  }
  throw DegreeExhaustedError("certificate_build: no degree <= " +
                             std::to_string(opts.degree_max) +
                             " verifies; best off-arc margin " + std::to_string(best_margin));
}

Cx lemma53_g(Cx s) { return Cx(1.0) - std::sqrt(Cx(1.0) - s); }

Cx lemma53_g_sigma(Cx s, double sigma) {
  if (sigma <= 0.0) throw PreconditionError("g_sigma needs sigma > 0");
  return Cx(1.0) - std::sqrt(Cx(1.0) - s / sigma);
}

Cx lemma53_psi(Cx t, double sigma) {
  if (sigma <= 0.0) throw PreconditionError("psi needs sigma > 0");
  return sigma * t * (Cx(2.0) - t);
}

bool lemma53_in_U(Cx s, double eps) {
  if (std::abs(s) < eps) return true;
  const double a = std::arg(s);
  return a > 0.0 && a < eps;
}

bool lemma53_in_V(Cx t, double eps) {
  if (t.real() >= 1.0) return false;
  return lemma53_in_U(t * (Cx(2.0) - t), eps);
}

namespace {

struct KernelGrid {
  std::vector<Cx> points;      // all sample points of Delta(3/eps)
  std::vector<int> bad_index;  // indices of points outside V
  double radius = 0.0;
};

KernelGrid make_kernel_grid(double eps, int nr, int nth) {
  KernelGrid g;
  g.radius = 3.0 / eps;
  g.points.reserve(static_cast<std::size_t>(nr) * nth);
  for (int i = 1; i <= nr; ++i) {
    const double r = g.radius * i / nr;
    const double stagger = (i % 2 == 1) ? 0.5 : 0.0;
    for (int j = 0; j < nth; ++j) {
      const double th = kTwoPi * (j + stagger) / nth;
      const Cx t = r * Cx(std::cos(th), std::sin(th));
      if (!lemma53_in_V(t, eps)) {
        g.bad_index.push_back(static_cast<int>(g.points.size()));
      }
      g.points.push_back(t);
    }
  }
  return g;
}

}  // namespace

KernelCertificate lemma53_kernel(double eps, const KernelOptions& opts) {
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("lemma53_kernel needs 0 < eps < 1");
  if (opts.degree_ladder.empty()) throw PreconditionError("empty degree ladder");

  const KernelGrid grid = make_kernel_grid(eps, opts.grid_radial, opts.grid_angular);
  const int n = static_cast<int>(grid.bad_index.size());
  const int d_top = opts.degree_ladder.back();
  const int m_top = 2 * d_top;
  if (n <= m_top) throw GridMismatchError("kernel grid too coarse for the degree ladder");

  // Column-scaled real design matrix: columns 2k, 2k+1 hold Re and -Im of
  // (t/R)^{k+1} so that prefixes correspond to lower degrees.
  Eigen::MatrixXd A(n, m_top);
  std::vector<Cx> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = grid.points[static_cast<std::size_t>(grid.bad_index[static_cast<std::size_t>(i)])] / grid.radius;
  }
  {
    std::vector<Cx> p = x;
    for (int k = 0; k < d_top; ++k) {
      for (int i = 0; i < n; ++i) {
        A(i, 2 * k) = p[static_cast<std::size_t>(i)].real();
        A(i, 2 * k + 1) = -p[static_cast<std::size_t>(i)].imag();
        p[static_cast<std::size_t>(i)] *= x[static_cast<std::size_t>(i)];
      }
    }
  }
  Eigen::VectorXd colnorm = A.colwise().norm();
  for (int k = 0; k < m_top; ++k) {
    if (colnorm(k) > 0.0) A.col(k) /= colnorm(k);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, m_top);
  Eigen::MatrixXd Rfac = qr.matrixQR().topRows(m_top).triangularView<Eigen::Upper>();

  KernelReport report;
  report.grid_radial = opts.grid_radial;
  report.grid_angular = opts.grid_angular;
  double best_overall = std::numeric_limits<double>::infinity();

  Eigen::VectorXd warm = Eigen::VectorXd::Zero(0);
  for (int degree : opts.degree_ladder) {
    const int m = 2 * degree;
    auto Qd = Q.leftCols(m);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    y.head(warm.size()) = warm;

    // Semismooth Newton on the hinge-squared infeasibility of
    // Re theta <= -margin over the sampled bad set.
    double f_prev = std::numeric_limits<double>::infinity();
    double rung_best = std::numeric_limits<double>::infinity();
    int stall = 0;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
      Eigen::VectorXd v = (Qd * y).array() + 1.0 + opts.margin;
      rung_best = std::min(rung_best, v.maxCoeff() - opts.margin);
      std::vector<int> act;
      for (int i = 0; i < n; ++i) {
        if (v(i) > 0.0) act.push_back(i);
      }
      if (act.empty()) break;
      const int na = static_cast<int>(act.size());
      Eigen::MatrixXd Qa(na, m);
      Eigen::VectorXd va(na);
      for (int i = 0; i < na; ++i) {
        Qa.row(i) = Qd.row(act[static_cast<std::size_t>(i)]);
        va(i) = v(act[static_cast<std::size_t>(i)]);
      }
      const double f = 0.5 * va.squaredNorm();
      Eigen::VectorXd grad = Qa.transpose() * va;
      Eigen::MatrixXd H = Qa.transpose() * Qa;
      H.diagonal().array() += 1e-12;
      Eigen::VectorXd d = -H.ldlt().solve(grad);
      double step = 1.0;
      double f_new = f;
      for (int bt = 0; bt < 45; ++bt) {
        Eigen::VectorXd v2 = (Qd * (y + step * d)).array() + 1.0 + opts.margin;
        f_new = 0.5 * v2.cwiseMax(0.0).squaredNorm();
        if (f_new < f) break;
        step *= 0.5;
      }
      if (f_new >= f) break;
      y += step * d;
      stall = (f_prev - f_new < 1e-6 * std::max(f_new, 1.0)) ? stall + 1 : 0;
      f_prev = f_new;
      if (stall > 12) break;
    }
    report.ladder.push_back({degree, rung_best, it});
    best_overall = std::min(best_overall, rung_best);
    warm = y;
    report.degree = degree;

    Eigen::VectorXd v = (Qd * y).array() + 1.0;
    if (v.maxCoeff() >= 0.0) continue;

    // Candidate satisfied the factored-form constraints; recover monomial
    // coefficients and re-check honestly by Horner evaluation.
    Eigen::VectorXd chat =
        Rfac.topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(y);
    Polynomial theta;
    theta.coeffs.assign(static_cast<std::size_t>(degree) + 1, Cx(0.0));
    theta.coeffs[0] = Cx(1.0);
    double rpow = grid.radius;
    for (int k = 1; k <= degree; ++k) {
      const double cr = chat(2 * (k - 1)) / colnorm(2 * (k - 1));
      const double ci = chat(2 * (k - 1) + 1) / colnorm(2 * (k - 1) + 1);
      theta.coeffs[static_cast<std::size_t>(k)] = Cx(cr, ci) / rpow;
      rpow *= grid.radius;
    }
    double worst_bad = -std::numeric_limits<double>::infinity();
    double sup_re = -std::numeric_limits<double>::infinity();
    std::size_t bad_cursor = 0;
    for (std::size_t idx = 0; idx < grid.points.size(); ++idx) {
      const double re = theta.eval(grid.points[idx]).real();
      sup_re = std::max(sup_re, re);
      if (bad_cursor < grid.bad_index.size() &&
          grid.bad_index[bad_cursor] == static_cast<int>(idx)) {
        worst_bad = std::max(worst_bad, re);
        ++bad_cursor;
      }
    }
    report.margin = worst_bad;
    report.sup_re = sup_re;
    if (worst_bad < 0.0) {
      report.verified = true;
      KernelCertificate cert;
      cert.delta = 0.9 / std::max(sup_re, 1.0);
      cert.theta = std::move(theta);
      cert.report = report;
      return cert;
    }
  }
  throw DegreeExhaustedError(
      "lemma53_kernel: degree ladder exhausted at eps = " + std::to_string(eps) +
      "; best sampled margin " + std::to_string(best_overall) +
      " (>= 0 means unsatisfied constraints)");
}

}  // namespace quadloop
