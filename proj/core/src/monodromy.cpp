#include "quadloop/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "quadloop/fft.hpp"

namespace quadloop {

namespace {

struct GaussLegendre {
  std::vector<double> nodes;    // on (0, 1)
  std::vector<double> weights;
};

// Golub-Welsch-free construction: Newton iteration on Legendre polynomials,
// then affine map [-1, 1] -> [0, 1].
GaussLegendre gauss_legendre(int n) {
  GaussLegendre g;
  g.nodes.resize(static_cast<std::size_t>(n));
  g.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    g.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (x + 1.0);
    g.weights[static_cast<std::size_t>(n - 1 - i)] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return g;
}

struct Cover2 {
  Cx w1, w2;
};

// Radial profile of Fourier mode k and its derivative, per schedule.
void radial_profile(int schedule, int damping, int abs_k, double r, double* rho,
                    double* drho) {
  if (abs_k == 0) {
    *rho = 1.0;
    *drho = 0.0;
    return;
  }
  const int e = abs_k + 2 * damping;
  const double re = std::pow(r, e - 1);
  if (schedule == 0) {
    *rho = re * r;
    *drho = e * re;
  } else {  // c_0 (1 - r^2) + r^2 W: nonzero modes gain r^2
    *rho = re * r * r * r;
    *drho = (e + 2) * re * r * r;
  }
}

struct PushedPoint {
  C3 xi;
  C3 d_r;
  C3 d_s;
};

// Push W and its partials through the double cover, by the chain rule of
// w -> z0 = (i(w1^2+w2^2), w1^2-w2^2, 2 w1 w2) -> scale(Re z0) + i Im z0.
PushedPoint push_with_derivs(const Cover2& w, const Cover2& dr, const Cover2& ds) {
  const auto z0_of = [](const Cover2& v, const Cover2& dv) {
    C3 out;
    out[0] = Cx(0.0, 2.0) * (v.w1 * dv.w1 + v.w2 * dv.w2);
    out[1] = 2.0 * (v.w1 * dv.w1 - v.w2 * dv.w2);
    out[2] = 2.0 * (dv.w1 * v.w2 + v.w1 * dv.w2);
    return out;
  };
  const Cx w1s = w.w1 * w.w1;
  const Cx w2s = w.w2 * w.w2;
  const C3 z0{Cx(0.0, 1.0) * (w1s + w2s), w1s - w2s, 2.0 * w.w1 * w.w2};
  const C3 dz0_r = z0_of(w, dr);
  const C3 dz0_s = z0_of(w, ds);

  const R3 a = real_part(z0);
  const double na = norm2(a);
  const double scale = std::sqrt(1.0 + 1.0 / (na * na));

  PushedPoint out;
  const auto assemble = [&](const C3& dz0) {
    const R3 da = real_part(dz0);
    const R3 db = imag_part(dz0);
    const double dna = dot(a, da) / na;
    const double dscale = -dna / (na * na * na * scale);
    C3 d;
    for (int j = 0; j < 3; ++j) {
      d[j] = Cx(dscale * a[j] + scale * da[j], db[j]);
    }
    return d;
  };
  for (int j = 0; j < 3; ++j) out.xi[j] = Cx(scale * a[j], z0[j].imag());
  out.d_r = assemble(dz0_r);
  out.d_s = assemble(dz0_s);
  return out;
}

}  // namespace

LoopFunctionValue f_eval(const Loop& x, const FEvalOptions& opts, const Tolerances& tol) {
  const auto samples = x.grid_samples();
  const int n = static_cast<int>(samples.size());
  const CoverLift lift = cover_lift(samples, tol);
  if (!lift.closed) {
    throw NotNullHomotopicError("cover lift of the loop does not close");
  }

  // Fourier coefficients of the closed cover loop.
  std::vector<Cx> c1(static_cast<std::size_t>(n)), c2(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    c1[static_cast<std::size_t>(j)] = lift.path[static_cast<std::size_t>(j)].w1;
    c2[static_cast<std::size_t>(j)] = lift.path[static_cast<std::size_t>(j)].w2;
  }
  c1 = fourier_coeffs(std::move(c1));
  c2 = fourier_coeffs(std::move(c2));

  const GaussLegendre gl = gauss_legendre(opts.gl_nodes);

  // Orthogonal cap for loops whose cover lift has (near-)vanishing mean: a
  // C^1 bump s_cap (1 - r^2) n_hat with n_hat Hermitian-orthogonal to the
  // dominant Fourier mode. Boundary values are untouched (g(1) = 0), and
  // any nonvanishing C^1 extension gives the same integral (Stokes).
  double dom = 0.0;
  Cover2 dom_c{c1[0], c2[0]};
  double rms = 0.0;
  for (int k = 0; k < n; ++k) {
    const std::size_t ku = static_cast<std::size_t>(k);
    const double m = std::norm(c1[ku]) + std::norm(c2[ku]);
    rms += m;
    if (m > dom) {
      dom = m;
      dom_c = Cover2{c1[ku], c2[ku]};
    }
  }
  const double s_cap = std::sqrt(rms);
  const double dom_norm = std::sqrt(dom);
  const Cover2 n_hat{-std::conj(dom_c.w2) / dom_norm, std::conj(dom_c.w1) / dom_norm};
  // Near-zero passages of W make the pushed extension run far out on M
  // (kappa ~ |W|^2) and ruin the quadrature, so escalate well before tau_0.
  const double cover_floor = std::max(tol.tau_0, 0.05 * s_cap);

  for (int attempt = 0; attempt <= 2 * opts.max_damping + 1; ++attempt) {
    const int damping = attempt % (opts.max_damping + 1);
    const bool capped = attempt > opts.max_damping;
    // Center value of the extension is the mean coefficient: nonzero needed.
    const Cx cap0_1 = capped ? s_cap * n_hat.w1 : Cx(0.0);
    const Cx cap0_2 = capped ? s_cap * n_hat.w2 : Cx(0.0);
    double min_norm = std::sqrt(std::norm(c1[0] + cap0_1) + std::norm(c2[0] + cap0_2));
    Cx value(0.0);
    bool hit_zero = min_norm < cover_floor;
    for (int ri = 0; ri < opts.gl_nodes && !hit_zero; ++ri) {
      const double r = gl.nodes[static_cast<std::size_t>(ri)];
      const double g = capped ? s_cap * (1.0 - r * r) : 0.0;
      const double dg = capped ? -2.0 * r * s_cap : 0.0;
      // Ring synthesis by FFT: value, radial and angular derivative spectra.
      std::vector<Cx> sw1(static_cast<std::size_t>(n)), sw2(static_cast<std::size_t>(n)),
          sr1(static_cast<std::size_t>(n)), sr2(static_cast<std::size_t>(n)),
          ss1(static_cast<std::size_t>(n)), ss2(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) {
        const int freq = (k <= n / 2) ? k : k - n;
        double rho = 0.0, drho = 0.0;
        radial_profile(opts.schedule, damping, std::abs(freq), r, &rho, &drho);
        const std::size_t ku = static_cast<std::size_t>(k);
        sw1[ku] = rho * c1[ku];
        sw2[ku] = rho * c2[ku];
        sr1[ku] = drho * c1[ku];
        sr2[ku] = drho * c2[ku];
        ss1[ku] = Cx(0.0, freq) * rho * c1[ku];
        ss2[ku] = Cx(0.0, freq) * rho * c2[ku];
      }
      const auto w1 = fourier_synthesis(std::move(sw1));
      const auto w2 = fourier_synthesis(std::move(sw2));
      const auto dr1 = fourier_synthesis(std::move(sr1));
      const auto dr2 = fourier_synthesis(std::move(sr2));
      const auto ds1 = fourier_synthesis(std::move(ss1));
      const auto ds2 = fourier_synthesis(std::move(ss2));
      Cx row_acc(0.0);
      for (int j = 0; j < n; ++j) {
        const std::size_t ju = static_cast<std::size_t>(j);
        const Cover2 w{w1[ju] + g * n_hat.w1, w2[ju] + g * n_hat.w2};
        const double cover_norm = std::sqrt(std::norm(w.w1) + std::norm(w.w2));
        min_norm = std::min(min_norm, cover_norm);
        if (cover_norm < cover_floor) {
          hit_zero = true;
          break;
        }
        const PushedPoint p =
            push_with_derivs(w, Cover2{dr1[ju] + dg * n_hat.w1, dr2[ju] + dg * n_hat.w2},
                             Cover2{ds1[ju], ds2[ju]});
        row_acc += omega_eval(QuadricPoint{p.xi}, p.d_r, p.d_s);
      }
      value += gl.weights[static_cast<std::size_t>(ri)] * row_acc * (kTwoPi / n);
    }
    if (!hit_zero) {
      LoopFunctionValue out;
      out.value = value;
      out.diag = {opts.schedule, attempt, opts.gl_nodes, min_norm};
      return out;
    }
  }
  throw ExtensionHitsZeroError("cover extension vanished at every damping level");
}

Cx df_eval(const Loop& x, const std::vector<C3>& v_samples, const Tolerances& tol) {
  const auto xs = x.grid_samples();
  const int n = static_cast<int>(xs.size());
  if (static_cast<int>(v_samples.size()) != n) {
    throw GridMismatchError("tangent section grid must match the loop grid");
  }
  for (int j = 0; j < n; ++j) {
    if (std::abs(dot_bilinear(xs[static_cast<std::size_t>(j)], v_samples[static_cast<std::size_t>(j)])) > 1e3 * tol.tau_M) {
      throw TangencyViolationError("section is not tangent to M at sample " + std::to_string(j));
    }
  }
  const auto dxs = x.derivative().grid_samples();
  Cx acc(0.0);
  for (int j = 0; j < n; ++j) {
    acc += omega_eval(QuadricPoint{xs[static_cast<std::size_t>(j)]},
                      v_samples[static_cast<std::size_t>(j)], dxs[static_cast<std::size_t>(j)]);
  }
  return acc * (kTwoPi / n);
}

double period_K(int resolution, bool flip_orientation) {
  const int n = std::max(resolution, 8) & ~1;  // even for Simpson
  double total = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double theta = kPi * i / n;
    const double simpson = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      const double phi = kTwoPi * j / n;
      const C3 x{Cx(std::sin(theta) * std::cos(phi)), Cx(std::sin(theta) * std::sin(phi)),
                 Cx(std::cos(theta))};
      const C3 dth{Cx(std::cos(theta) * std::cos(phi)), Cx(std::cos(theta) * std::sin(phi)),
                   Cx(-std::sin(theta))};
      const C3 dph{Cx(-std::sin(theta) * std::sin(phi)), Cx(std::sin(theta) * std::cos(phi)),
                   Cx(0.0)};
      row += omega_eval(QuadricPoint{x}, dth, dph).real();
    }
    total += simpson * row;
  }
  total *= (kPi / n / 3.0) * (kTwoPi / n);
  return flip_orientation ? -total : total;
}

C3 collapse_map(Cx sigma) {
  const double r = std::min(std::abs(sigma), 1.0);
  const double phi = (r > 0.0) ? std::arg(sigma) : 0.0;
  const double theta = 0.5 * kPi * (3.0 * r - r * r * r);
  return {Cx(std::sin(theta) * std::cos(phi)), Cx(std::sin(theta) * std::sin(phi)),
          Cx(std::cos(theta))};
}

DemoCurve demo_curve(int t_grid, int n_loop, int sobolev_k) {
  if (t_grid < 2) throw PreconditionError("demo_curve needs a t-grid of size >= 2");
  int n_s = 8;
  while (n_s < 4 * n_loop) n_s <<= 1;
  std::vector<double> times;
  std::vector<Loop> loops;
  for (int i = 0; i < t_grid; ++i) {
    const double t = static_cast<double>(i) / (t_grid - 1);
    std::vector<C3> samples(static_cast<std::size_t>(n_s));
    for (int j = 0; j < n_s; ++j) {
      const Cx s = std::exp(Cx(0.0, kTwoPi * j / n_s));
      samples[static_cast<std::size_t>(j)] = collapse_map((1.0 - t) + t * s);
    }
    times.push_back(t);
    loops.push_back(Loop::from_samples(samples, n_loop, sobolev_k));
  }
  DemoCurve out;
  out.collapse_point = collapse_map(Cx(1.0));
  out.curve = LoopCurve(std::move(times), std::move(loops));
  return out;
}

MonodromyResult monodromy_increment(const LoopCurve& c, const MonodromyOptions& opts,
                                    const Tolerances& tol) {
  if (!c.closed(tol)) throw PreconditionError("monodromy_increment needs a closed curve");
  GridDefaults grids;
  grids.t_grid = opts.t_grid;
  const RegularLift lift =
      build_regular_lift(c, opts.eps_push, opts.max_retries, tol, grids, opts.seed);
  const LoopFunctional f = [&](const Loop& y) { return f_eval(y, opts.f_opts, tol).value; };
  MonodromyResult out;
  out.chain = slide(f, c, lift, tol);
  out.increment = out.chain.end_value() - out.chain.start_value();
  out.frame_holonomy = lift.frame_holonomy;
  out.anchored = lift.anchored;
  out.boundary_kappa_min = lift.boundary_kappa_min;
  return out;
}

}  // namespace quadloop
