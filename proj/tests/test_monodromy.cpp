#include "doctest.h"

#include <cmath>
#include <random>

#include "quadloop/monodromy.hpp"
#include "quadloop/sampling.hpp"

using namespace quadloop;

namespace {

Loop perturbed_loop(const Loop& x, const std::vector<C3>& v, double h) {
  const auto xs = x.grid_samples();
  std::vector<C3> out(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    C3 w = xs[j];
    for (int c = 0; c < 3; ++c) w[c] += h * v[j][c];
    out[j] = retract_point(w);
  }
  return Loop::from_samples(out, x.n_loop(), x.sobolev_k());
}

}  // namespace

TEST_CASE("sphere period converges to 4 pi and flips with orientation") {
  CHECK(std::abs(period_K(256) - 4.0 * kPi) < 1e-8);
  CHECK(std::abs(period_K(256, true) + 4.0 * kPi) < 1e-8);
  const double e128 = std::abs(period_K(128) - 4.0 * kPi);
  const double e256 = std::abs(period_K(256) - 4.0 * kPi);
  CHECK(e128 / e256 > 10.0);  // fourth-order quadrature: ratio 16 expected
}

TEST_CASE("f vanishes identically on constant loops") {
  auto rng = seeded_rng(37, 1);
  for (int i = 0; i < 5; ++i) {
    const QuadricPoint z = random_m_point(rng);
    if (kappa(z.z) < 0.2) continue;
    const Loop x = Loop::constant(z.z, 32, 1);
    CHECK(f_eval(x).value == Cx(0.0));
  }
}

TEST_CASE("f rejects loops outside the null class") {
  // half-speed equator upstairs: closed in M', open in the cover
  const int n = 128;
  std::vector<C3> samples(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    samples[static_cast<std::size_t>(j)] =
        cover_push(CoverPoint{std::exp(Cx(0.0, kPi * j / n)), Cx(0.3)}).z;
  }
  const Loop winding = Loop::from_samples(samples, 32, 1);
  CHECK_THROWS_AS(f_eval(winding), NotNullHomotopicError);
}

TEST_CASE("df is complex linear and is the derivative of f") {
  auto rng = seeded_rng(37, 2);
  const Loop x = random_mprime_loop(rng, 32, 1);
  const auto v = random_tangent_section(rng, x);
  const Cx dv = df_eval(x, v);
  std::vector<C3> iv(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    for (int c = 0; c < 3; ++c) iv[j][c] = Cx(0, 1) * v[j][c];
  }
  CHECK(std::abs(df_eval(x, iv) - Cx(0, 1) * dv) < 1e-12);

  // remainder |f(x + h v) - f(x) - h df(v)| decays quadratically in h
  const Cx f0 = f_eval(x).value;
  const auto remainder = [&](double h) {
    const Loop xp = perturbed_loop(x, v, h);
    const auto vp = [&] {
      // df at the perturbed base uses the projected section there
      std::vector<C3> out(v.size());
      const auto xs = xp.grid_samples();
      for (std::size_t j = 0; j < xs.size(); ++j) {
        out[j] = project_tangent(QuadricPoint{xs[j]}, v[j]).v;
      }
      return out;
    }();
    return std::abs(f_eval(xp).value - f0 - h * df_eval(x, v));
  };
  const double r1 = remainder(1e-3);
  const double r2 = remainder(2e-4);
  const double slope = std::log(r1 / r2) / std::log(5.0);
  CHECK(slope > 1.8);
  CHECK(slope < 2.4);
}

TEST_CASE("f is independent of the radial extension schedule") {
  auto rng = seeded_rng(37, 3);
  FEvalOptions alt;
  alt.schedule = 1;
  for (int i = 0; i < 5; ++i) {
    const Loop x = random_mprime_loop(rng, 32, 1);
    const Cx base = f_eval(x).value;
    const Cx other = f_eval(x, alt).value;
    CHECK(std::abs(base - other) < 1e-6);
  }
}

TEST_CASE("demo curve collapses to constant loops at both ends") {
  const DemoCurve demo = demo_curve(64);
  CHECK(demo.curve.closed());
  CHECK(norm2(demo.collapse_point - C3{Cx(0), Cx(0), Cx(-1)}) < 1e-12);
  for (const double t : {0.0, 1.0}) {
    const Loop end = demo.curve.at(t);
    for (const auto& z : end.grid_samples()) {
      CHECK(norm2(z - demo.collapse_point) < 1e-10);
    }
  }
  // interior knots trace collapse(1 - t + t e^{is}) exactly
  const std::size_t mid_idx = demo.curve.size() / 2;
  const double t_mid = demo.curve.times()[mid_idx];
  const auto mids = demo.curve.loops()[mid_idx].grid_samples();
  double worst = 0.0;
  for (std::size_t j = 0; j < mids.size(); ++j) {
    const Cx sigma = 1.0 - t_mid + t_mid * std::exp(Cx(0.0, kTwoPi * j / mids.size()));
    worst = std::max(worst, norm2(mids[j] - collapse_map(sigma)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("demo monodromy realizes the 4 pi period") {
  const DemoCurve demo = demo_curve(256);
  const MonodromyResult r = monodromy_increment(demo.curve);
  CHECK(std::abs(std::abs(r.increment) - 4.0 * kPi) < 1e-3);
  CHECK(r.boundary_kappa_min > 0.0);
  CHECK(std::abs(r.chain.start_value()) < 1e-10);
  for (const auto& rec : r.chain.records) {
    CHECK(rec.overlap_residual <= Tolerances{}.tau_overlap);
  }

  // reversing the curve negates the increment
  std::vector<double> rev_times;
  std::vector<Loop> rev_loops;
  const auto& ts = demo.curve.times();
  const auto& xs = demo.curve.loops();
  for (std::size_t i = xs.size(); i-- > 0;) {
    rev_times.push_back(1.0 - ts[i]);
    rev_loops.push_back(xs[i]);
  }
  const MonodromyResult back =
      monodromy_increment(LoopCurve(std::move(rev_times), std::move(rev_loops)));
  CHECK(std::abs(back.increment + r.increment) < 2e-3);
}
