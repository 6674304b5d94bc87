#include "doctest.h"

#include <cmath>

#include "quadloop/quadric.hpp"
#include "quadloop/sampling.hpp"

using namespace quadloop;

namespace {
const double kRoot2 = std::sqrt(2.0);
}

TEST_CASE("retraction fixes quadric points and evaluates in closed form") {
  CHECK(norm2(retract_point(C3{Cx(1), Cx(0), Cx(0)}) - C3{Cx(1), Cx(0), Cx(0)}) < 1e-15);
  // g = 4: divide by 2
  CHECK(norm2(retract_point(C3{Cx(2), Cx(0), Cx(0)}) - C3{Cx(1), Cx(0), Cx(0)}) < 1e-15);
  // g = 2: divide by sqrt 2
  const C3 r = retract_point(C3{Cx(1), Cx(1), Cx(0)});
  CHECK(std::abs(r[0] - Cx(1.0 / kRoot2)) < 1e-15);
  CHECK(std::abs(r[1] - Cx(1.0 / kRoot2)) < 1e-15);
  CHECK(std::abs(r[2]) < 1e-15);
}

TEST_CASE("retraction rejects the branch cut") {
  // g = -1 lies on the cut
  CHECK_THROWS_AS(retract_point(C3{Cx(0), Cx(0, 1), Cx(0)}), BranchCutError);
}

TEST_CASE("retraction idempotence and quadric membership on random points") {
  auto rng = seeded_rng(7, 1);
  double worst_idem = 0.0, worst_mem = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const C3 z = random_ambient_point(rng);
    const C3 r = retract_point(z);
    worst_mem = std::max(worst_mem, std::abs(quadric_g(r) - Cx(1)));
    worst_idem = std::max(worst_idem, norm2(retract_point(r) - r));
  }
  CHECK(worst_mem < 1e-12);
  CHECK(worst_idem < 1e-12);
}

TEST_CASE("retraction is complex differentiable: Cauchy-Riemann residual O(eps^2)") {
  auto rng = seeded_rng(7, 2);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const C3 z = random_ambient_point(rng, 0.2);
    C3 h{Cx(gauss(rng), gauss(rng)), Cx(gauss(rng), gauss(rng)), Cx(gauss(rng), gauss(rng))};
    const auto residual = [&](double eps) {
      C3 zp = z, zm = z, zi = z, zj = z;
      for (int c = 0; c < 3; ++c) {
        zp[c] += eps * h[c];
        zm[c] -= eps * h[c];
        zi[c] += eps * Cx(0, 1) * h[c];
        zj[c] -= eps * Cx(0, 1) * h[c];
      }
      const C3 dv = retract_point(zp) - retract_point(zm);
      const C3 di = retract_point(zi) - retract_point(zj);
      C3 cr;
      for (int c = 0; c < 3; ++c) cr[c] = di[c] - Cx(0, 1) * dv[c];
      return norm2(cr) / (2.0 * eps);
    };
    const double r3 = residual(1e-3);
    const double r4 = residual(1e-4);
    if (r3 > 1e-13) CHECK(r3 / r4 > 50.0);
  }
}

TEST_CASE("classification of the canonical points") {
  const Classification real_pt = classify(QuadricPoint{C3{Cx(1), Cx(0), Cx(0)}}, {});
  CHECK(real_pt.u == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(real_pt.kappa == 0.0);
  CHECK(real_pt.in_K);
  CHECK(real_pt.in_Ma);
  CHECK_FALSE(real_pt.in_M_prime);

  // u = 3, kappa = 1, sum z^2 = 2 - 1 = 1
  const Classification lifted = classify(QuadricPoint{C3{Cx(kRoot2), Cx(0, 1), Cx(0)}}, {});
  CHECK(lifted.u == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(lifted.kappa == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lifted.in_M_prime);
  CHECK(lifted.in_Mab_open);
}

TEST_CASE("tangent projection formula and idempotence") {
  const QuadricPoint z{C3{Cx(1), Cx(0), Cx(0)}};
  const TangentVector t = project_tangent(z, C3{Cx(1), Cx(2), Cx(3)});
  CHECK(std::abs(t.v[0]) < 1e-15);
  CHECK(std::abs(t.v[1] - Cx(2)) < 1e-15);
  CHECK(std::abs(t.v[2] - Cx(3)) < 1e-15);
  const TangentVector again = project_tangent(z, t.v);
  CHECK(norm2(again.v - t.v) < 1e-15);

  auto rng = seeded_rng(7, 3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const QuadricPoint p = random_m_point(rng);
    const C3 v{Cx(gauss(rng), gauss(rng)), Cx(gauss(rng), gauss(rng)),
               Cx(gauss(rng), gauss(rng))};
    const TangentVector tv = project_tangent(p, v);
    CHECK(std::abs(dot_bilinear(p.z, tv.v)) < 1e-12);
  }
}

TEST_CASE("e_basis spans the du-kernel line and fails on the real locus") {
  const QuadricPoint z{C3{Cx(kRoot2), Cx(0, 1), Cx(0)}};
  const TangentVector e = e_basis(z);
  // both linear conditions force v1 = v2 = 0; phase rule makes it (0,0,1)
  CHECK(std::abs(e.v[0]) < 1e-12);
  CHECK(std::abs(e.v[1]) < 1e-12);
  CHECK(std::abs(e.v[2] - Cx(1)) < 1e-12);

  auto rng = seeded_rng(7, 4);
  for (int i = 0; i < 100; ++i) {
    const QuadricPoint p = random_m_point(rng);
    if (classify(p, {}).kappa < 1e-6) continue;
    const TangentVector e2 = e_basis(p);
    CHECK(std::abs(dot_bilinear(p.z, e2.v)) < 1e-12);
    CHECK(std::abs(dot_hermitian(p.z, e2.v)) < 1e-12);
    CHECK(norm2(e2.v) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(e_basis(QuadricPoint{C3{Cx(1), Cx(0), Cx(0)}}), CriticalPointError);
}

TEST_CASE("omega on the canonical frame, antisymmetry and bilinearity") {
  const QuadricPoint z{C3{Cx(1), Cx(0), Cx(0)}};
  CHECK(omega_eval(z, C3{Cx(0), Cx(1), Cx(0)}, C3{Cx(0), Cx(0), Cx(1)}) == Cx(1));

  auto rng = seeded_rng(7, 5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const QuadricPoint p = random_m_point(rng);
    const C3 v{Cx(gauss(rng), gauss(rng)), Cx(gauss(rng), gauss(rng)),
               Cx(gauss(rng), gauss(rng))};
    const C3 w{Cx(gauss(rng), gauss(rng)), Cx(gauss(rng), gauss(rng)),
               Cx(gauss(rng), gauss(rng))};
    CHECK(std::abs(omega_eval(p, v, v)) < 1e-14);
    CHECK(std::abs(omega_eval(p, v, w) + omega_eval(p, w, v)) < 1e-13);
    const Cx lambda(0.3, -1.2);
    C3 lv;
    for (int c = 0; c < 3; ++c) lv[c] = lambda * v[c];
    CHECK(std::abs(omega_eval(p, lv, w) - lambda * omega_eval(p, v, w)) < 1e-12);
  }
}

TEST_CASE("cover push: closed form, quotient symmetry, zero rejection") {
  const QuadricPoint z = cover_push(CoverPoint{Cx(1), Cx(0)});
  // z0 = (i, 1, 0), scale sqrt 2: (i, sqrt 2, 0)
  CHECK(std::abs(z.z[0] - Cx(0, 1)) < 1e-14);
  CHECK(std::abs(z.z[1] - Cx(kRoot2)) < 1e-14);
  CHECK(std::abs(z.z[2]) < 1e-14);

  const QuadricPoint zm = cover_push(CoverPoint{Cx(-1), Cx(0)});
  CHECK(norm2(z.z - zm.z) < 1e-15);
  CHECK_THROWS_AS(cover_push(CoverPoint{Cx(0), Cx(0)}), ZeroPointError);

  auto rng = seeded_rng(7, 6);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    CoverPoint w{Cx(gauss(rng), gauss(rng)), Cx(gauss(rng), gauss(rng))};
    if (std::sqrt(std::norm(w.w1) + std::norm(w.w2)) < 1e-3) continue;
    const QuadricPoint p = cover_push(w);
    worst = std::max(worst, std::abs(quadric_g(p.z) - Cx(1)));
    CHECK(classify(p, {}).kappa > 0.0);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("cover lift closure detects the order-two deck group") {
  const int n = 128;
  std::vector<C3> once(n), twice(n), constant(n);
  const C3 base = cover_push(CoverPoint{Cx(1), Cx(0)}).z;
  for (int j = 0; j < n; ++j) {
    const double s = kTwoPi * j / n;
    once[static_cast<std::size_t>(j)] =
        cover_push(CoverPoint{std::exp(Cx(0.0, s / 2.0)), Cx(0)}).z;
    twice[static_cast<std::size_t>(j)] =
        cover_push(CoverPoint{std::exp(Cx(0.0, s)), Cx(0)}).z;
    constant[static_cast<std::size_t>(j)] = base;
  }
  CHECK(cover_lift(constant).closed);
  CHECK_FALSE(cover_lift(once).closed);  // endpoint is the negated start
  CHECK(cover_lift(twice).closed);       // traversed twice: deck group has order 2
}
