#include "doctest.h"

#include <cmath>
#include <random>

#include "quadloop/continuation.hpp"
#include "quadloop/monodromy.hpp"
#include "quadloop/sampling.hpp"

using namespace quadloop;

namespace {

LoopFunctional f_functional() {
  return [](const Loop& x) { return f_eval(x).value; };
}

}  // namespace

TEST_CASE("loop disc evaluation is Horner in sigma") {
  const Loop a = Loop::constant(C3{Cx(std::sqrt(2.0)), Cx(0, 1), Cx(0)}, 8, 1);
  const Loop b = Loop::constant(C3{Cx(0.1), Cx(0), Cx(0)}, 8, 1);
  const LoopDisc d({a, b});
  CHECK(d.m_deg() == 1);
  CHECK(loop_distance(d.center(), a) == 0.0);
  // a + 0.5 b evaluated pointwise
  const auto xs = d.eval(Cx(0.5)).grid_samples();
  const auto as = a.grid_samples();
  for (std::size_t j = 0; j < xs.size(); ++j) {
    CHECK(std::abs(xs[j][0] - as[j][0] - Cx(0.05)) < 1e-14);
    CHECK(std::abs(xs[j][1] - as[j][1]) < 1e-14);
    CHECK(std::abs(xs[j][2] - as[j][2]) < 1e-14);
  }
}

TEST_CASE("sigma-circle sampling inverts loop disc synthesis") {
  auto rng = seeded_rng(31, 1);
  const LoopDisc d = random_mprime_loop_disc(rng, 16, 16, 1);
  CHECK(d.quadric_defect_sup() < 1e-6);

  std::vector<Loop> circle;
  for (int q = 0; q < 64; ++q) {
    circle.push_back(d.eval(std::exp(Cx(0.0, kTwoPi * q / 64))));
  }
  const LoopDisc back = loop_disc_from_samples(circle, 16);
  REQUIRE(back.m_deg() == d.m_deg());
  for (int m = 0; m <= 16; ++m) {
    CHECK(loop_distance(back.coeffs()[static_cast<std::size_t>(m)],
                        d.coeffs()[static_cast<std::size_t>(m)]) < 1e-12);
  }
}

TEST_CASE("regular lift reproduces curve centers and stays off K") {
  auto rng = seeded_rng(31, 2);
  const LoopCurve c = random_mprime_closed_curve(rng, 64, 16, 1);
  const RegularLift L = build_regular_lift(c, 0.2, 8);
  CHECK(L.anchored);
  CHECK(L.center_error <= Tolerances{}.tau_lift);
  CHECK(L.boundary_kappa_min > 0.0);
  CHECK(L.t_grid.size() == c.size());
  CHECK(L.discs.size() == c.size());

  const SafetyRadius sr = safety_radius(L);
  CHECK(sr.epsilon > 0.0);
  CHECK(sr.cut_margin > 0.0);
  CHECK(sr.k_margin > 0.0);
}

TEST_CASE("slide values agree with direct evaluation and close up") {
  auto rng = seeded_rng(31, 3);
  const LoopCurve c = random_mprime_closed_curve(rng, 256, 16, 1);
  const RegularLift L = build_regular_lift(c, 0.2, 8);
  const ContinuationChain chain = slide(f_functional(), c, L);
  REQUIRE(chain.records.size() == c.size());
  CHECK(chain.delta > 0.0);
  CHECK(chain.epsilon > 0.0);

  // the continued germ is the honest functional at every knot
  for (std::size_t i = 0; i < chain.records.size(); i += 7) {
    const Cx direct = f_eval(c.loops()[i]).value;
    CHECK(std::abs(chain.records[i].value - direct) < 1e-6);
  }
  for (const auto& r : chain.records) {
    CHECK(r.overlap_residual <= Tolerances{}.tau_overlap);
    CHECK(r.delta1 > 0.0);
  }
  // null-homotopic class: monodromy closes to the start value
  CHECK(std::abs(chain.end_value() - chain.start_value()) < 1e-6);
}

TEST_CASE("mean value audit is tight and sharpens with sigma resolution") {
  const LoopFunctional f = f_functional();
  for (std::uint64_t stream = 10; stream < 13; ++stream) {
    auto rng = seeded_rng(31, stream);
    const LoopDisc d = random_mprime_loop_disc(rng, 8, 16, 1);
    CHECK(mean_value_audit(f, d) < 1e-6);

    auto rng2 = seeded_rng(31, stream);  // same disc, doubled sigma degree
    const LoopDisc fine = random_mprime_loop_disc(rng2, 16, 16, 1);
    CHECK(mean_value_audit(f, fine) < 1e-6);
  }
}

TEST_CASE("audit rejects discs that touch the real locus") {
  const Loop on_k = Loop::constant(C3{Cx(1), Cx(0), Cx(0)}, 8, 1);
  CHECK_THROWS_AS(mean_value_audit(f_functional(), LoopDisc({on_k})), PreconditionError);
}
