#include "doctest.h"

#include <random>
#include <string>

#include "quadloop/sampling.hpp"
#include "quadloop/serialize.hpp"

using namespace quadloop;

TEST_CASE("loop JSON round trip is lossless and deterministic") {
  auto rng = seeded_rng(23, 1);
  const Loop x = random_mprime_loop(rng, 24, 1);
  const std::string text = loop_to_json(x);
  const Loop back = loop_from_json(text);
  CHECK(back.sobolev_k() == x.sobolev_k());
  CHECK(loop_distance(x, back) < 1e-15);
  CHECK(loop_to_json(back) == text);  // byte identical re-serialization
}

TEST_CASE("curve JSON round trip preserves knots") {
  auto rng = seeded_rng(23, 2);
  const LoopCurve c = random_mprime_closed_curve(rng, 8, 16, 1);
  const std::string text = curve_to_json(c);
  const LoopCurve back = curve_from_json(text);
  REQUIRE(back.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(back.times()[i] == c.times()[i]);
    CHECK(loop_distance(back.loops()[i], c.loops()[i]) < 1e-15);
  }
  CHECK(curve_to_json(back) == text);
}

TEST_CASE("disc JSON round trip") {
  const AnalyticDisc d =
      AnalyticDisc::constant(C3{Cx(std::sqrt(2.0)), Cx(0, 1), Cx(0)}, 16, 256);
  const std::string text = disc_to_json(d);
  const AnalyticDisc back = disc_from_json(text);
  CHECK(back.n_grid() == d.n_grid());
  CHECK(disc_distance(d, back) < 1e-15);
  CHECK(disc_to_json(back) == text);
}

TEST_CASE("push problem JSON round trip") {
  PushProblem p;
  p.kappa_disc = AnalyticDisc::constant(C3{Cx(std::sqrt(2.0)), Cx(0, 1), Cx(0)}, 16, 256);
  p.alpha.assign(256, 0.003);
  p.eta = 0.0030472707512809 / 10.0;
  p.J = 16;
  const std::string text = push_problem_to_json(p);
  const PushProblem back = push_problem_from_json(text);
  CHECK(back.alpha == p.alpha);
  CHECK(back.eta == p.eta);
  CHECK(back.J == p.J);
  CHECK(back.region.a == p.region.a);
  CHECK(disc_distance(back.kappa_disc, p.kappa_disc) < 1e-15);
  CHECK(push_problem_to_json(back) == text);
}

TEST_CASE("certificate JSON round trip survives re-verification") {
  const BoundaryArcSet gamma = BoundaryArcSet::from_arcs({BoundaryArc{0.2, 0.2 + kPi}});
  const HarmonicCertificate c = certificate_build(gamma, 0.3);
  const std::string text = certificate_to_json(c);
  const HarmonicCertificate back = certificate_from_json(text);
  CHECK(back.delta == c.delta);
  REQUIRE(back.theta.coeffs.size() == c.theta.coeffs.size());
  CHECK(back.theta.coeffs == c.theta.coeffs);
  CHECK(certificate_verify(back, gamma, 4096).pass);
  CHECK(certificate_to_json(back) == text);
}

TEST_CASE("readers reject malformed input") {
  CHECK_THROWS_AS(loop_from_json("not json"), SerializationError);
  CHECK_THROWS_AS(loop_from_json("{}"), SerializationError);
  CHECK_THROWS_AS(loop_from_json(R"({"schema":99,"record":"loop"})"), SerializationError);
  // wrong record tag for the requested reader
  auto rng = seeded_rng(23, 3);
  const std::string loop_text = loop_to_json(random_mprime_loop(rng, 8, 1));
  CHECK_THROWS_AS(curve_from_json(loop_text), SerializationError);
  CHECK_THROWS_AS(
      loop_from_json(R"({"schema":1,"record":"loop","sobolev_k":1,"coeffs":[]})"),
      SerializationError);
  // even coefficient count cannot be a symmetric spectrum
  CHECK_THROWS_AS(loop_from_json(
                      R"({"schema":1,"record":"loop","sobolev_k":1,
                          "coeffs":[[[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]]})"),
                  SerializationError);
  CHECK_THROWS_AS(disc_from_json(R"({"schema":1,"record":"disc","coeffs":[[[1,0],[0,0],[0,0]]]})"),
                  SerializationError);  // missing n_grid
}

TEST_CASE("chain and monodromy writers emit stable headers") {
  ContinuationChain chain;
  chain.delta = 0.25;
  chain.epsilon = 0.5;
  chain.records.push_back({0.0, Loop::constant(C3{Cx(1), Cx(0), Cx(0)}, 4, 1),
                           Cx(0.0, 0.0), 0.3, 1e-9});
  chain.records.push_back({1.0, Loop::constant(C3{Cx(1), Cx(0), Cx(0)}, 4, 1),
                           Cx(0.0, 12.5), 0.3, 2e-9});
  const std::string csv = chain_to_csv(chain);
  CHECK(csv.rfind("t,f_re,f_im,delta1,overlap_residual\n", 0) == 0);
  CHECK(csv.find("1.25000000000000000e+01") != std::string::npos);

  const std::string cj = chain_to_json(chain);
  CHECK(cj.find("\"continuation_chain\"") != std::string::npos);
  CHECK(chain_to_json(chain) == cj);

  MonodromyResult r;
  r.chain = chain;
  r.increment = Cx(0.0, 12.5);
  r.frame_holonomy = -12.5;
  r.anchored = true;
  r.boundary_kappa_min = 0.5;
  const std::string trace = monodromy_trace_csv(r);
  CHECK(trace.rfind("t,f_re,f_im,kappa_margin\n", 0) == 0);
  const std::string mj = monodromy_to_json(r);
  CHECK(mj.find("\"monodromy_result\"") != std::string::npos);
  CHECK(monodromy_to_json(r) == mj);
}
