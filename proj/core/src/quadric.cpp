#include "quadloop/quadric.hpp"

#include <algorithm>
#include <cmath>

namespace quadloop {

void RegionSpec::validate() const {
  if (!(a > 1.0)) throw ConfigError("region requires a > 1 so K stays inside M(a)");
  if (!(a < c && c < b)) throw ConfigError("region requires a < c < b");
}

Cx quadric_g(const C3& w) { return dot_bilinear(w, w); }

bool in_retraction_domain(const C3& w, const Tolerances& tol) {
  const Cx g = quadric_g(w);
  return g.real() > 0.0 || std::abs(g.imag()) > tol.tau_cut;
}

C3 retract_point(const C3& w, const Tolerances& tol) {
  if (!all_finite(w)) throw PreconditionError("non-finite ambient point");
  const Cx g = quadric_g(w);
  if (!(g.real() > 0.0 || std::abs(g.imag()) > tol.tau_cut)) {
    throw BranchCutError("g(w) = " + std::to_string(g.real()) + " + " +
                         std::to_string(g.imag()) + "i is within tau_cut of (-inf, 0]");
  }
  const Cx s = std::sqrt(g);  // principal branch
  return {w[0] / s, w[1] / s, w[2] / s};
}

QuadricPoint retract_ambient(const AmbientPoint& w, const Tolerances& tol) {
  return {retract_point(w.w, tol)};
}

Classification classify(const QuadricPoint& z, const RegionSpec& region,
                        const Tolerances& tol) {
  region.validate();
  Classification c;
  c.u = u_value(z.z);
  c.kappa = kappa(z.z);
  c.in_K = c.kappa <= tol.tau_K;
  c.in_M_prime = c.kappa > tol.tau_K;
  c.in_Ma = c.u < region.a;
  c.in_Mab_open = region.a < c.u && c.u < region.b;
  c.in_Mab_closed = region.a <= c.u && c.u <= region.b;
  return c;
}

TangentVector project_tangent(const QuadricPoint& z, const C3& v) {
  const Cx zv = dot_bilinear(z.z, v);
  return {z, v - zv * z.z};
}

TangentVector e_basis(const QuadricPoint& z, const Tolerances& tol) {
  if (kappa(z.z) <= tol.tau_K) {
    throw CriticalPointError("e_basis undefined on the real locus (kappa <= tau_K)");
  }
  // z x conj(z) solves both linear conditions; it vanishes exactly on K.
  C3 e = cross(z.z, conj(z.z));
  const double n = norm2(e);
  if (n <= tol.tau_K) {
    throw CriticalPointError("degenerate E fiber: |z x conj(z)| <= tau_K");
  }
  e = (1.0 / n) * e;
  // Deterministic phase: rotate so the largest-modulus component is real
  // positive; ties broken by lowest coordinate index.
  int pivot = 0;
  double best = std::abs(e[0]);
  for (int j = 1; j < 3; ++j) {
    const double m = std::abs(e[j]);
    if (m > best * (1.0 + 1e-14)) {
      best = m;
      pivot = j;
    }
  }
  const Cx phase = std::abs(e[pivot]) / e[pivot];
  e = phase * e;
  return {z, e};
}

Cx omega_eval(const QuadricPoint& z, const C3& v, const C3& w) {
  return z.z[0] * (v[1] * w[2] - v[2] * w[1]) -
         z.z[1] * (v[0] * w[2] - v[2] * w[0]) +
         z.z[2] * (v[0] * w[1] - v[1] * w[0]);
}

namespace {

// w -> z0 in W0 = {z != 0 : sum z_j^2 = 0}.
C3 cover_to_null_quadric(const CoverPoint& w) {
  const Cx w1s = w.w1 * w.w1;
  const Cx w2s = w.w2 * w.w2;
  return {Cx(0.0, 1.0) * (w1s + w2s), w1s - w2s, 2.0 * w.w1 * w.w2};
}

// W0 -> M': z = sqrt(1 + |Re z0|^-2) Re z0 + i Im z0.
C3 null_quadric_to_Mprime(const C3& z0) {
  const R3 a = real_part(z0);
  const R3 b = imag_part(z0);
  const double na = norm2(a);
  const double scale = std::sqrt(1.0 + 1.0 / (na * na));
  C3 out;
  for (int j = 0; j < 3; ++j) out[j] = Cx(scale * a[j], b[j]);
  return out;
}

// M' -> W0: with A = Re z, B = Im z on the quadric, |A|^2 = 1 + |B|^2 and
// A.B = 0; the inverse scaling is Re z0 = (|B|/|A|) A, Im z0 = B.
C3 Mprime_to_null_quadric(const C3& z, const Tolerances& tol) {
  const R3 A = real_part(z);
  const R3 B = imag_part(z);
  const double nb = norm2(B);
  if (nb <= tol.tau_K) {
    throw CriticalPointError("point on the real locus has no cover preimage");
  }
  const double na = norm2(A);
  const double s = nb / na;
  C3 z0;
  for (int j = 0; j < 3; ++j) z0[j] = Cx(s * A[j], B[j]);
  return z0;
}

}  // namespace

QuadricPoint cover_push(const CoverPoint& w, const Tolerances& tol) {
  const double n = std::sqrt(std::norm(w.w1) + std::norm(w.w2));
  if (n < tol.tau_0) throw ZeroPointError("cover point too close to 0");
  return {null_quadric_to_Mprime(cover_to_null_quadric(w))};
}

std::pair<CoverPoint, CoverPoint> cover_preimages(const QuadricPoint& z,
                                                  const Tolerances& tol) {
  const C3 z0 = Mprime_to_null_quadric(z.z, tol);
  // z0 = (i(w1^2+w2^2), w1^2-w2^2, 2 w1 w2).
  const Cx w1s = 0.5 * (Cx(0.0, -1.0) * z0[0] + z0[1]);
  const Cx w2s = 0.5 * (Cx(0.0, -1.0) * z0[0] - z0[1]);
  CoverPoint w;
  if (std::abs(w1s) >= std::abs(w2s)) {
    w.w1 = std::sqrt(w1s);
    w.w2 = (std::abs(w.w1) > 0.0) ? z0[2] / (2.0 * w.w1) : std::sqrt(w2s);
  } else {
    w.w2 = std::sqrt(w2s);
    w.w1 = z0[2] / (2.0 * w.w2);
  }
  const CoverPoint neg{-w.w1, -w.w2};
  return {w, neg};
}

CoverLift cover_lift(const std::vector<C3>& loop_samples, const Tolerances& tol) {
  if (loop_samples.size() < 2) throw PreconditionError("cover_lift needs >= 2 samples");
  CoverLift lift;
  lift.path.reserve(loop_samples.size());

  auto dist = [](const CoverPoint& a, const CoverPoint& b) {
    return std::sqrt(std::norm(a.w1 - b.w1) + std::norm(a.w2 - b.w2));
  };

  for (std::size_t i = 0; i < loop_samples.size(); ++i) {
    const C3& zs = loop_samples[i];
    if (kappa(zs) <= tol.tau_K) {
      throw PreconditionError("loop sample " + std::to_string(i) +
                              " lies on the real locus; not in M'");
    }
    auto [wp, wm] = cover_preimages(QuadricPoint{zs}, tol);
    if (i == 0) {
      lift.path.push_back(wp);
      continue;
    }
    const CoverPoint& prev = lift.path.back();
    const double dp = dist(wp, prev);
    const double dm = dist(wm, prev);
    const CoverPoint chosen = (dp <= dm) ? wp : wm;
    // Step bound: half the separation of the two preimages of the current
    // point. Beyond that the +- branch cannot be disambiguated.
    const double sep = dist(wp, wm);
    if (std::min(dp, dm) >= 0.5 * sep) {
      throw TrackingLossError("step " + std::to_string(i) +
                              " exceeds half the preimage separation");
    }
    lift.path.push_back(chosen);
  }

  // Close the track: continue one more step back onto sample 0 and compare
  // the continued branch with the starting one.
  const CoverPoint& first = lift.path.front();
  const CoverPoint neg_first{-first.w1, -first.w2};
  const CoverPoint& last = lift.path.back();
  const double dp = dist(first, last);
  const double dm = dist(neg_first, last);
  const double sep = dist(first, neg_first);
  if (std::min(dp, dm) >= 0.5 * sep) {
    throw TrackingLossError("closing step exceeds half the preimage separation");
  }
  lift.closed = dp <= dm;
  return lift;
}

}  // namespace quadloop
