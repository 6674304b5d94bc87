#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "quadloop/config.hpp"
#include "quadloop/continuation.hpp"
#include "quadloop/loop.hpp"
#include "quadloop/quadric.hpp"
#include "quadloop/types.hpp"

namespace quadloop {

// Deterministic seeded generators for test and verification inputs. Loops,
// discs and curves are produced upstairs in C^2 \ {0} and pushed through the
// double cover, so they lie on M exactly (up to spectral truncation) and off
// the real locus automatically.

inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix_seed(seed, stream));
}

inline Cx random_unit_cx(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  return std::polar(1.0, ang(rng));
}

// Point of the retraction domain: a real sphere point plus a bounded complex
// displacement, far from the branch cut of the principal square root.
inline C3 random_ambient_point(std::mt19937_64& rng, double spread = 0.35) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  R3 p{gauss(rng), gauss(rng), gauss(rng)};
  const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  std::uniform_real_distribution<double> amp(-spread, spread);
  C3 z;
  for (int j = 0; j < 3; ++j) {
    z[j] = Cx(p[j] / std::max(n, 1e-9) + amp(rng), amp(rng));
  }
  return z;
}

// Smooth loop upstairs: unit base plus a short trigonometric tail with
// cubically decaying amplitudes, bounded away from zero.
inline std::vector<CoverPoint> random_cover_loop_samples(std::mt19937_64& rng, int n_samples,
                                                         double amplitude = 0.2,
                                                         int max_freq = 4) {
  std::array<std::vector<Cx>, 2> modes;
  std::array<Cx, 2> base{random_unit_cx(rng), 0.7 * random_unit_cx(rng)};
  std::uniform_real_distribution<double> mag(0.2, 1.0);
  for (auto& m : modes) m.resize(static_cast<std::size_t>(2 * max_freq) + 1);
  for (int c = 0; c < 2; ++c) {
    for (int k = -max_freq; k <= max_freq; ++k) {
      if (k == 0) continue;
      const double decay = amplitude * mag(rng) / (std::abs(k) * std::abs(k) * std::abs(k));
      modes[static_cast<std::size_t>(c)][static_cast<std::size_t>(k + max_freq)] =
          decay * random_unit_cx(rng);
    }
  }
  std::vector<CoverPoint> out(static_cast<std::size_t>(n_samples));
  for (int j = 0; j < n_samples; ++j) {
    const double s = kTwoPi * j / n_samples;
    std::array<Cx, 2> w = base;
    for (int c = 0; c < 2; ++c) {
      for (int k = -max_freq; k <= max_freq; ++k) {
        if (k == 0) continue;
        w[static_cast<std::size_t>(c)] +=
            modes[static_cast<std::size_t>(c)][static_cast<std::size_t>(k + max_freq)] *
            std::exp(Cx(0.0, k * s));
      }
    }
    out[static_cast<std::size_t>(j)] = CoverPoint{w[0], w[1]};
  }
  return out;
}

inline QuadricPoint random_m_point(std::mt19937_64& rng, const Tolerances& tol = {}) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CoverPoint w{Cx(gauss(rng), gauss(rng)), Cx(gauss(rng), gauss(rng))};
  const double n = std::sqrt(std::norm(w.w1) + std::norm(w.w2));
  w.w1 /= n;
  w.w2 /= n;
  return cover_push(w, tol);
}

// Loop in M'-loops, null-homotopic by construction (it lifts).
inline Loop random_mprime_loop(std::mt19937_64& rng, int n_loop, int sobolev_k,
                               double amplitude = 0.2, const Tolerances& tol = {}) {
  int n = 4;
  while (n < 4 * n_loop) n *= 2;
  const auto ws = random_cover_loop_samples(rng, n, amplitude);
  std::vector<C3> samples(ws.size());
  for (std::size_t j = 0; j < ws.size(); ++j) samples[j] = cover_push(ws[j], tol).z;
  return Loop::from_samples(samples, n_loop, sobolev_k);
}

// Tangent section along a loop: a random constant field projected to T M.
inline std::vector<C3> random_tangent_section(std::mt19937_64& rng, const Loop& x) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  C3 dir{Cx(gauss(rng), gauss(rng)), Cx(gauss(rng), gauss(rng)), Cx(gauss(rng), gauss(rng))};
  const auto xs = x.grid_samples();
  std::vector<C3> out(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    out[j] = project_tangent(QuadricPoint{xs[j]}, dir).v;
  }
  return out;
}

// Holomorphic sigma-family of M'-loops: rho(x + sigma q1 + sigma^2 q2) with
// rho the holomorphic retraction, perturbations small against kappa(x).
inline LoopDisc random_mprime_loop_disc(std::mt19937_64& rng, int m_deg, int n_loop,
                                        int sobolev_k, double amplitude = 0.08,
                                        const Tolerances& tol = {}) {
  const int n_sigma = 64;
  int n = 4;
  while (n < 4 * n_loop) n *= 2;
  const auto center = random_cover_loop_samples(rng, n, 0.2);
  std::vector<C3> center_z(static_cast<std::size_t>(n));
  double sup_center = 1.0;
  for (int j = 0; j < n; ++j) {
    center_z[static_cast<std::size_t>(j)] = cover_push(center[static_cast<std::size_t>(j)], tol).z;
    sup_center = std::max(sup_center, norm2(center_z[static_cast<std::size_t>(j)]));
  }
  // keep g(x + sigma q) away from the branch cut: |2 <x, q>| stays small
  const double petal_scale = amplitude / sup_center;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::array<std::vector<C3>, 2> petals;
  for (auto& petal : petals) {
    petal.resize(static_cast<std::size_t>(n));
    std::array<C3, 3> modes;
    for (auto& m : modes) {
      for (int c = 0; c < 3; ++c) m[c] = petal_scale * Cx(gauss(rng), gauss(rng)) / 3.0;
    }
    for (int j = 0; j < n; ++j) {
      const double s = kTwoPi * j / n;
      C3 v{};
      for (int k = 0; k < 3; ++k) {
        for (int c = 0; c < 3; ++c) {
          v[c] += modes[static_cast<std::size_t>(k)][c] * std::exp(Cx(0.0, (k - 1) * s));
        }
      }
      petal[static_cast<std::size_t>(j)] = v;
    }
  }
  std::vector<Loop> circle;
  circle.reserve(static_cast<std::size_t>(n_sigma));
  for (int q = 0; q < n_sigma; ++q) {
    const Cx sigma = std::exp(Cx(0.0, kTwoPi * q / n_sigma));
    std::vector<C3> samples(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const std::size_t ju = static_cast<std::size_t>(j);
      C3 w = center_z[ju];
      for (int c = 0; c < 3; ++c) {
        w[c] += sigma * petals[0][ju][c] + sigma * sigma * petals[1][ju][c];
      }
      samples[ju] = retract_point(w, tol);
    }
    circle.push_back(Loop::from_samples(samples, n_loop, sobolev_k));
  }
  return loop_disc_from_samples(circle, m_deg);
}

// Closed curve of M'-loops: cover coefficients oscillate periodically in t,
// so every loop stays off K and the curve closes exactly.
inline LoopCurve random_mprime_closed_curve(std::mt19937_64& rng, int t_grid, int n_loop,
                                            int sobolev_k, double amplitude = 0.15,
                                            const Tolerances& tol = {}) {
  int n = 4;
  while (n < 4 * n_loop) n *= 2;
  const auto base = random_cover_loop_samples(rng, n, amplitude);
  const auto sway = random_cover_loop_samples(rng, n, amplitude);
  std::vector<double> times(static_cast<std::size_t>(t_grid));
  std::vector<Loop> loops;
  loops.reserve(static_cast<std::size_t>(t_grid));
  for (int i = 0; i < t_grid; ++i) {
    const double t = static_cast<double>(i) / (t_grid - 1);
    times[static_cast<std::size_t>(i)] = t;
    const double mix = 0.35 * std::sin(kTwoPi * t);
    const double lift = 0.25 * (1.0 - std::cos(kTwoPi * t));
    std::vector<C3> samples(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const std::size_t ju = static_cast<std::size_t>(j);
      CoverPoint w = base[ju];
      w.w1 += mix * (sway[ju].w1 - sway[0].w1) + Cx(0.0, lift) * 0.2;
      w.w2 += mix * (sway[ju].w2 - sway[0].w2);
      samples[ju] = cover_push(w, tol).z;
    }
    loops.push_back(Loop::from_samples(samples, n_loop, sobolev_k));
  }
  return LoopCurve(std::move(times), std::move(loops), tol);
}

}  // namespace quadloop
