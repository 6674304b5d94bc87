#pragma once

#include <cstdint>

namespace quadloop {

// Central home of every tolerance and default grid size. All values are
// user-visible through the CLI config schema.
struct Tolerances {
  double tau_M = 1e-10;       // quadric membership
  double tau_K = 1e-9;        // real-locus (K) membership threshold on kappa
  double tau_0 = 1e-8;        // zero exclusion on the double cover
  double tau_cut = 1e-6;      // branch-cut margin for the retraction
  double tau_spec = 1e-9;     // spectral truncation/holomorphy budget
  double tau_overlap = 1e-6;  // chain overlap consistency
  double tau_cont = 0.5;      // loop-curve continuity bound (sup distance)
  double tau_lift = 1e-8;     // lift center reproduction
};

struct GridDefaults {
  int m_deg = 64;      // disc Taylor truncation
  int n_grid = 256;    // disc boundary grid (power of two, >= 4*m_deg)
  int n_loop = 32;     // loop Fourier truncation
  int t_grid = 64;     // curve parameter grid
  int sobolev_k = 1;
};

struct RunSeed {
  std::uint64_t seed = 12345;
};

// splitmix64: counter-based deterministic stream derivation.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace quadloop
