#pragma once

#include <algorithm>
#include <vector>

#include "ipiag/random.hpp"
#include "ipiag/rates.hpp"

namespace ipiag::testing {

struct Sequences {
  std::vector<double> V;
  std::vector<double> omega;
};

// Saturates the lemma2 recurrence with equality for k >= 1: each w_k is
// drawn below the level that would make the right-hand side negative, and
// V_{k+1} is set to the right-hand side.
inline Sequences saturate_lemma2(const Lemma2Params& p, int K, SplitMix64& rng, double cap = 1.0) {
  Sequences s;
  s.V = {10.0 * rng.uniform(), 10.0 * rng.uniform()};
  s.omega = {cap * rng.uniform()};
  for (int k = 1; k < K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    double window = 0.0;
    for (int j = std::max(0, k - p.k0); j < k; ++j) window += s.omega[static_cast<std::size_t>(j)];
    const double base = p.A * s.V[ku] + p.B * s.V[ku - 1] + p.b2 * s.omega[ku - 1] + p.c * window;
    const double slope = p.c - p.b1;
    const double limit = slope < 0.0 ? std::min(cap, base / -slope) : cap;
    const double w = rng.uniform() * limit;
    s.omega.push_back(w);
    s.V.push_back(std::max(0.0, base + slope * w));
  }
  return s;
}

// Same for the lemma1 recurrence, saturated for k >= 0.
inline Sequences saturate_lemma1(double a, double b, double c, int k0, int K, SplitMix64& rng,
                                 double cap = 1.0) {
  Sequences s;
  s.V = {10.0 * rng.uniform()};
  for (int k = 0; k < K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    double window = 0.0;
    for (int j = std::max(0, k - k0); j < k; ++j) window += s.omega[static_cast<std::size_t>(j)];
    const double base = a * s.V[ku] + c * window;
    const double slope = c - b;
    const double limit = slope < 0.0 ? std::min(cap, base / -slope) : cap;
    const double w = rng.uniform() * limit;
    s.omega.push_back(w);
    s.V.push_back(std::max(0.0, base + slope * w));
  }
  return s;
}

// Random (A, B, b1, b2, c, k0) with A + B < 1 and the lemma2 condition met.
inline Lemma2Params random_feasible_lemma2(SplitMix64& rng, bool force_b_zero = false) {
  double A = 0.0, B = 0.0;
  do {
    A = 0.98 * rng.uniform();
    B = force_b_zero ? 0.0 : (0.99 - A) * rng.uniform();
  } while (A + B <= 1e-3);
  const int k0 = static_cast<int>(rng.below(7));
  const double b1 = 0.5 + 4.5 * rng.uniform();
  const LemmaSplit split = lemma2_split(A, B);
  const double b2 = force_b_zero ? 0.0 : 0.9 * b1 * split.a * rng.uniform();
  const double room = b1 - b2 / split.a;
  const double c = rng.uniform() * room / inverse_geometric_sum(split.a, k0);
  return Lemma2Params::make(A, B, b1, b2, c, k0);
}

}  // namespace ipiag::testing
