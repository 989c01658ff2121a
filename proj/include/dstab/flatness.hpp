#ifndef DSTAB_FLATNESS_HPP
#define DSTAB_FLATNESS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dstab/parallel.hpp"
#include "dstab/problem.hpp"
#include "dstab/rng.hpp"
#include "dstab/vec.hpp"

namespace dstab {

using ScalarFn = std::function<double(const Vec&)>;

// Oscillation of f over balls of growing radius around a center. Values are
// sup estimates from below (grid + random draws + local ascent); samples nest
// across radii so monotonicity in r is exact by construction.
struct FlatnessProfile {
  Vec center;
  std::vector<double> radii;
  std::vector<double> values;
  std::uint64_t seed = 0;
  int grid = 0;
  int draws = 0;
};

namespace detail {

// Hill-climb on |f - f0| from the best sample, stepping along coordinates
// with step r/100, constrained to the ball.
inline Vec ascent_refine(const ScalarFn& f, double f0, const Vec& center, double r, Vec y) {
  const double step = r / 100.0;
  double best = std::abs(f(y) - f0);
  for (int it = 0; it < 20; ++it) {
    Vec cand = y;
    double cand_val = best;
    for (std::size_t i = 0; i < y.size(); ++i) {
      for (double s : {step, -step}) {
        Vec z = y;
        z[i] += s;
        if (dist(z, center) > r) continue;
        const double val = std::abs(f(z) - f0);
        if (val > cand_val) {
          cand_val = val;
          cand = z;
        }
      }
    }
    if (cand_val <= best) break;
    best = cand_val;
    y = std::move(cand);
  }
  return y;
}

}  // namespace detail

inline FlatnessProfile flatness_profile(const ScalarFn& f, const Vec& x,
                                        const std::vector<double>& radii, int G, int R,
                                        std::uint64_t seed = 42) {
  const std::size_t n = x.size();
  if (radii.empty()) throw std::invalid_argument("flatness_profile: radii must be nonempty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw std::invalid_argument("flatness_profile: radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw std::invalid_argument("flatness_profile: radii must be ascending");
  }
  if (n > 6) throw std::invalid_argument("flatness_profile: dimension capped at 6");
  const bool use_grid = n <= 3 && G > 1;

  FlatnessProfile prof;
  prof.center = x;
  prof.radii = radii;
  prof.seed = seed;
  prof.grid = use_grid ? G : 0;
  prof.draws = R;
  const double f0 = f(x);

  // unit offsets shared across radii; scaled per radius, with all smaller
  // radii's points reused so the sample sets nest
  std::vector<Vec> unit_offsets;
  if (use_grid) {
    std::vector<int> idx(n, 0);
    for (;;) {
      Vec d(n);
      for (std::size_t i = 0; i < n; ++i)
        d[i] = -1.0 + 2.0 * static_cast<double>(idx[i]) / (G - 1);
      if (norm(d) <= 1.0) unit_offsets.push_back(d);
      std::size_t c = 0;
      while (c < n && ++idx[c] == G) idx[c++] = 0;
      if (c == n) break;
    }
  }
  {
    Rng rng(seed);
    for (int j = 0; j < R; ++j) unit_offsets.push_back(rng.in_ball(Vec(n, 0.0), 1.0));
  }

  double running = 0.0;
  std::vector<Vec> carried;  // refined maximizers from previous radii
  for (double r : radii) {
    Vec best = x;
    double best_val = running;
    for (const auto& d : unit_offsets) {
      const Vec y = axpy(x, r, d);
      const double val = std::abs(f(y) - f0);
      if (val > best_val) {
        best_val = val;
        best = y;
      }
    }
    for (const auto& y : carried) {
      const double val = std::abs(f(y) - f0);
      if (val > best_val) {
        best_val = val;
        best = y;
      }
    }
    const Vec refined = detail::ascent_refine(f, f0, x, r, best);
    best_val = std::max(best_val, std::abs(f(refined) - f0));
    carried.push_back(refined);
    running = std::max(running, best_val);
    prof.values.push_back(running);
  }
  return prof;
}

enum class FlatnessOrder { x_flatter, y_flatter, equivalent, incomparable };

inline const char* to_string(FlatnessOrder o) {
  switch (o) {
    case FlatnessOrder::x_flatter: return "x_flatter";
    case FlatnessOrder::y_flatter: return "y_flatter";
    case FlatnessOrder::equivalent: return "equivalent";
    case FlatnessOrder::incomparable: return "incomparable";
  }
  return "?";
}

// Compares oscillation profiles on the smallest decade of the shared radius
// grid, with relative tolerance 1e-3. Crossings yield incomparable.
inline FlatnessOrder compare_flatness(const ScalarFn& f, const Vec& x, const Vec& y,
                                      const std::vector<double>& radii, int G = 16, int R = 128,
                                      std::uint64_t seed = 42) {
  constexpr double kTolRel = 1e-3;
  std::vector<double> small;
  const double decade_cap = radii.front() * 10.0;
  for (double r : radii)
    if (r < decade_cap) small.push_back(r);
  if (small.empty()) small.push_back(radii.front());

  const FlatnessProfile px = flatness_profile(f, x, small, G, R, seed);
  const FlatnessProfile py = flatness_profile(f, y, small, G, R, mix_seed(seed, 1));
  bool x_le = true, y_le = true;
  for (std::size_t i = 0; i < small.size(); ++i) {
    if (px.values[i] > py.values[i] * (1.0 + kTolRel)) x_le = false;
    if (py.values[i] > px.values[i] * (1.0 + kTolRel)) y_le = false;
  }
  if (x_le && y_le) return FlatnessOrder::equivalent;
  if (x_le) return FlatnessOrder::x_flatter;
  if (y_le) return FlatnessOrder::y_flatter;
  return FlatnessOrder::incomparable;
}

struct FlatRanking {
  struct Entry {
    Vec center;
    double profile_at_rmin = 0.0;
    std::vector<double> values;
    bool flat_candidate = false;
  };
  std::vector<Entry> entries;  // sorted, flattest first
  std::vector<double> radii;
};

// Samples minima, profiles each, and ranks by oscillation at the smallest
// radius (ties broken by the next radii). The minimal layer within relative
// tolerance marks the flat candidates.
inline FlatRanking screen_flat_minima(const ProblemSpec& problem, std::int64_t M_samples,
                                      const std::vector<double>& radii, int G = 16, int R = 128,
                                      std::uint64_t seed = 42) {
  constexpr double kTolRel = 1e-3;
  if (M_samples < 1) throw std::invalid_argument("screen_flat_minima: M_samples must be >= 1");
  FlatRanking rank;
  rank.radii = radii;
  std::vector<Vec> centers(static_cast<std::size_t>(M_samples));
  {
    Rng rng(seed);
    for (auto& c : centers) c = problem.minima.sample(rng);
  }
  rank.entries.resize(centers.size());
  auto f = problem.f;
  parallel_for(centers.size(), [&](std::size_t i) {
    FlatnessProfile p = flatness_profile(f, centers[i], radii, G, R, mix_seed(seed, i));
    rank.entries[i] = {centers[i], p.values.front(), p.values, false};
  });
  std::stable_sort(rank.entries.begin(), rank.entries.end(), [](const auto& a, const auto& b) {
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      if (a.values[i] < b.values[i] * (1.0 - 1e-12)) return true;
      if (b.values[i] < a.values[i] * (1.0 - 1e-12)) return false;
    }
    return false;
  });
  const double floor_val = rank.entries.front().profile_at_rmin;
  for (auto& e : rank.entries)
    e.flat_candidate = e.profile_at_rmin <= floor_val * (1.0 + kTolRel);
  return rank;
}

}  // namespace dstab

#endif  // DSTAB_FLATNESS_HPP
