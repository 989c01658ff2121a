#ifndef DSTAB_EULER_HPP
#define DSTAB_EULER_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dstab/field.hpp"
#include "dstab/problem.hpp"
#include "dstab/schedule.hpp"
#include "dstab/trajectory.hpp"

namespace dstab {

// Resolves the inclusion's free choice of direction at each step. Selection
// always returns an element of the provided sample.
struct Selector {
  enum class Kind { first, index, random, adversarial };

  Kind kind = Kind::first;
  int index = 0;
  std::function<double(const Vec&)> objective;  // adversarial: maximize objective(x + a u)

  static Selector First() { return {}; }
  static Selector Index(int i) { return {Kind::index, i, nullptr}; }
  static Selector Random() { return {Kind::random, 0, nullptr}; }
  static Selector Adversarial(std::function<double(const Vec&)> obj) {
    return {Kind::adversarial, 0, std::move(obj)};
  }

  std::size_t pick(const FieldSample& s, const Vec& x, double alpha, Rng& rng) const {
    const std::size_t n = s.directions.size();
    switch (kind) {
      case Kind::first:
        return 0;
      case Kind::index:
        return std::min<std::size_t>(static_cast<std::size_t>(std::max(index, 0)), n - 1);
      case Kind::random:
        return rng.index(n);
      case Kind::adversarial: {
        std::size_t best = 0;
        double best_val = -kInf;
        for (std::size_t i = 0; i < n; ++i) {
          const double v = objective(axpy(x, alpha, s.directions[i]));
          if (v > best_val) {
            best_val = v;
            best = i;
          }
        }
        return best;
      }
    }
    return 0;
  }
};

using AlphaFn = std::function<double(std::int64_t)>;
using ScalarFn = std::function<double(const Vec&)>;

inline AlphaFn alpha_of(const StepSchedule& s) {
  return [s](std::int64_t k) { return s.alpha(k); };
}

// Uniform draws in (0, cap], a deterministic function of k given the seed.
inline AlphaFn random_alpha(double cap, std::uint64_t seed) {
  return [cap, seed](std::int64_t k) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(k) ^ 0x5eedULL));
    return cap * rng.uniform_pos();
  };
}

// Stepping core. Evaluation order per step: state -> F(x_k) -> select ->
// x_{k+1} = x_k + alpha_k u_k. The visitor sees every state
// (k, t_k, x_k, f, g) and every step (k, alpha_k, u_k, index). Field
// overflow or NaN objective truncates with an error mark.
template <class StateVisitor, class StepVisitor>
std::optional<SimError> euler_run(const Field& field, const AlphaFn& alpha, const Vec& x0,
                                  std::int64_t K, const Selector& sel, std::uint64_t seed,
                                  const ScalarFn& f, const ScalarFn& g, StateVisitor&& on_state,
                                  StepVisitor&& on_step) {
  if (K < 1) throw std::invalid_argument("euler_run: K must be >= 1");
  check_dim(x0, field.dim, "euler_run x0");
  Vec x = x0;
  KahanSum time;
  for (std::int64_t k = 0;; ++k) {
    const double fx = f ? f(x) : 0.0;
    const double gx = g ? g(x) : kInf;
    if (std::isnan(fx)) return SimError{k, "objective returned NaN"};
    on_state(k, time.value(), x, fx, gx);
    if (k == K) return std::nullopt;
    const double a = alpha(k);
    FieldSample s;
    try {
      s = field(x, mix_seed(seed, static_cast<std::uint64_t>(k)));
    } catch (const FieldEvalError& e) {
      return SimError{k, e.what()};
    }
    Rng rng(mix_seed(seed ^ 0xd1cEULL, static_cast<std::uint64_t>(k)));
    const std::size_t idx = sel.pick(s, x, a, rng);
    const Vec& u = s.directions[idx];
    on_step(k, a, u, static_cast<int>(idx));
    x = axpy(x, a, u);
    if (!is_finite(x)) return SimError{k + 1, "iterate overflow"};
    time.add(a);
  }
}

// Full-record simulation. With store_every > 1 only every m-th state (plus
// the first, the last, and the extremal-g states) is kept and the
// per-step direction record is dropped.
inline Trajectory simulate(const ProblemSpec& problem, const Field& field,
                           const StepSchedule& schedule, const Vec& x0, std::int64_t K,
                           const Selector& sel = Selector::First(), std::uint64_t seed = 42,
                           std::int64_t store_every = 1) {
  Trajectory traj;
  const bool full = store_every <= 1;
  ScalarFn g = problem.g_list.empty() ? ScalarFn{}
                                      : ScalarFn{[&problem](const Vec& x) { return problem.eval_g(x); }};

  struct Extreme {
    std::int64_t k = -1;
    double t = 0, f = 0, g = 0;
    Vec x;
  };
  Extreme gmax, gmin;
  double best_hi = -kInf, best_lo = kInf;

  auto store_state = [&](std::int64_t k, double t, const Vec& x, double fx, double gx) {
    traj.ks.push_back(k);
    traj.times.push_back(t);
    traj.points.push_back(x);
    traj.f_values.push_back(fx);
    traj.g_values.push_back(gx);
    traj.alphas.push_back(schedule.alpha(k));
  };

  auto err = euler_run(
      field, alpha_of(schedule), x0, K, sel, seed, problem.f, g,
      [&](std::int64_t k, double t, const Vec& x, double fx, double gx) {
        if (full || k % store_every == 0 || k == K) {
          store_state(k, t, x, fx, gx);
        } else if (std::isfinite(gx)) {
          if (gx > best_hi) {
            best_hi = gx;
            gmax = {k, t, fx, gx, x};
          }
          if (gx < best_lo) {
            best_lo = gx;
            gmin = {k, t, fx, gx, x};
          }
        }
      },
      [&](std::int64_t k, double a, const Vec& u, int idx) {
        (void)k;
        (void)a;
        if (full) {
          traj.directions.push_back(u);
          traj.chosen_index.push_back(idx);
        }
      });

  if (!full) {
    for (const auto& e : {gmin, gmax}) {
      if (e.k < 0) continue;
      auto it = std::lower_bound(traj.ks.begin(), traj.ks.end(), e.k);
      if (it != traj.ks.end() && *it == e.k) continue;
      const std::size_t pos = static_cast<std::size_t>(it - traj.ks.begin());
      traj.ks.insert(traj.ks.begin() + pos, e.k);
      traj.times.insert(traj.times.begin() + pos, e.t);
      traj.points.insert(traj.points.begin() + pos, e.x);
      traj.f_values.insert(traj.f_values.begin() + pos, e.f);
      traj.g_values.insert(traj.g_values.begin() + pos, e.g);
      traj.alphas.insert(traj.alphas.begin() + pos, schedule.alpha(e.k));
    }
  }
  traj.error = err;
  if (full && !traj.alphas.empty()) traj.alphas.pop_back();  // alphas are per step
  return traj;
}

struct TrackingResult {
  std::vector<std::pair<double, double>> gaps;  // (cap, gap)
  bool monotone_within_slack = true;
};

// Two-timescale gap experiment: a fine constant-step run stands in for the
// continuous trajectory; each cap's constant-step run is compared against it
// at matching times (reference interpolated linearly).
inline TrackingResult tracking_gap(const ProblemSpec& problem, const Field& field, const Vec& x0,
                                   const std::vector<double>& caps, double T,
                                   const Selector& sel = Selector::First(),
                                   std::uint64_t seed = 42) {
  if (caps.empty()) throw std::invalid_argument("tracking_gap: caps must be nonempty");
  for (std::size_t i = 0; i + 1 < caps.size(); ++i)
    if (!(caps[i] > caps[i + 1]))
      throw std::invalid_argument("tracking_gap: caps must be strictly decreasing");
  if (!(T > 0.0)) throw std::invalid_argument("tracking_gap: T must be > 0");

  const double a_ref = caps.back() / 100.0;
  const std::int64_t K_ref = static_cast<std::int64_t>(std::ceil(T / a_ref)) + 1;
  std::vector<Vec> ref;
  ref.reserve(static_cast<std::size_t>(K_ref) + 1);
  auto err = euler_run(
      field, [a_ref](std::int64_t) { return a_ref; }, x0, K_ref, sel, seed, problem.f, nullptr,
      [&](std::int64_t, double, const Vec& x, double, double) {
        if (!problem.bounded_box.contains(x))
          throw std::runtime_error("tracking_gap: reference trajectory left the bounded box");
        ref.push_back(x);
      },
      [](std::int64_t, double, const Vec&, int) {});
  if (err) throw std::runtime_error("tracking_gap: reference run failed: " + err->what);

  auto ref_at = [&](double t) {
    const double s = t / a_ref;
    const auto j = static_cast<std::size_t>(std::min<double>(s, static_cast<double>(ref.size() - 2)));
    const double w = s - static_cast<double>(j);
    Vec out(ref[j].size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = ref[j][i] + w * (ref[j + 1][i] - ref[j][i]);
    return out;
  };

  TrackingResult res;
  for (double cap : caps) {
    const std::int64_t K = static_cast<std::int64_t>(std::ceil(T / cap)) + 1;
    double gap = 0.0;
    auto e2 = euler_run(
        field, [cap](std::int64_t) { return cap; }, x0, K, sel, seed, problem.f, nullptr,
        [&](std::int64_t, double t, const Vec& x, double, double) {
          if (t <= T) gap = std::max(gap, dist(x, ref_at(t)));
        },
        [](std::int64_t, double, const Vec&, int) {});
    if (e2) throw std::runtime_error("tracking_gap: run failed: " + e2->what);
    res.gaps.emplace_back(cap, gap);
  }
  for (std::size_t i = 0; i + 1 < res.gaps.size(); ++i)
    if (res.gaps[i + 1].second > 1.1 * res.gaps[i].second) res.monotone_within_slack = false;
  return res;
}

}  // namespace dstab

#endif  // DSTAB_EULER_HPP
