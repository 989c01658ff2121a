#ifndef DSTAB_STABILITY_HPP
#define DSTAB_STABILITY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dstab/euler.hpp"
#include "dstab/lyapunov.hpp"
#include "dstab/parallel.hpp"
#include "dstab/problem.hpp"
#include "dstab/report.hpp"
#include "dstab/sets.hpp"

namespace dstab {

// Grid of stability-probe budgets. The universally quantified definitions
// cannot be certified numerically; the probes search the stated grid for
// counterexamples and report the verdict over it.
struct StabilityProbeConfig {
  double epsilon = 0.1;
  std::vector<double> delta_grid{0.01};       // start radii, each <= epsilon
  std::vector<double> alpha_grid{0.01};       // step caps
  double power_p = 2.0;                       // p of the power schedules in the family
  std::int64_t n_init = 4;                    // starts per delta level
  std::int64_t K = 10000;                     // horizon
  std::uint64_t seed = 42;

  void validate() const {
    if (delta_grid.empty() || alpha_grid.empty())
      throw std::invalid_argument("probe config: empty grids");
    for (double d : delta_grid)
      if (!(d <= epsilon)) throw std::invalid_argument("probe config: every delta must be <= epsilon");
  }
};

namespace detail {

struct Trial {
  Vec x0;
  double delta_level;
  double cap;
  AlphaFn alpha;
  Selector selector;
  std::uint64_t seed;
  std::string label;
};

inline Trajectory capture_trajectory(const Field& field, const AlphaFn& alpha, const Vec& x0,
                                     std::int64_t K, const Selector& sel, std::uint64_t seed,
                                     const ScalarFn& f) {
  Trajectory traj;
  auto err = euler_run(
      field, alpha, x0, K, sel, seed, f, nullptr,
      [&](std::int64_t k, double t, const Vec& x, double fx, double) {
        traj.ks.push_back(k);
        traj.times.push_back(t);
        traj.points.push_back(x);
        traj.f_values.push_back(fx);
        traj.g_values.push_back(kInf);
      },
      [&](std::int64_t, double a, const Vec& u, int idx) {
        traj.alphas.push_back(a);
        traj.directions.push_back(u);
        traj.chosen_index.push_back(idx);
      });
  traj.error = err;
  return traj;
}

// Shared engine for point and set stability: the target enters only through
// its distance function and start sampler. Trials nest across (delta, cap)
// pairs, so shrinking the pair can only shrink the trial set.
inline ProbeReport probe_stability_impl(const ProblemSpec& problem, const Field& field,
                                        const std::function<double(const Vec&)>& target_dist,
                                        const std::function<Vec(Rng&, double)>& start_sampler,
                                        const StabilityProbeConfig& cfg) {
  cfg.validate();
  ProbeReport rep;
  rep.stats.seed = cfg.seed;
  rep.stats.params = {{"epsilon", cfg.epsilon}, {"K", static_cast<double>(cfg.K)}};

  Selector adversarial = Selector::Adversarial(target_dist);
  std::vector<Trial> trials;
  {
    Rng rng(cfg.seed);
    for (double delta : cfg.delta_grid) {
      for (std::int64_t i = 0; i < cfg.n_init; ++i) {
        const Vec x0 = start_sampler(rng, delta);
        for (double cap : cfg.alpha_grid) {
          const std::uint64_t base = mix_seed(cfg.seed, trials.size());
          StepSchedule cst = make_constant_schedule(cap);
          StepSchedule pw = make_power_schedule(cap, cfg.power_p, cap);
          const std::vector<std::pair<AlphaFn, std::string>> schedules = {
              {alpha_of(cst), "const"},
              {alpha_of(pw), "power"},
              {random_alpha(cap, base), "random"},
          };
          int si = 0;
          for (const auto& [alpha, label] : schedules) {
            trials.push_back({x0, delta, cap, alpha, Selector::Random(),
                              mix_seed(base, static_cast<std::uint64_t>(si) * 2), label + "/random"});
            trials.push_back({x0, delta, cap, alpha, adversarial,
                              mix_seed(base, static_cast<std::uint64_t>(si) * 2 + 1),
                              label + "/adversarial"});
            ++si;
          }
        }
      }
    }
  }

  std::vector<double> excursion(trials.size(), 0.0);
  parallel_for(trials.size(), [&](std::size_t t) {
    double sup = 0.0;
    auto err = euler_run(
        field, trials[t].alpha, trials[t].x0, cfg.K, trials[t].selector, trials[t].seed, nullptr,
        nullptr,
        [&](std::int64_t, double, const Vec& x, double, double) {
          sup = std::max(sup, target_dist(x));
        },
        [](std::int64_t, double, const Vec&, int) {});
    excursion[t] = err ? kInf : sup;
  });
  rep.stats.trials = static_cast<std::int64_t>(trials.size());

  // Scan pairs from largest to smallest; a pair passes when every nested
  // trial stays within epsilon.
  std::vector<double> deltas = cfg.delta_grid, caps = cfg.alpha_grid;
  std::sort(deltas.rbegin(), deltas.rend());
  std::sort(caps.rbegin(), caps.rend());
  double best_pair_margin = kInf;
  bool found = false;
  for (double delta : deltas) {
    for (double cap : caps) {
      double worst = 0.0;
      for (std::size_t t = 0; t < trials.size(); ++t)
        if (trials[t].delta_level <= delta && trials[t].cap <= cap)
          worst = std::max(worst, excursion[t]);
      best_pair_margin = std::min(best_pair_margin, worst - cfg.epsilon);
      if (worst <= cfg.epsilon && !found) {
        found = true;
        rep.stats.params["delta"] = delta;
        rep.stats.params["alpha_bar"] = cap;
      }
    }
  }
  rep.worst_margin = best_pair_margin;
  if (!found) {
    // witness: the worst trial among the smallest pair
    const double dmin = deltas.back(), cmin = caps.back();
    std::size_t worst_t = trials.size();
    double worst = -kInf;
    for (std::size_t t = 0; t < trials.size(); ++t)
      if (trials[t].delta_level <= dmin && trials[t].cap <= cmin && excursion[t] > worst) {
        worst = excursion[t];
        worst_t = t;
      }
    if (worst_t == trials.size()) worst_t = 0;
    rep.flag_counterexample(capture_trajectory(field, trials[worst_t].alpha, trials[worst_t].x0,
                                               cfg.K, trials[worst_t].selector, trials[worst_t].seed,
                                               problem.f));
    rep.notes.push_back("escape via " + trials[worst_t].label + " schedule");
  }
  return rep;
}

}  // namespace detail

inline ProbeReport probe_point_stability(const ProblemSpec& problem, const Field& field,
                                         const Vec& xbar, const StabilityProbeConfig& cfg) {
  if (!is_finite(xbar)) throw std::invalid_argument("probe_point_stability: point must be finite");
  return detail::probe_stability_impl(
      problem, field, [xbar](const Vec& x) { return dist(x, xbar); },
      [xbar](Rng& rng, double delta) { return rng.in_ball(xbar, delta); }, cfg);
}

inline ProbeReport probe_set_stability(const ProblemSpec& problem, const Field& field,
                                       const SetDescriptor& X, const StabilityProbeConfig& cfg) {
  auto sample = X.sample;
  auto d = X.dist;
  return detail::probe_stability_impl(
      problem, field, d, [sample](Rng& rng, double delta) { return rng.in_ball(sample(rng), delta); },
      cfg);
}

struct AsymptoticReport {
  ProbeReport report;
  // per start: distances at the checkpoints K/4, K/2, K
  std::vector<std::array<double, 3>> checkpoints;
};

// Convergence probe under the power schedule alpha_k = c/(k+1)^{1/p} (whose
// p-th powers sum to infinity). Requires non-increasing checkpoint distances
// and a final distance below eps_final for every start.
inline AsymptoticReport probe_asymptotic(const ProblemSpec& problem, const Field& field,
                                         const SetDescriptor& X, double p, double c,
                                         const std::vector<Vec>& starts, std::int64_t K,
                                         double eps_final, double cap = kInf,
                                         const Selector& sel = Selector::First(),
                                         std::uint64_t seed = 42) {
  if (!(p >= 1.0)) throw std::invalid_argument("probe_asymptotic: p must be >= 1");
  if (starts.empty()) throw std::invalid_argument("probe_asymptotic: needs at least one start");
  AsymptoticReport out;
  ProbeReport& rep = out.report;
  rep.stats.seed = seed;
  rep.stats.params = {{"p", p}, {"c", c}, {"K", static_cast<double>(K)},
                      {"eps_final", eps_final}};
  const StepSchedule sched = make_power_schedule(c, p, cap);
  out.checkpoints.resize(starts.size());

  parallel_for(starts.size(), [&](std::size_t i) {
    std::array<double, 3> cp{0.0, 0.0, 0.0};
    auto err = euler_run(
        field, alpha_of(sched), starts[i], K, sel, mix_seed(seed, i), nullptr, nullptr,
        [&](std::int64_t k, double, const Vec& x, double, double) {
          if (k == K / 4) cp[0] = X.dist(x);
          if (k == K / 2) cp[1] = X.dist(x);
          if (k == K) cp[2] = X.dist(x);
        },
        [](std::int64_t, double, const Vec&, int) {});
    if (err) cp = {kInf, kInf, kInf};
    out.checkpoints[i] = cp;
  });

  const double tol = 1e-12;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const auto& cp = out.checkpoints[i];
    const double margin =
        std::max({cp[1] - cp[0] - tol, cp[2] - cp[1] - tol, cp[2] - eps_final});
    ++rep.stats.trials;
    if (margin > rep.worst_margin) rep.worst_margin = margin;
    if (margin > 0.0 && rep.passed()) {
      rep.flag_counterexample(detail::capture_trajectory(field, alpha_of(sched), starts[i],
                                                         std::min<std::int64_t>(K, 100000), sel,
                                                         mix_seed(seed, i), problem.f));
      rep.notes.push_back("start " + std::to_string(i) + " failed the checkpoint criterion");
    }
  }
  return out;
}

// First index after which every recorded distance stays within eps, or -1.
inline std::int64_t hitting_time(const std::vector<double>& distances, double eps) {
  std::int64_t last_violation = -1;
  for (std::size_t k = 0; k < distances.size(); ++k)
    if (distances[k] > eps) last_violation = static_cast<std::int64_t>(k);
  if (last_violation + 1 >= static_cast<std::int64_t>(distances.size())) return -1;
  return last_violation + 1;
}

struct AttractorReport {
  ProbeReport report;
  std::vector<std::int64_t> hitting_times;  // -1 when the start never settles
};

// Basin probe: every start drawn from the basin must eventually stay inside
// the eps-neighborhood of A. Hitting time = first step after the last
// recorded excursion.
inline AttractorReport probe_attractor(const ProblemSpec& problem, const Field& field,
                                       const SetDescriptor& A, double p,
                                       const RegionSampler& basin, double eps,
                                       std::int64_t N_init, std::int64_t K, double c = 1.0,
                                       double cap = kInf, std::uint64_t seed = 42) {
  if (N_init < 1) throw std::invalid_argument("probe_attractor: N_init must be >= 1");
  AttractorReport out;
  ProbeReport& rep = out.report;
  rep.stats.seed = seed;
  rep.stats.params = {{"p", p}, {"epsilon", eps}, {"K", static_cast<double>(K)}, {"c", c}};
  const StepSchedule sched = make_power_schedule(c, p, cap);

  std::vector<Vec> starts;
  {
    Rng rng(seed);
    for (std::int64_t i = 0; i < N_init; ++i) starts.push_back(basin(rng));
  }
  out.hitting_times.assign(starts.size(), -1);
  std::vector<double> final_dist(starts.size(), kInf);

  parallel_for(starts.size(), [&](std::size_t i) {
    std::int64_t last_violation = -1;
    double dK = kInf;
    auto err = euler_run(
        field, alpha_of(sched), starts[i], K, Selector::First(), mix_seed(seed, i), nullptr,
        nullptr,
        [&](std::int64_t k, double, const Vec& x, double, double) {
          const double d = A.dist(x);
          if (d > eps) last_violation = k;
          if (k == K) dK = d;
        },
        [](std::int64_t, double, const Vec&, int) {});
    if (err) {
      last_violation = K;
    }
    out.hitting_times[i] = last_violation >= K ? -1 : last_violation + 1;
    final_dist[i] = dK;
  });

  double hits = 0.0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    ++rep.stats.trials;
    if (out.hitting_times[i] >= 0) {
      hits += 1.0;
      rep.worst_margin = std::max(rep.worst_margin,
                                  static_cast<double>(out.hitting_times[i]) / static_cast<double>(K) - 1.0);
    } else {
      rep.worst_margin = std::max(rep.worst_margin, final_dist[i] - eps);
      if (rep.passed()) {
        rep.flag_counterexample(detail::capture_trajectory(field, alpha_of(sched), starts[i],
                                                           std::min<std::int64_t>(K, 100000),
                                                           Selector::First(), mix_seed(seed, i),
                                                           problem.f));
        rep.notes.push_back("start " + std::to_string(i) + " never settled in the eps-neighborhood");
      }
    }
  }
  rep.stats.params["hit_rate"] = hits / static_cast<double>(starts.size());
  return out;
}

struct SubregularityEstimate {
  double tau = 0.0;
  double fit_quality = kInf;  // max absolute log-log residual
  std::int64_t used = 0;
  std::int64_t excluded = 0;  // critical points off the set
};

// Log-log regression of d(x, M) against d(0, subdifferential(x)) over shells
// around xbar; the slope estimates the subregularity exponent.
inline SubregularityEstimate estimate_subregularity(const ProblemSpec& problem,
                                                    const SetDescriptor& M, const Vec& xbar,
                                                    const std::vector<double>& radii,
                                                    std::int64_t N_per_radius,
                                                    std::uint64_t seed = 42) {
  if (radii.empty()) throw std::invalid_argument("estimate_subregularity: radii must be nonempty");
  SubregularityEstimate est;
  std::vector<double> lx, ly;  // log residual norm, log distance
  Rng rng(seed);
  for (double r : radii) {
    for (std::int64_t i = 0; i < N_per_radius; ++i) {
      const Vec x = rng.on_sphere(xbar, r);
      const double dy = M.dist(x);
      const FieldSample ds = problem.field_bouligand(x, mix_seed(seed, lx.size()));
      const double dv = detail::hull_distance_to_zero(ds.directions);
      if (dv <= 1e-300) {
        if (dy > 10.0 * SetDescriptor::kTolSet) ++est.excluded;
        continue;
      }
      if (dy <= 1e-300) continue;
      lx.push_back(std::log(dv));
      ly.push_back(std::log(dy));
    }
  }
  est.used = static_cast<std::int64_t>(lx.size());
  if (est.used < 2) throw std::runtime_error("estimate_subregularity: not enough usable samples");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(ly.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  est.tau = sxy / sxx;
  const double b = my - est.tau * mx;
  est.fit_quality = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i)
    est.fit_quality = std::max(est.fit_quality, std::abs(ly[i] - est.tau * lx[i] - b));
  return est;
}

struct VerdierResult {
  ProbeReport report;
  double max_ratio = 0.0;
  double slope = 0.0;  // of log(ratio) vs log(distance); growth toward the set is negative
  std::int64_t skipped = 0;
};

// Tests whether tangential components of subgradients shrink linearly with
// the distance to M: ratio = |P_tangent(v)| / (|x - y| |v|) must stay
// bounded and must not grow as x approaches M.
inline VerdierResult check_verdier(const ProblemSpec& problem, const SetDescriptor& M,
                                   const Vec& xbar, double radius, std::int64_t N,
                                   std::uint64_t seed = 42) {
  if (!M.project || !M.tangent_basis)
    throw std::invalid_argument("check_verdier: set descriptor lacks projection/tangent support");
  constexpr double kRatioCap = 1e3;
  VerdierResult res;
  res.report.stats.seed = seed;
  std::vector<double> ld, lr;
  Rng rng(seed);
  for (std::int64_t i = 0; i < N; ++i) {
    const Vec x = rng.in_ball(xbar, radius);
    auto y = M.project(x);
    if (!y) {
      ++res.skipped;
      continue;
    }
    const double dxy = dist(x, *y);
    if (dxy < 1e-9) continue;
    auto basis = M.tangent_basis(*y);
    if (basis.empty()) {
      ++res.skipped;
      continue;
    }
    const FieldSample vs = problem.field_bouligand(x, mix_seed(seed, static_cast<std::uint64_t>(i)));
    for (const auto& v : vs.directions) {
      const double nv = norm(v);
      if (nv < 1e-300) continue;
      Vec proj(x.size(), 0.0);
      for (const auto& t : basis) proj = axpy(proj, dot(v, t), t);
      const double ratio = norm(proj) / (dxy * nv);
      res.max_ratio = std::max(res.max_ratio, ratio);
      if (ratio > 1e-300) {
        ld.push_back(std::log(dxy));
        lr.push_back(std::log(ratio));
      }
      ++res.report.stats.trials;
    }
  }
  if (ld.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < ld.size(); ++i) {
      mx += ld[i];
      my += lr[i];
    }
    mx /= static_cast<double>(ld.size());
    my /= static_cast<double>(ld.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ld.size(); ++i) {
      sxx += (ld[i] - mx) * (ld[i] - mx);
      sxy += (ld[i] - mx) * (lr[i] - my);
    }
    res.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  res.report.worst_margin = res.max_ratio - kRatioCap;
  const bool bounded = res.max_ratio <= kRatioCap && res.slope >= -0.1;
  if (!bounded)
    res.report.flag_counterexample(step_witness(xbar, xbar, 0.0, 0.0, 0.0));
  return res;
}

// Normalized descent steps cannot shed distance to the minimum set faster
// than half the step: d(x + a u, M) + d(x, M) >= a/2. worst_margin here is
// the minimum of the left-hand side minus a/2 (the inequality's slack).
inline ProbeReport check_distance_lower_bound(const ProblemSpec& problem, const SetDescriptor& M,
                                              const Vec& xbar, double alpha_bar, double rho,
                                              std::int64_t N, int A, std::uint64_t seed = 42) {
  ProbeReport rep;
  rep.stats.seed = seed;
  rep.stats.params = {{"alpha_bar", alpha_bar}, {"rho", rho}};
  rep.worst_margin = kInf;
  const Field field = problem.descent_normalized();
  const auto alphas = detail::log_spaced_alphas(alpha_bar, A);
  Rng rng(seed);
  for (std::int64_t i = 0; i < N; ++i) {
    const Vec x = rng.in_ball(xbar, rho);
    const double dx = M.dist(x);
    const FieldSample fs = field(x, mix_seed(seed, static_cast<std::uint64_t>(i)));
    for (const auto& u : fs.directions) {
      for (double a : alphas) {
        const double slack = M.dist(axpy(x, a, u)) + dx - a / 2.0;
        ++rep.stats.trials;
        if (slack < rep.worst_margin) rep.worst_margin = slack;
        if (slack < -1e-10 && rep.passed())
          rep.flag_counterexample(step_witness(x, u, a, problem.f(x), 0.0));
      }
    }
    ++rep.stats.points;
  }
  return rep;
}

}  // namespace dstab

#endif  // DSTAB_STABILITY_HPP
