#ifndef DSTAB_LYAPUNOV_HPP
#define DSTAB_LYAPUNOV_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dstab/euler.hpp"
#include "dstab/field.hpp"
#include "dstab/problem.hpp"
#include "dstab/report.hpp"
#include "dstab/sets.hpp"

namespace dstab {

// Tolerance for non-strict decrease inequalities, scaled by the magnitude
// of g. Strict inequalities use margin -1e-12.
inline double decrease_tol(double gx) { return 1e-12 * (1.0 + std::abs(gx)); }

struct DecreaseCertificate {
  enum class Kind { dL, pdL, pqdL, firstorder, secondorder };

  Kind kind = Kind::dL;
  double p = 1.0;
  int q = 1;
  double omega = 0.0;
  double alpha_bar = 0.0;
  std::string region_name;
  ProbeReport report;

  bool passed() const { return report.passed(); }
};

namespace detail {

inline std::vector<double> log_spaced_alphas(double alpha_bar, int A, double decades = 3.0) {
  std::vector<double> as(static_cast<std::size_t>(A));
  if (A == 1) {
    as[0] = alpha_bar;
    return as;
  }
  for (int j = 0; j < A; ++j)
    as[static_cast<std::size_t>(j)] =
        alpha_bar * std::pow(10.0, -decades * (1.0 - static_cast<double>(j) / (A - 1)));
  return as;
}

}  // namespace detail

// Decrease sweep: over N region points, every sampled direction, and A
// log-spaced steps in (0, alpha_bar], checks
//   g(x + a u) - g(x) + omega a^p <= tol.
// omega = 0 gives the plain monotonicity check. Points with g = +inf pass
// vacuously.
inline DecreaseCertificate verify_p_dL(const ScalarFn& g, const Field& F,
                                       const RegionSampler& region, double p, double omega,
                                       double alpha_bar, std::int64_t N, int A,
                                       std::uint64_t seed = 42,
                                       const std::string& region_name = "region") {
  if (!(alpha_bar > 0.0)) throw std::invalid_argument("verify: alpha_bar must be > 0");
  if (N < 1 || A < 1) throw std::invalid_argument("verify: N and A must be >= 1");
  if (!(p >= 1.0)) throw std::invalid_argument("verify: p must be >= 1");
  if (omega < 0.0) throw std::invalid_argument("verify: omega must be >= 0");

  DecreaseCertificate cert;
  cert.kind = omega == 0.0 ? DecreaseCertificate::Kind::dL : DecreaseCertificate::Kind::pdL;
  cert.p = p;
  cert.omega = omega;
  cert.alpha_bar = alpha_bar;
  cert.region_name = region_name;
  ProbeReport& rep = cert.report;
  rep.stats.seed = seed;
  rep.stats.params = {{"p", p}, {"omega", omega}, {"alpha_bar", alpha_bar}};

  const auto alphas = detail::log_spaced_alphas(alpha_bar, A);
  Rng rng(seed);
  std::int64_t vacuous = 0;
  for (std::int64_t i = 0; i < N; ++i) {
    const Vec x = region(rng);
    const double gx = g(x);
    if (std::isnan(gx)) throw std::runtime_error("verify: g returned NaN");
    ++rep.stats.points;
    if (gx == kInf) {
      ++vacuous;
      continue;
    }
    const FieldSample fs = F(x, mix_seed(seed, static_cast<std::uint64_t>(i)));
    for (const auto& u : fs.directions) {
      for (double a : alphas) {
        const Vec y = axpy(x, a, u);
        const double gy = g(y);
        if (std::isnan(gy)) throw std::runtime_error("verify: g returned NaN");
        const double margin = gy - gx + omega * std::pow(a, p);
        ++rep.stats.trials;
        if (margin > rep.worst_margin) rep.worst_margin = margin;
        if (margin > decrease_tol(gx) && rep.passed())
          rep.flag_counterexample(step_witness(x, u, a, gx, gy));
      }
    }
  }
  if (vacuous > 0) rep.notes.push_back(std::to_string(vacuous) + " points passed vacuously (g = +inf)");
  return cert;
}

inline DecreaseCertificate verify_dL(const ScalarFn& g, const Field& F, const RegionSampler& region,
                                     double alpha_bar, std::int64_t N, int A,
                                     std::uint64_t seed = 42,
                                     const std::string& region_name = "region") {
  return verify_p_dL(g, F, region, 1.0, 0.0, alpha_bar, N, A, seed, region_name);
}

// The decrease constants are never given numerically; this computes a
// candidate omega as the grid minimum of the decrease ratio, then verifies
// at omega/2, halving alpha_bar until the verification stabilizes.
struct Calibration {
  double omega = 0.0;
  double alpha_bar = 0.0;
  int halvings = 0;
  bool ok = false;
};

inline Calibration calibrate_p_dL(const ScalarFn& g, const Field& F, const RegionSampler& region,
                                  double p, double alpha_bar0, std::int64_t N, int A,
                                  std::uint64_t seed = 42) {
  Calibration cal;
  cal.alpha_bar = alpha_bar0;
  for (int round = 0; round < 8; ++round) {
    double ratio_min = kInf;
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(round)));
    const auto alphas = detail::log_spaced_alphas(cal.alpha_bar, A);
    for (std::int64_t i = 0; i < N; ++i) {
      const Vec x = region(rng);
      const double gx = g(x);
      if (!std::isfinite(gx)) continue;
      const FieldSample fs = F(x, mix_seed(seed, static_cast<std::uint64_t>(i * 131 + round)));
      for (const auto& u : fs.directions)
        for (double a : alphas)
          ratio_min = std::min(ratio_min, (gx - g(axpy(x, a, u))) / std::pow(a, p));
    }
    if (ratio_min > 0.0 && std::isfinite(ratio_min)) {
      const double omega = ratio_min / 2.0;
      auto cert = verify_p_dL(g, F, region, p, omega, cal.alpha_bar, N, A, mix_seed(seed, 777), "cal");
      if (cert.passed()) {
        cal.omega = omega;
        cal.ok = true;
        return cal;
      }
    }
    cal.alpha_bar /= 2.0;
    ++cal.halvings;
  }
  return cal;
}

// q-step decrease: g(x_q) - g(x_0) <= -omega min{alpha_0..alpha_{q-1}}^p for
// schedules in (0, alpha_bar] (constant and power prefixes) and every
// selection branch, capped at 4 branches per level (a cap notice is recorded,
// never silent).
inline DecreaseCertificate verify_pq_dL(const ScalarFn& g, const Field& F,
                                        const RegionSampler& region, double p, int q, double omega,
                                        double alpha_bar, std::int64_t N, std::uint64_t seed = 42,
                                        const std::string& region_name = "region", int A = 6) {
  if (q < 1) throw std::invalid_argument("verify_pq_dL: q must be >= 1");
  DecreaseCertificate cert;
  cert.kind = DecreaseCertificate::Kind::pqdL;
  cert.p = p;
  cert.q = q;
  cert.omega = omega;
  cert.alpha_bar = alpha_bar;
  cert.region_name = region_name;
  ProbeReport& rep = cert.report;
  rep.stats.seed = seed;
  rep.stats.params = {{"p", p}, {"q", static_cast<double>(q)}, {"omega", omega},
                      {"alpha_bar", alpha_bar}};

  // schedule family: constant tuples and power-decay prefixes
  std::vector<std::vector<double>> tuples;
  for (double a : detail::log_spaced_alphas(alpha_bar, A)) {
    std::vector<double> cst(static_cast<std::size_t>(q), a);
    tuples.push_back(cst);
    std::vector<double> pow_tuple(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j)
      pow_tuple[static_cast<std::size_t>(j)] = a / std::pow(static_cast<double>(j + 1), 1.0 / p);
    tuples.push_back(pow_tuple);
  }

  bool capped = false;
  constexpr std::size_t kBranchCap = 4;

  // depth-first over selection branches
  std::function<void(const Vec&, double, const std::vector<double>&, std::size_t, double,
                     const Vec&, std::uint64_t)>
      walk = [&](const Vec& x, double gx0, const std::vector<double>& alphas, std::size_t level,
                 double min_alpha, const Vec& x0, std::uint64_t branch_seed) {
        if (level == alphas.size()) {
          const double gq = g(x);
          if (std::isnan(gq)) throw std::runtime_error("verify_pq_dL: g returned NaN");
          const double margin = gq - gx0 + omega * std::pow(min_alpha, p);
          ++rep.stats.trials;
          if (margin > rep.worst_margin) rep.worst_margin = margin;
          if (margin > decrease_tol(gx0) && rep.passed())
            rep.flag_counterexample(step_witness(x0, sub(x, x0), 1.0, gx0, gq));
          return;
        }
        FieldSample fs = F(x, branch_seed);
        if (fs.directions.size() > kBranchCap) {
          capped = true;
          fs.directions.resize(kBranchCap);
        }
        const double a = alphas[level];
        for (std::size_t j = 0; j < fs.directions.size(); ++j)
          walk(axpy(x, a, fs.directions[j]), gx0, alphas, level + 1, std::min(min_alpha, a), x0,
               mix_seed(branch_seed, j + 1));
      };

  Rng rng(seed);
  for (std::int64_t i = 0; i < N; ++i) {
    const Vec x0 = region(rng);
    const double gx0 = g(x0);
    ++rep.stats.points;
    if (!std::isfinite(gx0)) continue;
    for (std::size_t ti = 0; ti < tuples.size(); ++ti)
      walk(x0, gx0, tuples[ti], 0, kInf, x0,
           mix_seed(seed, static_cast<std::uint64_t>(i) * 1009 + ti));
  }
  if (capped) rep.notes.push_back("selection branches capped at 4 per level");
  return cert;
}

// Calibration of the q-step decrease constant: grid minimum of the
// q-step decrease ratio over the same trial family as verify_pq_dL,
// verified at half the candidate with alpha_bar halved until stable.
inline Calibration calibrate_pq_dL(const ScalarFn& g, const Field& F, const RegionSampler& region,
                                   double p, int q, double alpha_bar0, std::int64_t N,
                                   std::uint64_t seed = 42, int A = 6) {
  Calibration cal;
  cal.alpha_bar = alpha_bar0;
  for (int round = 0; round < 8; ++round) {
    double ratio_min = kInf;
    std::vector<std::vector<double>> tuples;
    for (double a : detail::log_spaced_alphas(cal.alpha_bar, A)) {
      tuples.emplace_back(static_cast<std::size_t>(q), a);
      std::vector<double> pw(static_cast<std::size_t>(q));
      for (int j = 0; j < q; ++j)
        pw[static_cast<std::size_t>(j)] = a / std::pow(static_cast<double>(j + 1), 1.0 / p);
      tuples.push_back(pw);
    }
    std::function<void(const Vec&, double, const std::vector<double>&, std::size_t, double,
                       std::uint64_t)>
        walk = [&](const Vec& x, double gx0, const std::vector<double>& alphas, std::size_t level,
                   double min_alpha, std::uint64_t bs) {
          if (level == alphas.size()) {
            ratio_min = std::min(ratio_min, (gx0 - g(x)) / std::pow(min_alpha, p));
            return;
          }
          FieldSample fs = F(x, bs);
          if (fs.directions.size() > 4) fs.directions.resize(4);
          for (std::size_t j = 0; j < fs.directions.size(); ++j)
            walk(axpy(x, alphas[level], fs.directions[j]), gx0, alphas, level + 1,
                 std::min(min_alpha, alphas[level]), mix_seed(bs, j + 1));
        };
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(round)));
    for (std::int64_t i = 0; i < N; ++i) {
      const Vec x0 = region(rng);
      const double gx0 = g(x0);
      if (!std::isfinite(gx0)) continue;
      for (std::size_t ti = 0; ti < tuples.size(); ++ti)
        walk(x0, gx0, tuples[ti], 0, kInf, mix_seed(seed, static_cast<std::uint64_t>(i) * 1009 + ti));
    }
    if (ratio_min > 0.0 && std::isfinite(ratio_min)) {
      const double omega = ratio_min / 2.0;
      auto cert =
          verify_pq_dL(g, F, region, p, q, omega, cal.alpha_bar, N, mix_seed(seed, 777), "cal", A);
      if (cert.passed()) {
        cal.omega = omega;
        cal.ok = true;
        return cal;
      }
    }
    cal.alpha_bar /= 2.0;
    ++cal.halvings;
  }
  return cal;
}

struct FirstOrderResult {
  double s = 0.0;  // max_u <grad g(xbar), u>
  bool certified = false;
};

// First-order decrease test at a point: negative slopes in every field
// direction certify linear decrease nearby.
inline FirstOrderResult check_first_order(const GFunc& g, const Field& F, const Vec& xbar,
                                          std::uint64_t seed = 42) {
  if (g.differentiable_at && !g.differentiable_at(xbar))
    throw std::invalid_argument("check_first_order: g not differentiable at the point");
  const Vec grad = g.grad(xbar);
  const FieldSample fs = F(xbar, seed);
  FirstOrderResult res;
  res.s = -kInf;
  for (const auto& u : fs.directions) res.s = std::max(res.s, dot(grad, u));
  res.certified = res.s < -1e-12;
  return res;
}

struct SecondOrderResult {
  double s2 = 0.0;  // max_u <hess g(xbar) u, u>
  double grad_margin = 0.0;  // max over samples of <grad g, u>
  bool grad_ok = false;
  bool certified = false;
};

// Second-order test: first-order slopes nonpositive on a ball around the
// point, strictly negative curvature along every field direction at it.
inline SecondOrderResult check_second_order(const GFunc& g, const Field& F, const Vec& xbar,
                                            double r, std::int64_t N, std::uint64_t seed = 42) {
  if (!g.has_hess()) throw std::invalid_argument("check_second_order: g has no Hessian");
  if (g.differentiable_at && !g.differentiable_at(xbar))
    throw std::invalid_argument("check_second_order: g not differentiable at the point");
  SecondOrderResult res;
  res.grad_margin = -kInf;
  Rng rng(seed);
  for (std::int64_t i = 0; i < N; ++i) {
    Vec x = rng.in_ball(xbar, r);
    if (g.differentiable_at && !g.differentiable_at(x)) continue;
    const Vec grad = g.grad(x);
    const FieldSample fs = F(x, mix_seed(seed, static_cast<std::uint64_t>(i)));
    for (const auto& u : fs.directions) res.grad_margin = std::max(res.grad_margin, dot(grad, u));
  }
  res.grad_ok = res.grad_margin <= 1e-10;

  const Mat H = g.hess(xbar);
  const FieldSample fs = F(xbar, seed);
  res.s2 = -kInf;
  for (const auto& u : fs.directions) res.s2 = std::max(res.s2, quad_form(H, u));
  res.certified = res.grad_ok && res.s2 < -1e-12;
  return res;
}

// Conserved-quantity orthogonality: normalized |<grad C, u>| stays below
// 1e-8 over the sampled region.
inline ProbeReport check_conserved(const ConservedQuantity& C, const Field& F,
                                   const RegionSampler& region, std::int64_t N,
                                   std::uint64_t seed = 42) {
  ProbeReport rep;
  rep.stats.seed = seed;
  Rng rng(seed);
  for (std::int64_t i = 0; i < N; ++i) {
    Vec x = region(rng);
    if (C.differentiable_at) {
      int guard = 0;
      while (!C.differentiable_at(x) && ++guard < 1000) x = region(rng);
      if (guard >= 1000) throw std::runtime_error("check_conserved: region misses the domain of C");
    }
    const Vec grad = C.grad(x);
    const double scale_factor = 1.0 + norm(grad);
    const FieldSample fs = F(x, mix_seed(seed, static_cast<std::uint64_t>(i)));
    for (const auto& u : fs.directions) {
      const double margin = std::abs(dot(grad, u)) / scale_factor - 1e-8;
      ++rep.stats.trials;
      if (margin > rep.worst_margin) rep.worst_margin = margin;
      if (margin > 0.0 && rep.passed()) rep.flag_counterexample(step_witness(x, u, 0.0, 0.0, 0.0));
    }
    ++rep.stats.points;
  }
  // report the largest normalized inner product itself
  rep.worst_margin += 1e-8;
  return rep;
}

struct ZetaEstimate {
  double zeta = kInf;
  std::int64_t accepted = 0;
  bool degenerate = false;  // annulus touches a critical point
};

namespace detail {

// Distance from the origin to the convex hull of a finite direction set
// (Gilbert / Frank-Wolfe iteration; exact for singletons).
inline double hull_distance_to_zero(const std::vector<Vec>& S) {
  Vec w = S[0];
  for (const auto& s : S)
    if (dot(s, s) < dot(w, w)) w = s;
  for (int it = 0; it < 200; ++it) {
    const Vec* best = &S[0];
    double val = dot(w, S[0]);
    for (const auto& s : S)
      if (dot(w, s) < val) {
        val = dot(w, s);
        best = &s;
      }
    const Vec d = sub(*best, w);
    const double dd = dot(d, d);
    if (dd < 1e-30) break;
    const double gap = -dot(w, d);
    if (gap <= 1e-15 * (1.0 + dot(w, w))) break;
    const double theta = std::min(1.0, gap / dd);
    w = axpy(w, theta, d);
  }
  return norm(w);
}

}  // namespace detail

// Lower bound on the conservative-field norm over the annulus
// [l/2 <= f <= l] within radius r of X, by rejection sampling.
inline ZetaEstimate estimate_zeta(const ProblemSpec& problem, double ell, const SetDescriptor& X,
                                  double r, std::int64_t N, std::uint64_t seed = 42) {
  if (!(ell > 0.0)) throw std::invalid_argument("estimate_zeta: ell must be > 0");
  ZetaEstimate est;
  Rng rng(seed);
  constexpr std::int64_t kBudget = 1000000;
  std::int64_t draws = 0;
  while (est.accepted < N && draws < kBudget) {
    ++draws;
    const Vec x = rng.in_ball(X.sample(rng), r);
    const double fx = problem.f(x);
    if (!(fx >= ell / 2.0 && fx <= ell)) continue;
    ++est.accepted;
    const FieldSample ds = problem.field_bouligand(x, mix_seed(seed, static_cast<std::uint64_t>(draws)));
    est.zeta = std::min(est.zeta, detail::hull_distance_to_zero(ds.directions));
  }
  if (est.accepted == 0)
    throw std::runtime_error("estimate_zeta: annulus empty after draw budget");
  est.degenerate = est.zeta <= 1e-6;
  return est;
}

// Checks the two descent-window implications along a trajectory started in
// [f <= l]: containment in [f <= 3l/2] up to time T, and the drop
// f <= l - min{l, kappa zeta^2 T}/6 on [T/2, T].
inline ProbeReport check_descent_window(const Trajectory& traj, double ell, double kappa,
                                        double zeta, double T) {
  if (traj.f_values.empty() || traj.f_values[0] > ell)
    throw std::invalid_argument("check_descent_window: trajectory must start in [f <= ell]");
  if (traj.times.back() < T)
    throw std::runtime_error("check_descent_window: trajectory shorter than the horizon T");
  ProbeReport rep;
  rep.stats.params = {{"ell", ell}, {"kappa", kappa}, {"zeta", zeta}, {"T", T}};
  const double drop = ell - std::min(ell, kappa * zeta * zeta * T) / 6.0;
  const double tol = 1e-12 * (1.0 + ell);
  bool window_hit = false;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    if (t > T) break;
    const double fx = traj.f_values[k];
    ++rep.stats.trials;
    const double m1 = fx - 1.5 * ell;
    if (m1 > rep.worst_margin) rep.worst_margin = m1;
    double m2 = -kInf;
    if (t >= T / 2.0) {
      window_hit = true;
      m2 = fx - drop;
      if (m2 > rep.worst_margin) rep.worst_margin = m2;
    }
    if (std::max(m1, m2) > tol && rep.passed()) {
      Trajectory w = traj;
      rep.flag_counterexample(std::move(w));
    }
  }
  if (!window_hit) rep.notes.push_back("vacuous pass: no iterate landed in [T/2, T]");
  return rep;
}

}  // namespace dstab

#endif  // DSTAB_LYAPUNOV_HPP
