#ifndef DSTAB_SETS_HPP
#define DSTAB_SETS_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dstab/rng.hpp"
#include "dstab/vec.hpp"

namespace dstab {

// Distance targets: minimum sets, attractors, level-set intersections.
// dist(x) >= 0 and vanishes on the described set (to tol_set for
// parametric kinds, to the cloud spacing for sublevel clouds).
struct SetDescriptor {
  enum class Kind { point, parametric_curve, finite_union, sublevel_intersection };

  static constexpr double kTolSet = 1e-10;

  Kind kind = Kind::point;
  std::size_t dim = 0;
  std::string name;
  std::function<double(const Vec&)> dist;
  std::function<Vec(Rng&)> sample;
  // Nearest point on the set; only curves and finite unions provide it.
  // Returns nullopt when the minimizer is ambiguous beyond tolerance.
  std::function<std::optional<Vec>(const Vec&)> project;
  // Tangent basis at a point on the set (curves only).
  std::function<std::vector<Vec>(const Vec&)> tangent_basis;

  double operator()(const Vec& x) const { return dist(x); }
};

inline double set_distance(const Vec& x, const SetDescriptor& X) {
  check_dim(x, X.dim, "set_distance");
  return X.dist(x);
}

inline SetDescriptor point_set(Vec p, std::string name = "point") {
  SetDescriptor d;
  d.kind = SetDescriptor::Kind::point;
  d.dim = p.size();
  d.name = std::move(name);
  Vec center = std::move(p);
  d.dist = [center](const Vec& x) { return dist(x, center); };
  d.sample = [center](Rng&) { return center; };
  d.project = [center](const Vec&) -> std::optional<Vec> { return center; };
  return d;
}

inline SetDescriptor finite_union(std::vector<Vec> points, std::string name = "finite-union") {
  if (points.empty()) throw std::invalid_argument("finite_union: needs at least one point");
  SetDescriptor d;
  d.kind = SetDescriptor::Kind::finite_union;
  d.dim = points[0].size();
  d.name = std::move(name);
  auto pts = std::move(points);
  d.dist = [pts](const Vec& x) {
    double best = kInf;
    for (const auto& p : pts) best = std::min(best, dist(x, p));
    return best;
  };
  d.sample = [pts](Rng& rng) { return pts[rng.index(pts.size())]; };
  d.project = [pts](const Vec& x) -> std::optional<Vec> {
    double best = kInf;
    const Vec* arg = nullptr;
    for (const auto& p : pts) {
      const double dd = dist(x, p);
      if (dd < best) {
        best = dd;
        arg = &p;
      }
    }
    return *arg;
  };
  return d;
}

namespace detail {

// Golden-section refinement of t -> |gamma(t) - x| on [lo, hi].
inline double golden_refine(const std::function<Vec(double)>& gamma, const Vec& x, double lo,
                            double hi) {
  constexpr double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = dist(gamma(c), x);
  double fd = dist(gamma(d), x);
  for (int it = 0; it < 90 && (b - a) > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = dist(gamma(c), x);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = dist(gamma(d), x);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

// Curve {gamma(t) : t in [t_lo, t_hi]}. gamma may be piecewise (disjoint
// branches mapped to disjoint parameter intervals); the dense grid handles
// the discontinuities. Distances are grid search plus golden-section
// refinement, relative accuracy about 1e-8.
inline SetDescriptor parametric_curve(std::function<Vec(double)> gamma, double t_lo, double t_hi,
                                      std::size_t dim, std::string name = "curve",
                                      std::size_t grid = 4096) {
  SetDescriptor d;
  d.kind = SetDescriptor::Kind::parametric_curve;
  d.dim = dim;
  d.name = std::move(name);
  auto g = std::move(gamma);

  auto best_cells = [g, t_lo, t_hi, grid](const Vec& x) {
    // returns (best index, best distance, runner-up distance at a separated cell)
    const double h = (t_hi - t_lo) / static_cast<double>(grid);
    std::vector<double> dd(grid + 1);
    for (std::size_t i = 0; i <= grid; ++i) dd[i] = dist(g(t_lo + h * static_cast<double>(i)), x);
    std::size_t arg = 0;
    for (std::size_t i = 1; i <= grid; ++i)
      if (dd[i] < dd[arg]) arg = i;
    double second = kInf;
    for (std::size_t i = 0; i <= grid; ++i)
      if ((arg + 2 < i || i + 2 < arg) && dd[i] < second) second = dd[i];
    return std::tuple<std::size_t, double, double>(arg, dd[arg], second);
  };

  d.dist = [g, t_lo, t_hi, grid, best_cells](const Vec& x) {
    const double h = (t_hi - t_lo) / static_cast<double>(grid);
    auto [arg, best, second] = best_cells(x);
    (void)best;
    (void)second;
    const double a = std::max(t_lo, t_lo + h * (static_cast<double>(arg) - 1.0));
    const double b = std::min(t_hi, t_lo + h * (static_cast<double>(arg) + 1.0));
    const double t = detail::golden_refine(g, x, a, b);
    return dist(g(t), x);
  };
  d.sample = [g, t_lo, t_hi](Rng& rng) { return g(rng.uniform(t_lo, t_hi)); };
  d.project = [g, t_lo, t_hi, grid, best_cells](const Vec& x) -> std::optional<Vec> {
    const double h = (t_hi - t_lo) / static_cast<double>(grid);
    auto [arg, best, second] = best_cells(x);
    // ambiguous projection: a separated cell nearly ties the minimum
    if (second < best * (1.0 + 1e-6) + 1e-14) return std::nullopt;
    const double a = std::max(t_lo, t_lo + h * (static_cast<double>(arg) - 1.0));
    const double b = std::min(t_hi, t_lo + h * (static_cast<double>(arg) + 1.0));
    const double t = detail::golden_refine(g, x, a, b);
    return g(t);
  };
  d.tangent_basis = [g, t_lo, t_hi, grid, best_cells](const Vec& y) -> std::vector<Vec> {
    const double h = (t_hi - t_lo) / static_cast<double>(grid);
    auto [arg, best, second] = best_cells(y);
    (void)best;
    (void)second;
    const double a = std::max(t_lo, t_lo + h * (static_cast<double>(arg) - 1.0));
    const double b = std::min(t_hi, t_lo + h * (static_cast<double>(arg) + 1.0));
    const double t = detail::golden_refine(g, y, a, b);
    const double dt = 1e-6 * (1.0 + std::abs(t));
    const double lo = std::max(t_lo, t - dt);
    const double hi = std::min(t_hi, t + dt);
    Vec tan = scale(1.0 / (hi - lo), sub(g(hi), g(lo)));
    const double n = norm(tan);
    if (n < 1e-12) return {};
    return {scale(1.0 / n, tan)};
  };
  return d;
}

// Region samplers feed the falsification sweeps.
using RegionSampler = std::function<Vec(Rng&)>;

inline RegionSampler ball_region(Vec center, double radius) {
  return [center, radius](Rng& rng) { return rng.in_ball(center, radius); };
}

inline RegionSampler box_region(Box box) {
  return [box](Rng& rng) { return rng.in_box(box); };
}

// Points within `radius` of the set (set sample plus a ball offset).
inline RegionSampler set_neighborhood(const SetDescriptor& X, double radius) {
  auto sample = X.sample;
  return [sample, radius](Rng& rng) { return rng.in_ball(sample(rng), radius); };
}

inline RegionSampler reject(RegionSampler base, std::function<bool(const Vec&)> keep,
                            int budget = 100000) {
  return [base, keep, budget](Rng& rng) {
    for (int i = 0; i < budget; ++i) {
      Vec x = base(rng);
      if (keep(x)) return x;
    }
    throw std::runtime_error("region sampler: rejection budget exhausted");
  };
}

// Intersection of sublevel sets, represented by a rejection-sampled point
// cloud. Distances are cloud minima: accuracy is the cloud spacing, which is
// coarser than the parametric kinds and documented as such.
inline SetDescriptor sublevel_intersection(std::function<Vec(Rng&)> base_sampler,
                                           std::vector<std::function<bool(const Vec&)>> members,
                                           std::size_t dim, std::size_t cloud_size,
                                           std::uint64_t seed, std::string name = "sublevel",
                                           std::size_t draw_budget = 1000000) {
  Rng rng(seed);
  std::vector<Vec> cloud;
  cloud.reserve(cloud_size);
  for (std::size_t draws = 0; cloud.size() < cloud_size; ++draws) {
    if (draws >= draw_budget)
      throw std::runtime_error("sublevel_intersection: sampler budget exhausted for " + name);
    Vec x = base_sampler(rng);
    bool ok = true;
    for (const auto& m : members)
      if (!m(x)) {
        ok = false;
        break;
      }
    if (ok) cloud.push_back(std::move(x));
  }
  SetDescriptor d = finite_union(std::move(cloud), std::move(name));
  d.kind = SetDescriptor::Kind::sublevel_intersection;
  d.dim = dim;
  d.project = nullptr;
  return d;
}

}  // namespace dstab

#endif  // DSTAB_SETS_HPP
