#ifndef DSTAB_REGIONS_HPP
#define DSTAB_REGIONS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "dstab/problem.hpp"
#include "dstab/sets.hpp"

namespace dstab {

// Canonical per-problem regions for the decrease certificates: a tube around
// the minimum set, bounded away from the loci where the auxiliary function
// degenerates (vanishes or blows up), so a uniform decrease constant exists.
inline RegionSampler decrease_region(const ProblemSpec& problem) {
  const std::string& n = problem.name;
  if (n == "ellipse") {
    // arc of the minimum curve away from both axes, with radial jitter
    auto sample = problem.minima.sample;
    return reject(
        [sample](Rng& rng) { return rng.in_ball(sample(rng), 0.02); },
        [](const Vec& z) { return std::abs(z[0]) > 0.15 && std::abs(z[1]) > 0.15; });
  }
  if (n == "parabola") {
    auto sample = problem.minima.sample;
    return reject(
        [sample](Rng& rng) { return rng.in_ball(sample(rng), 0.02); },
        [](const Vec& z) { return std::abs(z[0]) > 0.3 && std::abs(z[0]) < 1.2; });
  }
  if (n == "flat4") {
    // near the origin, with the decrease function |x| bounded away from zero
    return [](Rng& rng) {
      Vec z(2);
      z[0] = (rng.uniform() < 0.5 ? 1.0 : -1.0) * rng.uniform(0.1, 0.5);
      z[1] = rng.uniform(-0.1, 0.1);
      return z;
    };
  }
  if (n == "l1-3d") {
    auto sample = problem.minima.sample;
    return reject(
        [sample](Rng& rng) { return rng.in_ball(sample(rng), 0.02); },
        [](const Vec& z) { return std::abs(z[1]) > 0.4 && std::abs(z[1]) < 3.0; });
  }
  // default: a tube around the minimum set
  auto sample = problem.minima.sample;
  auto g = problem.g_list.empty() ? ScalarFn{} : problem.g_list[0].value;
  return reject([sample](Rng& rng) { return rng.in_ball(sample(rng), 0.02); },
                [g](const Vec& z) { return !g || std::isfinite(g(z)); });
}

// Box sampling restricted to the domain where the conserved quantity is
// differentiable (rejection; the excluded loci have measure zero).
inline RegionSampler conserved_region(const ProblemSpec& problem, std::size_t which = 0) {
  if (which >= problem.conserved.size())
    throw std::invalid_argument("conserved_region: no such conserved quantity");
  auto base = box_region(problem.bounded_box);
  auto diff = problem.conserved[which].differentiable_at;
  auto grad = problem.conserved[which].grad;
  return reject(base, [diff, grad](const Vec& x) {
    if (diff && !diff(x)) return false;
    return is_finite(grad(x));
  });
}

// Canonical basin samplers for the attractor probes: bounded windows of the
// minimum set, kept away from the measure-zero loci where the decrease
// function is degenerate and convergence stalls at finite horizons.
inline RegionSampler attractor_basin(const ProblemSpec& problem) {
  const std::string& n = problem.name;
  if (n == "flat4") {
    return [](Rng& rng) { return Vec{rng.uniform(-2.5, 2.5), 0.0}; };
  }
  if (n == "ellipse") {
    auto sample = problem.minima.sample;
    return reject([sample](Rng& rng) { return sample(rng); },
                  [](const Vec& z) { return std::abs(z[1]) >= 0.1; });
  }
  if (n == "parabola") {
    return [](Rng& rng) {
      const double t = rng.uniform(-1.0, 1.0);
      return Vec{t, t * t};
    };
  }
  auto sample = problem.minima.sample;
  auto g = problem.g_list.empty() ? ScalarFn{} : problem.g_list[0].value;
  Box box = problem.bounded_box;
  return reject([sample](Rng& rng) { return sample(rng); }, [g, box](const Vec& z) {
    if (!box.contains(z)) return false;
    return !g || std::isfinite(g(z));
  });
}

}  // namespace dstab

#endif  // DSTAB_REGIONS_HPP
