#ifndef DSTAB_FIELD_HPP
#define DSTAB_FIELD_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dstab/report.hpp"
#include "dstab/rng.hpp"
#include "dstab/sets.hpp"
#include "dstab/vec.hpp"

namespace dstab {

// Finite sample of a set-valued map at a point. exact=true means the list
// equals the full value of the map there; exact=false marks a perturbation-
// sampled approximation.
struct FieldSample {
  std::vector<Vec> directions;
  bool exact = true;
};

struct FieldEvalError : std::runtime_error {
  Vec at;
  FieldEvalError(const std::string& what, Vec x) : std::runtime_error(what), at(std::move(x)) {}
};

// Set-valued map F: R^n => R^n evaluated as finite samples. Evaluators are
// pure; the seed only feeds the sampled fallback so parallel evaluation
// stays deterministic.
struct Field {
  std::size_t dim = 0;
  std::string name;
  std::function<FieldSample(const Vec&, std::uint64_t)> eval;

  FieldSample operator()(const Vec& x, std::uint64_t seed = 0) const {
    check_dim(x, dim, "field eval");
    FieldSample s = eval(x, seed);
    if (s.directions.empty())
      throw FieldEvalError("field contract violation: empty sample from " + name, x);
    return s;
  }
};

inline Field negate(const Field& f) {
  Field g;
  g.dim = f.dim;
  g.name = "-" + f.name;
  auto inner = f.eval;
  g.eval = [inner](const Vec& x, std::uint64_t seed) {
    FieldSample s = inner(x, seed);
    for (auto& u : s.directions) u = neg(u);
    return s;
  };
  return g;
}

// sign with set value {1,-1} at the origin. The zero test is exact: the
// selection differs from +/-1 only on a measure-zero locus.
inline FieldSample sign_b(double t) {
  if (!std::isfinite(t)) throw FieldEvalError("sign_b: non-finite input", {t});
  if (t == 0.0) return {{Vec{1.0}, Vec{-1.0}}, true};
  return {{Vec{t > 0.0 ? 1.0 : -1.0}}, true};
}

namespace detail {

inline void dedup_directions(std::vector<Vec>& dirs, double tol) {
  std::vector<Vec> out;
  for (auto& d : dirs) {
    bool dup = false;
    for (const auto& o : out)
      if (dist(d, o) <= tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(d));
  }
  dirs = std::move(out);
}

}  // namespace detail

// Pieces a catalog problem supplies to build its subdifferential fields:
// a closed-form gradient with its validity locus, plus declared exceptional
// loci carrying exact finite limit sets.
struct FieldParts {
  std::size_t dim = 0;
  std::function<Vec(const Vec&)> grad;
  std::function<bool(const Vec&)> differentiable;
  std::function<std::optional<FieldSample>(const Vec&)> exceptional;  // may be null
};

namespace detail {

constexpr int kFallbackSamples = 32;
constexpr double kFallbackRadius = 1e-7;
constexpr double kFallbackDedupTol = 1e-6;

// Limit-set approximation by gradients at perturbed points. Marked inexact.
inline FieldSample sample_fallback(const FieldParts& parts, const Vec& x, std::uint64_t seed,
                                   bool normalize) {
  Rng rng(mix_seed(seed, 0x9a7f));
  FieldSample out;
  out.exact = false;
  for (int round = 0; round < 8 && out.directions.empty(); ++round) {
    for (int j = 0; j < kFallbackSamples; ++j) {
      Vec y = rng.on_sphere(x, kFallbackRadius);
      if (!parts.differentiable(y)) continue;
      Vec g = parts.grad(y);
      if (!is_finite(g)) continue;
      if (normalize) {
        const double n = norm(g);
        if (n == 0.0) continue;
        out.directions.push_back(scale(1.0 / n, g));
      } else {
        out.directions.push_back(std::move(g));
      }
    }
  }
  if (out.directions.empty())
    throw FieldEvalError("fallback sampling found no usable gradients", x);
  dedup_directions(out.directions, kFallbackDedupTol);
  return out;
}

}  // namespace detail

// Limit set of gradient directions grad f / |grad f|. Exceptional loci come
// from the catalog's enumeration; elsewhere the closed form is used when the
// gradient is nonzero, and perturbation sampling otherwise.
inline Field make_normalized_field(FieldParts parts, std::string name = "normalized") {
  Field f;
  f.dim = parts.dim;
  f.name = std::move(name);
  f.eval = [parts](const Vec& x, std::uint64_t seed) -> FieldSample {
    if (parts.exceptional) {
      if (auto s = parts.exceptional(x)) return *s;
    }
    if (parts.differentiable(x)) {
      Vec g = parts.grad(x);
      if (!is_finite(g)) throw FieldEvalError("gradient overflow", x);
      const double n = norm(g);
      if (n > 0.0) return {{scale(1.0 / n, g)}, true};
    }
    return detail::sample_fallback(parts, x, seed, /*normalize=*/true);
  };
  return f;
}

// Limit set of gradients. For continuously differentiable objectives this is
// the gradient singleton everywhere (including critical points).
inline Field make_bouligand_field(FieldParts parts, std::string name = "bouligand") {
  Field f;
  f.dim = parts.dim;
  f.name = std::move(name);
  f.eval = [parts](const Vec& x, std::uint64_t seed) -> FieldSample {
    if (parts.exceptional) {
      if (auto s = parts.exceptional(x)) return *s;
    }
    if (parts.differentiable(x)) {
      Vec g = parts.grad(x);
      if (!is_finite(g)) throw FieldEvalError("gradient overflow", x);
      return {{std::move(g)}, true};
    }
    return detail::sample_fallback(parts, x, seed, /*normalize=*/false);
  };
  return f;
}

// Checks the standing angle condition: for every u in co F(x) there is
// v in D(x) with <u,v> <= -kappa |v|^2. u ranges over the vertex set of the
// sample plus random convex combinations; the existential v makes dense
// sampling in u the falsification-complete direction.
inline ProbeReport check_angle_condition(const Field& F, const Field& D,
                                         const RegionSampler& region, double kappa,
                                         std::int64_t N, std::uint64_t seed = 42) {
  if (F.dim != D.dim) throw std::invalid_argument("check_angle_condition: dimension mismatch");
  if (N < 1) throw std::invalid_argument("check_angle_condition: N must be >= 1");
  constexpr int kCombos = 16;
  ProbeReport rep;
  rep.stats.seed = seed;
  rep.stats.params["kappa"] = kappa;
  Rng rng(seed);
  for (std::int64_t i = 0; i < N; ++i) {
    Vec x = region(rng);
    const std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(i));
    FieldSample fs = F(x, s);
    FieldSample ds = D(x, mix_seed(s, 1));
    std::vector<Vec> us = fs.directions;
    if (fs.directions.size() > 1) {
      for (int c = 0; c < kCombos; ++c) {
        Vec u(F.dim, 0.0);
        double total = 0.0;
        std::vector<double> w(fs.directions.size());
        for (auto& wi : w) {
          wi = rng.uniform_pos();
          total += wi;
        }
        for (std::size_t j = 0; j < w.size(); ++j) u = axpy(u, w[j] / total, fs.directions[j]);
        us.push_back(std::move(u));
      }
    }
    for (const auto& u : us) {
      double margin = kInf;
      for (const auto& v : ds.directions)
        margin = std::min(margin, dot(u, v) + kappa * dot(v, v));
      ++rep.stats.trials;
      if (margin > rep.worst_margin) rep.worst_margin = margin;
      if (margin > 1e-12 && rep.verdict == Verdict::NO_VIOLATION_FOUND)
        rep.flag_counterexample(step_witness(x, u, 0.0, 0.0, 0.0));
    }
    ++rep.stats.points;
  }
  return rep;
}

}  // namespace dstab

#endif  // DSTAB_FIELD_HPP
