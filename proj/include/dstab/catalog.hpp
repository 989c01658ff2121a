#ifndef DSTAB_CATALOG_HPP
#define DSTAB_CATALOG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dstab/problem.hpp"
#include "dstab/sets.hpp"

namespace dstab {

namespace detail {

// Objectives of the form f = (r(x))^2 share their field structure: away from
// [r = 0] the gradient direction is sign(r) * base/|base| with base = grad r;
// on [r = 0] the direction limit set is +/- base/|base|. The zero test on r
// is exact (measure-zero locus).
inline void attach_square_residual_fields(ProblemSpec& p, std::function<double(const Vec&)> residual,
                                          std::function<Vec(const Vec&)> base) {
  auto r = std::move(residual);
  auto b = std::move(base);
  p.grad_f = [r, b](const Vec& x) {
    Vec g = b(x);
    const double rr = r(x);
    for (auto& gi : g) gi *= 2.0 * rr;
    return g;
  };
  p.differentiable = [](const Vec&) { return true; };
  p.exceptional_normalized = [r, b](const Vec& x) -> std::optional<FieldSample> {
    if (r(x) != 0.0) return std::nullopt;
    Vec v = b(x);
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) return std::nullopt;
    Vec up = scale(1.0 / n, v);
    return FieldSample{{up, neg(up)}, true};
  };
  p.exceptional_bouligand = nullptr;  // continuously differentiable
}

// Sign-pattern enumeration for separable l1 objectives: gradients have the
// form sum of s_t * (active term gradient) with s_t in sign_b(residual_t).
struct KinkTerm {
  double residual;
  Vec grad;  // gradient of the term's smooth factor
};

inline std::optional<FieldSample> enumerate_kinks(const std::vector<KinkTerm>& terms,
                                                  bool normalize, bool exact_hint) {
  bool any_kink = false;
  for (const auto& t : terms)
    if (t.residual == 0.0) any_kink = true;
  if (!any_kink) return std::nullopt;

  std::size_t kinks = 0;
  for (const auto& t : terms)
    if (t.residual == 0.0) ++kinks;
  if (kinks > 12) throw FieldEvalError("kink enumeration cap exceeded", terms[0].grad);

  const std::size_t n = terms[0].grad.size();
  std::vector<Vec> dirs;
  const std::size_t combos = std::size_t{1} << kinks;
  for (std::size_t mask = 0; mask < combos; ++mask) {
    Vec v(n, 0.0);
    std::size_t bit = 0;
    for (const auto& t : terms) {
      double s;
      if (t.residual == 0.0) {
        s = (mask >> bit) & 1 ? 1.0 : -1.0;
        ++bit;
      } else {
        s = t.residual > 0.0 ? 1.0 : -1.0;
      }
      v = axpy(v, s, t.grad);
    }
    if (normalize) {
      const double nn = norm(v);
      if (nn < 1e-14) continue;
      v = scale(1.0 / nn, v);
    }
    dirs.push_back(std::move(v));
  }
  dedup_directions(dirs, 1e-12);
  if (dirs.empty()) return std::nullopt;
  return FieldSample{std::move(dirs), exact_hint};
}

inline std::uint64_t name_seed(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : s) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  return h;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// f(x,y) = y^2 + x^2 y^4, minimum set = x-axis, g = |x|, attractor {(0,0)}.
inline ProblemSpec make_flat4() {
  ProblemSpec p;
  p.name = "flat4";
  p.dim = 2;
  p.f = [](const Vec& z) {
    const double x = z[0], y = z[1];
    return y * y + x * x * ipow(y, 4);
  };
  p.grad_f = [](const Vec& z) {
    const double x = z[0], y = z[1];
    return Vec{2.0 * x * ipow(y, 4), 2.0 * y + 4.0 * x * x * ipow(y, 3)};
  };
  p.differentiable = [](const Vec&) { return true; };
  // Direction limits on the minimum set are vertical regardless of x.
  p.exceptional_normalized = [](const Vec& z) -> std::optional<FieldSample> {
    if (z[1] != 0.0) return std::nullopt;
    return FieldSample{{Vec{0.0, 1.0}, Vec{0.0, -1.0}}, true};
  };
  p.exceptional_bouligand = nullptr;

  GFunc g;
  g.name = "abs_x";
  g.value = [](const Vec& z) { return std::abs(z[0]); };
  g.grad = [](const Vec& z) { return Vec{static_cast<double>(sgn(z[0])), 0.0}; };
  g.hess = [](const Vec&) { return Mat{{0.0, 0.0}, {0.0, 0.0}}; };
  g.differentiable_at = [](const Vec& z) { return z[0] != 0.0; };
  p.g_list.push_back(std::move(g));

  p.minima = parametric_curve([](double t) { return Vec{t, 0.0}; }, -6.0, 6.0, 2, "x-axis");
  p.attractor = point_set({0.0, 0.0}, "origin");
  p.attractor_order = 4.0;
  p.bounded_box = Box::cube(2, 8.0);
  p.tracking_smooth = true;
  rebuild_fields(p);
  return p;
}

// ---------------------------------------------------------------------------
// f(x,y) = (x^2 - y)^2, minimum set = parabola curve, g = x^2 exp(4y).
inline ProblemSpec make_parabola() {
  ProblemSpec p;
  p.name = "parabola";
  p.dim = 2;
  p.f = [](const Vec& z) {
    const double r = z[0] * z[0] - z[1];
    return r * r;
  };
  detail::attach_square_residual_fields(
      p, [](const Vec& z) { return z[0] * z[0] - z[1]; },
      [](const Vec& z) { return Vec{2.0 * z[0], -1.0}; });

  GFunc g;
  g.name = "x2e4y";
  g.value = [](const Vec& z) { return z[0] * z[0] * std::exp(4.0 * z[1]); };
  g.grad = [](const Vec& z) {
    const double e = std::exp(4.0 * z[1]);
    return Vec{2.0 * z[0] * e, 4.0 * z[0] * z[0] * e};
  };
  g.hess = [](const Vec& z) {
    const double e = std::exp(4.0 * z[1]);
    return Mat{{2.0 * e, 8.0 * z[0] * e}, {8.0 * z[0] * e, 16.0 * z[0] * z[0] * e}};
  };
  g.differentiable_at = [](const Vec&) { return true; };
  p.g_list.push_back(g);

  ConservedQuantity c;
  c.name = "x2e4y";
  c.value = g.value;
  c.grad = g.grad;
  p.conserved.push_back(std::move(c));

  p.minima = parametric_curve([](double t) { return Vec{t, t * t}; }, -3.0, 3.0, 2, "parabola-curve");
  p.attractor = point_set({0.0, 0.0}, "origin");
  p.attractor_order = 2.0;
  p.bounded_box = Box::cube(2, 4.0);
  p.tracking_smooth = true;
  rebuild_fields(p);
  return p;
}

// ---------------------------------------------------------------------------
// f(x,y) = (a x^2 + b y^2 - 1)^2 with a > b > 0 (ellipse) or a < 0 < b
// (hyperbola). g = |x|^b / |y|^a, extended-real on the x-axis.
inline ProblemSpec make_ellipse(double a, double b) {
  if (!((a > b && b > 0.0) || (a < 0.0 && 0.0 < b)))
    throw std::invalid_argument("ellipse: requires a > b > 0 or a < 0 < b");
  ProblemSpec p;
  p.name = "ellipse";
  p.dim = 2;
  p.f = [a, b](const Vec& z) {
    const double r = a * z[0] * z[0] + b * z[1] * z[1] - 1.0;
    return r * r;
  };
  detail::attach_square_residual_fields(
      p, [a, b](const Vec& z) { return a * z[0] * z[0] + b * z[1] * z[1] - 1.0; },
      [a, b](const Vec& z) { return Vec{2.0 * a * z[0], 2.0 * b * z[1]}; });

  GFunc g;
  g.name = "xb_over_ya";
  g.value = [a, b](const Vec& z) {
    if (z[1] == 0.0 && a > 0.0) return kInf;  // extended-real on the x-axis
    return std::pow(std::abs(z[0]), b) * std::pow(std::abs(z[1]), -a);
  };
  g.grad = [a, b](const Vec& z) {
    const double ax = std::abs(z[0]), ay = std::abs(z[1]);
    return Vec{b * sgn(z[0]) * std::pow(ax, b - 1.0) * std::pow(ay, -a),
               -a * sgn(z[1]) * std::pow(ax, b) * std::pow(ay, -a - 1.0)};
  };
  g.hess = [a, b](const Vec& z) {
    const double ax = std::abs(z[0]), ay = std::abs(z[1]);
    const double cross =
        -a * b * sgn(z[0]) * sgn(z[1]) * std::pow(ax, b - 1.0) * std::pow(ay, -a - 1.0);
    return Mat{{b * (b - 1.0) * std::pow(ax, b - 2.0) * std::pow(ay, -a), cross},
               {cross, a * (a + 1.0) * std::pow(ax, b) * std::pow(ay, -a - 2.0)}};
  };
  g.differentiable_at = [](const Vec& z) { return z[0] != 0.0 && z[1] != 0.0; };
  p.g_list.push_back(g);

  ConservedQuantity c;
  c.name = "xb_over_ya";
  c.value = g.value;
  c.grad = g.grad;
  c.differentiable_at = g.differentiable_at;
  p.conserved.push_back(std::move(c));

  if (a > 0.0) {
    const double sa = std::sqrt(a), sb = std::sqrt(b);
    p.minima = parametric_curve(
        [sa, sb](double t) { return Vec{std::cos(t) / sa, std::sin(t) / sb}; }, 0.0,
        2.0 * 3.14159265358979323846, 2, "ellipse-curve");
  } else {
    // two hyperbola branches y = +/- sqrt((1 - a x^2)/b) on disjoint intervals
    const double w = 2.5;
    p.minima = parametric_curve(
        [a, b, w](double t) {
          const bool upper = t < 1.1;
          const double frac = upper ? t : t - 1.2;
          const double x = -w + 2.0 * w * frac;
          const double y = std::sqrt((1.0 - a * x * x) / b);
          return Vec{x, upper ? y : -y};
        },
        0.0, 2.2, 2, "hyperbola-curve");
  }
  p.attractor = finite_union({{0.0, 1.0 / std::sqrt(b)}, {0.0, -1.0 / std::sqrt(b)}}, "poles");
  p.attractor_order = 2.0;
  p.bounded_box = Box::cube(2, 3.0);
  p.tracking_smooth = true;
  rebuild_fields(p);
  return p;
}

// ---------------------------------------------------------------------------
// Conserved/decrease family for diagonal quadratic residuals: with exponents
// normalized so the smallest positive weight is 1, C_i = |x_i|/|x_I| is
// conserved on I and C_i = |x_i|/|x_I|^{a_i} decreases off I. |x_I| is the
// Euclidean norm of the I-subvector.
struct BilinearConservedFamily {
  std::vector<std::size_t> I;
  Vec exponents;  // normalized a_i
  std::vector<ConservedQuantity> conserved;   // components with i in I
  std::vector<GFunc> decreasing;              // components with i not in I
  GFunc total_decrease;                       // sum of the decreasing components
};

inline BilinearConservedFamily bilinear_conserved(const Vec& a) {
  double m = kInf;
  for (double ai : a)
    if (ai > 0.0) m = std::min(m, ai);
  if (!std::isfinite(m))
    throw std::invalid_argument("bilinear_conserved: needs at least one positive weight");
  BilinearConservedFamily fam;
  fam.exponents.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    fam.exponents[i] = a[i] / m;
    if (a[i] > 0.0 && a[i] == m) fam.I.push_back(i);
  }
  const auto I = fam.I;
  auto norm_I = [I](const Vec& x) {
    double s = 0.0;
    for (std::size_t i : I) s += x[i] * x[i];
    return std::sqrt(s);
  };

  auto component = [I, norm_I](std::size_t i, double exp_i) {
    GFunc g;
    g.name = "C" + std::to_string(i);
    g.value = [i, exp_i, norm_I](const Vec& x) {
      const double nI = norm_I(x);
      if (nI == 0.0) return kInf;
      return std::abs(x[i]) / std::pow(nI, exp_i);
    };
    g.grad = [i, exp_i, I, norm_I](const Vec& x) {
      const double nI = norm_I(x);
      Vec grad(x.size(), 0.0);
      grad[i] = sgn(x[i]) * std::pow(nI, -exp_i);
      for (std::size_t j : I) grad[j] += -exp_i * std::abs(x[i]) * x[j] * std::pow(nI, -exp_i - 2.0);
      return grad;
    };
    g.differentiable_at = [i, norm_I](const Vec& x) { return x[i] != 0.0 && norm_I(x) > 0.0; };
    return g;
  };

  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool in_I = std::find(I.begin(), I.end(), i) != I.end();
    GFunc g = component(i, in_I ? 1.0 : fam.exponents[i]);
    if (in_I) {
      ConservedQuantity c;
      c.name = g.name;
      c.value = g.value;
      c.grad = g.grad;
      c.differentiable_at = g.differentiable_at;
      fam.conserved.push_back(std::move(c));
    } else {
      fam.decreasing.push_back(std::move(g));
    }
  }

  GFunc total;
  total.name = "sum_C_offI";
  auto comps = fam.decreasing;
  total.value = [comps](const Vec& x) {
    double s = 0.0;
    for (const auto& c : comps) s += c.value(x);
    return s;
  };
  total.grad = [comps](const Vec& x) {
    Vec g(x.size(), 0.0);
    for (const auto& c : comps) g = add(g, c.grad(x));
    return g;
  };
  total.differentiable_at = [comps](const Vec& x) {
    for (const auto& c : comps)
      if (!c.differentiable_at(x)) return false;
    return true;
  };
  fam.total_decrease = std::move(total);
  return fam;
}

// ---------------------------------------------------------------------------
// Diagonalized bilinear objective f(x) = (a_1 x_1^2 + ... + a_n x_n^2 - 1)^2.
inline ProblemSpec make_mvellipse(const Vec& a) {
  if (a.size() < 2) throw std::invalid_argument("mvellipse: needs dimension >= 2");
  bool has_pos = false;
  for (double ai : a) {
    if (ai == 0.0) throw std::invalid_argument("mvellipse: weights must be nonzero");
    if (ai > 0.0) has_pos = true;
  }
  if (!has_pos) throw std::invalid_argument("mvellipse: needs a positive weight");

  ProblemSpec p;
  p.name = "mvellipse";
  p.dim = a.size();
  p.f = [a](const Vec& x) {
    double r = -1.0;
    for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * x[i] * x[i];
    return r * r;
  };
  detail::attach_square_residual_fields(
      p,
      [a](const Vec& x) {
        double r = -1.0;
        for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * x[i] * x[i];
        return r;
      },
      [a](const Vec& x) {
        Vec b(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) b[i] = 2.0 * a[i] * x[i];
        return b;
      });

  auto fam = bilinear_conserved(a);
  p.conserved = fam.conserved;
  p.g_list.push_back(fam.total_decrease);
  for (auto& g : fam.decreasing) p.g_list.push_back(std::move(g));

  // minimum manifold sampler: solve for one I-coordinate
  const std::size_t pivot = fam.I[0];
  const std::size_t n = a.size();
  auto manifold_sampler = [a, pivot, n](Rng& rng) {
    for (;;) {
      Vec x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(-1.5, 1.5);
      double rest = 1.0;
      for (std::size_t i = 0; i < n; ++i)
        if (i != pivot) rest -= a[i] * x[i] * x[i];
      const double q = rest / a[pivot];
      if (q <= 1e-6) continue;
      x[pivot] = (rng.uniform() < 0.5 ? 1.0 : -1.0) * std::sqrt(q);
      return x;
    }
  };
  p.minima = sublevel_intersection(manifold_sampler, {}, n, 4096,
                                   detail::name_seed("mvellipse.minima"), "mvellipse-minima");

  if (fam.I.size() == 1) {
    Vec plus(n, 0.0), minus(n, 0.0);
    plus[pivot] = 1.0 / std::sqrt(a[pivot]);
    minus[pivot] = -plus[pivot];
    p.attractor = finite_union({plus, minus}, "flat-minima");
    p.attractor_order = 2.0;
  }
  p.bounded_box = Box::cube(n, 3.0);
  p.tracking_smooth = true;
  rebuild_fields(p);
  return p;
}

// ---------------------------------------------------------------------------
// f(x,y) = (<Ax,y> - 1)^2 with x in R^n, y in R^m, A m-by-n; the state is
// the concatenation (x, y).
inline ProblemSpec make_bilinear(const Mat& A) {
  const std::size_t m = A.size();
  if (m == 0) throw std::invalid_argument("bilinear: empty matrix");
  const std::size_t n = A[0].size();
  for (const auto& row : A)
    if (row.size() != n) throw std::invalid_argument("bilinear: ragged matrix");

  ProblemSpec p;
  p.name = "bilinear";
  p.dim = n + m;
  auto residual = [A, m, n](const Vec& z) {
    double r = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      double Ax_i = 0.0;
      for (std::size_t j = 0; j < n; ++j) Ax_i += A[i][j] * z[j];
      r += z[n + i] * Ax_i;
    }
    return r;
  };
  auto base = [A, m, n](const Vec& z) {
    Vec b(n + m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        b[j] += A[i][j] * z[n + i];        // A^T y
        b[n + i] += A[i][j] * z[j];        // A x
      }
    return b;
  };
  p.f = [residual](const Vec& z) {
    const double r = residual(z);
    return r * r;
  };
  detail::attach_square_residual_fields(p, residual, base);

  auto manifold_sampler = [A, m, n](Rng& rng) {
    for (;;) {
      Vec z(n + m);
      for (std::size_t j = 0; j < n; ++j) z[j] = rng.uniform(-1.5, 1.5);
      Vec Ax(m, 0.0);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) Ax[i] += A[i][j] * z[j];
      const double nn = dot(Ax, Ax);
      if (nn < 0.09) continue;
      Vec y0(m);
      for (auto& yi : y0) yi = rng.uniform(-1.5, 1.5);
      const double s = (1.0 - dot(Ax, y0)) / nn;
      bool in_range = true;
      for (std::size_t i = 0; i < m; ++i) {
        z[n + i] = y0[i] + s * Ax[i];
        if (std::abs(z[n + i]) > 2.5) in_range = false;
      }
      if (in_range) return z;
    }
  };
  p.minima = sublevel_intersection(manifold_sampler, {}, n + m, 4096,
                                   detail::name_seed("bilinear.minima"), "bilinear-minima");
  p.bounded_box = Box::cube(n + m, 3.0);
  p.tracking_smooth = true;
  rebuild_fields(p);
  return p;
}

// ---------------------------------------------------------------------------
// f(x) = (x^v - 1)^2 with monomial exponents v_i >= 1.
inline ProblemSpec make_monomial(const std::vector<int>& ups) {
  const std::size_t n = ups.size();
  if (n < 2) throw std::invalid_argument("monomial: needs dimension >= 2");
  for (int u : ups)
    if (u < 1) throw std::invalid_argument("monomial: exponents must be positive integers");

  ProblemSpec p;
  p.name = "monomial";
  p.dim = n;
  auto mono = [ups, n](const Vec& x) {
    double m = 1.0;
    for (std::size_t i = 0; i < n; ++i) m *= ipow(x[i], ups[i]);
    return m;
  };
  p.f = [mono](const Vec& x) {
    const double r = mono(x) - 1.0;
    return r * r;
  };
  detail::attach_square_residual_fields(
      p, [mono](const Vec& x) { return mono(x) - 1.0; },
      [ups, n](const Vec& x) {
        Vec b(n);
        for (std::size_t i = 0; i < n; ++i) {
          double prod = static_cast<double>(ups[i]) * ipow(x[i], ups[i] - 1);
          for (std::size_t j = 0; j < n; ++j)
            if (j != i) prod *= ipow(x[j], ups[j]);
          b[i] = prod;
        }
        return b;
      });

  for (std::size_t j = 1; j < n; ++j) {
    ConservedQuantity c;
    c.name = "pair_0_" + std::to_string(j);
    const double u0 = static_cast<double>(ups[0]), uj = static_cast<double>(ups[j]);
    c.value = [j, u0, uj](const Vec& x) { return x[0] * x[0] / u0 - x[j] * x[j] / uj; };
    c.grad = [j, u0, uj, n](const Vec& x) {
      Vec g(n, 0.0);
      g[0] = 2.0 * x[0] / u0;
      g[j] = -2.0 * x[j] / uj;
      return g;
    };
    p.conserved.push_back(std::move(c));
  }

  if (n == 2) {
    const double u1 = static_cast<double>(ups[0]), u2 = static_cast<double>(ups[1]);
    // branches (s1 t, s2 t^{-u1/u2}) with s1^{u1} s2^{u2} = 1, t in [0.2, 5]
    std::vector<std::pair<double, double>> signs;
    for (double s1 : {1.0, -1.0})
      for (double s2 : {1.0, -1.0})
        if (ipow(s1, ups[0]) * ipow(s2, ups[1]) == 1.0) signs.emplace_back(s1, s2);
    const double lo = 0.2, hi = 5.0;
    auto gamma = [signs, u1, u2, lo, hi](double s) {
      const auto b = static_cast<std::size_t>(std::min(
          static_cast<double>(signs.size()) - 1.0, std::floor(s)));
      const double frac = s - static_cast<double>(b);
      const double t = lo * std::pow(hi / lo, frac);
      return Vec{signs[b].first * t, signs[b].second * std::pow(t, -u1 / u2)};
    };
    p.minima = parametric_curve(gamma, 0.0, static_cast<double>(signs.size()), 2, "monomial-minima",
                                8192);

    const double s_flat =
        std::pow(std::pow(u1, u1 / 2.0) * std::pow(u2, u2 / 2.0), -1.0 / (u1 + u2));
    std::vector<Vec> flats;
    for (const auto& [s1, s2] : signs)
      flats.push_back({s1 * std::sqrt(u1) * s_flat, s2 * std::sqrt(u2) * s_flat});
    p.attractor = finite_union(std::move(flats), "flat-minima");
    p.attractor_order = 2.0;
  } else {
    auto sampler = [ups, mono, n](Rng& rng) {
      for (;;) {
        Vec x(n);
        for (std::size_t i = 1; i < n; ++i) {
          x[i] = rng.uniform(-2.0, 2.0);
          if (std::abs(x[i]) < 0.2) x[i] = x[i] < 0 ? -0.2 : 0.2;
        }
        x[0] = 1.0;
        double rest = 1.0;
        for (std::size_t i = 1; i < n; ++i) rest /= ipow(x[i], ups[i]);
        if (ups[0] % 2 == 0 && rest <= 0.0) continue;
        x[0] = sgn(rest) * std::pow(std::abs(rest), 1.0 / static_cast<double>(ups[0]));
        if (ups[0] % 2 == 0) x[0] = std::abs(x[0]) * (rng.uniform() < 0.5 ? 1.0 : -1.0);
        if (std::abs(x[0]) > 4.0) continue;
        return x;
      }
    };
    p.minima = sublevel_intersection(sampler, {}, n, 4096, detail::name_seed("monomial.minima"),
                                     "monomial-minima");
  }
  p.bounded_box = Box::cube(n, 6.0);
  p.tracking_smooth = true;
  rebuild_fields(p);
  return p;
}

// ---------------------------------------------------------------------------
// f(x) = |x1 x3| + |x2 x3 - 1|, minima {(0, t, 1/t)}, conserved
// C = x1^2 + x2^2 - x3^2, flat minima at +/-(0, 2^{1/4}, 2^{-1/4}).
inline ProblemSpec make_l1_3d() {
  ProblemSpec p;
  p.name = "l1-3d";
  p.dim = 3;
  p.f = [](const Vec& x) { return std::abs(x[0] * x[2]) + std::abs(x[1] * x[2] - 1.0); };
  auto terms_at = [](const Vec& x) {
    return std::vector<detail::KinkTerm>{
        {x[0] * x[2], Vec{x[2], 0.0, x[0]}},
        {x[1] * x[2] - 1.0, Vec{0.0, x[2], x[1]}},
    };
  };
  p.grad_f = [terms_at](const Vec& x) {
    Vec g(3, 0.0);
    for (const auto& t : terms_at(x)) g = axpy(g, t.residual > 0.0 ? 1.0 : -1.0, t.grad);
    return g;
  };
  p.differentiable = [](const Vec& x) { return x[0] * x[2] != 0.0 && x[1] * x[2] != 1.0; };
  p.smooth_margin = [](const Vec& x) {
    return std::min(std::abs(x[0] * x[2]), std::abs(x[1] * x[2] - 1.0));
  };
  p.exceptional_normalized = [terms_at](const Vec& x) {
    return detail::enumerate_kinks(terms_at(x), true, x[2] != 0.0);
  };
  p.exceptional_bouligand = [terms_at](const Vec& x) {
    return detail::enumerate_kinks(terms_at(x), false, x[2] != 0.0);
  };

  const double cbar = std::sqrt(2.0) / 2.0;
  auto C = [](const Vec& x) { return x[0] * x[0] + x[1] * x[1] - x[2] * x[2]; };
  GFunc g;
  g.name = "conservation_gap";
  g.value = [C, cbar](const Vec& x) {
    const double d = C(x) - cbar;
    return d * d / 4.0;
  };
  g.grad = [C, cbar](const Vec& x) {
    const double d = C(x) - cbar;
    return Vec{d * x[0], d * x[1], -d * x[2]};
  };
  g.hess = [C, cbar](const Vec& x) {
    const double d = C(x) - cbar;
    const Vec w{x[0], x[1], -x[2]};
    Mat h(3, Vec(3));
    const double diag[3] = {d, d, -d};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) h[i][j] = 2.0 * w[i] * w[j] + (i == j ? diag[i] : 0.0);
    return h;
  };
  g.differentiable_at = [](const Vec&) { return true; };
  p.g_list.push_back(std::move(g));

  ConservedQuantity c;
  c.name = "x1sq_x2sq_minus_x3sq";
  c.value = C;
  c.grad = [](const Vec& x) { return Vec{2.0 * x[0], 2.0 * x[1], -2.0 * x[2]}; };
  p.conserved.push_back(std::move(c));

  auto gamma = [](double s) {
    const double t = s < 1.5 ? 0.25 * std::pow(16.0, s) : -0.25 * std::pow(16.0, s - 1.5);
    return Vec{0.0, t, 1.0 / t};
  };
  p.minima = parametric_curve(gamma, 0.0, 2.5, 3, "l1-minima", 8192);

  const double q = std::pow(2.0, 0.25);
  p.attractor = finite_union({{0.0, q, 1.0 / q}, {0.0, -q, -1.0 / q}}, "flat-minima");
  p.attractor_order = 2.0;
  p.bounded_box = Box::cube(3, 4.0);
  p.tracking_smooth = false;
  rebuild_fields(p);
  return p;
}

// ---------------------------------------------------------------------------
// f(x,y) = ||x y^T - u v^T||_1. State is (x, y) in R^{m+n}. The parameters
// must satisfy a^T u v^T b != 0 for all sign vectors a, b.
inline ProblemSpec make_rank1(const Vec& u, const Vec& v) {
  const std::size_t m = u.size(), n = v.size();
  if (m * n > 12) throw std::invalid_argument("rank1: m*n is capped at 12");
  auto check_signs = [](const Vec& w) {
    const std::size_t k = w.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      double s = 0.0;
      for (std::size_t i = 0; i < k; ++i) s += ((mask >> i) & 1 ? 1.0 : -1.0) * w[i];
      if (s == 0.0) return false;
    }
    return true;
  };
  if (!check_signs(u) || !check_signs(v))
    throw std::invalid_argument("rank1: parameters admit a vanishing signed sum");

  ProblemSpec p;
  p.name = "rank1";
  p.dim = m + n;
  auto entries = [u, v, m, n](const Vec& z) {
    Mat e(m, Vec(n));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) e[i][j] = z[i] * z[m + j] - u[i] * v[j];
    return e;
  };
  p.f = [entries, m, n](const Vec& z) {
    double s = 0.0;
    const Mat e = entries(z);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) s += std::abs(e[i][j]);
    return s;
  };
  auto terms_at = [entries, m, n](const Vec& z) {
    std::vector<detail::KinkTerm> terms;
    terms.reserve(m * n);
    const Mat e = entries(z);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Vec g(m + n, 0.0);
        g[i] = z[m + j];
        g[m + j] = z[i];
        terms.push_back({e[i][j], std::move(g)});
      }
    return terms;
  };
  p.grad_f = [terms_at](const Vec& z) {
    Vec g(z.size(), 0.0);
    for (const auto& t : terms_at(z)) g = axpy(g, t.residual > 0.0 ? 1.0 : -1.0, t.grad);
    return g;
  };
  p.differentiable = [entries, m, n](const Vec& z) {
    const Mat e = entries(z);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (e[i][j] == 0.0) return false;
    return true;
  };
  p.smooth_margin = [entries, m, n](const Vec& z) {
    const Mat e = entries(z);
    double mg = kInf;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) mg = std::min(mg, std::abs(e[i][j]));
    return mg;
  };
  p.exceptional_normalized = [terms_at](const Vec& z) {
    return detail::enumerate_kinks(terms_at(z), true, true);
  };
  p.exceptional_bouligand = [terms_at](const Vec& z) {
    return detail::enumerate_kinks(terms_at(z), false, true);
  };

  auto C = [m, n](const Vec& z) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += z[i] * z[i];
    for (std::size_t j = 0; j < n; ++j) s -= z[m + j] * z[m + j];
    return s;
  };
  auto gradC = [m, n](const Vec& z) {
    Vec g(m + n);
    for (std::size_t i = 0; i < m; ++i) g[i] = 2.0 * z[i];
    for (std::size_t j = 0; j < n; ++j) g[m + j] = -2.0 * z[m + j];
    return g;
  };
  GFunc g;
  g.name = "balance_gap";
  g.value = [C](const Vec& z) {
    const double c = C(z);
    return c * c / 4.0;
  };
  g.grad = [C, gradC](const Vec& z) { return scale(C(z) / 2.0, gradC(z)); };
  g.hess = [C, gradC, m, n](const Vec& z) {
    const Vec w = scale(0.5, gradC(z));  // (x, -y)
    const double c = C(z);
    Mat h(m + n, Vec(m + n, 0.0));
    for (std::size_t i = 0; i < m + n; ++i) {
      for (std::size_t j = 0; j < m + n; ++j) h[i][j] = 2.0 * w[i] * w[j];
      h[i][i] += i < m ? c : -c;
    }
    return h;
  };
  g.differentiable_at = [](const Vec&) { return true; };
  p.g_list.push_back(std::move(g));

  ConservedQuantity c;
  c.name = "norm_balance";
  c.value = C;
  c.grad = gradC;
  p.conserved.push_back(std::move(c));

  auto curve_point = [u, v, m, n](double t) {
    Vec z(m + n);
    for (std::size_t i = 0; i < m; ++i) z[i] = u[i] * t;
    for (std::size_t j = 0; j < n; ++j) z[m + j] = v[j] / t;
    return z;
  };
  auto gamma = [curve_point](double s) {
    const double t = s < 1.5 ? 0.2 * std::pow(25.0, s) : -0.2 * std::pow(25.0, s - 1.5);
    return curve_point(t);
  };
  p.minima = parametric_curve(gamma, 0.0, 2.5, m + n, "rank1-minima", 8192);

  // Attractor window [t_lo, t_hi]: sign-change interval of the certificate
  // product over all sign matrices, located on a log grid and bisected.
  {
    auto product = [u, v, m, n](double t) {
      const double uu = dot(u, u), vv = dot(v, v);
      const double first = uu * t * t - vv / (t * t);
      double best = -kInf;
      for (std::size_t mask = 0; mask < (std::size_t{1} << (m * n)); ++mask) {
        Vec Lv(m, 0.0), Ltu(n, 0.0);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            const double lij = (mask >> (i * n + j)) & 1 ? 1.0 : -1.0;
            Lv[i] += lij * v[j];
            Ltu[j] += lij * u[i];
          }
        const double second = dot(Lv, Lv) / (t * t) - dot(Ltu, Ltu) * t * t;
        best = std::max(best, first * second);
      }
      return best;
    };
    const int G = 600;
    const double t0 = 0.05, t1 = 20.0;
    std::vector<double> ts(G), ps(G);
    for (int i = 0; i < G; ++i) {
      ts[i] = t0 * std::pow(t1 / t0, static_cast<double>(i) / (G - 1));
      ps[i] = product(ts[i]);
    }
    auto bisect = [&product](double lo, double hi) {
      for (int it = 0; it < 80; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (product(mid) >= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      return std::sqrt(lo * hi);
    };
    auto bisect_hi = [&product](double lo, double hi) {
      for (int it = 0; it < 80; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (product(mid) >= 0.0)
          lo = mid;
        else
          hi = mid;
      }
      return std::sqrt(lo * hi);
    };
    int first_nn = -1, last_nn = -1;
    for (int i = 0; i < G; ++i)
      if (ps[i] >= 0.0) {
        if (first_nn < 0) first_nn = i;
        last_nn = i;
      }
    if (first_nn > 0 && last_nn + 1 < G) {
      const double t_lo = bisect(ts[first_nn - 1], ts[first_nn]);
      const double t_hi = bisect_hi(ts[last_nn], ts[last_nn + 1]);
      auto agamma = [curve_point, t_lo, t_hi](double s) {
        const double t = s < 1.5 ? t_lo * std::pow(t_hi / t_lo, s) : -t_lo * std::pow(t_hi / t_lo, s - 1.5);
        return curve_point(t);
      };
      p.attractor = parametric_curve(agamma, 0.0, 2.5, m + n, "rank1-attractor", 4096);
      p.attractor_order = 2.0;
    }
  }

  p.bounded_box = Box::cube(m + n, 2.0 * (norm(u) + norm(v)));
  p.tracking_smooth = false;
  rebuild_fields(p);
  return p;
}

// ---------------------------------------------------------------------------
// Change of variables f~(x) = f(Ux) with U orthogonal. Fields, auxiliary
// functions, and set descriptors transform covariantly; minima and
// attractors map through U^T.
inline ProblemSpec orthogonal_conjugate(const ProblemSpec& problem, const Mat& U) {
  const std::size_t n = problem.dim;
  if (U.size() != n || U[0].size() != n)
    throw std::invalid_argument("orthogonal_conjugate: U has wrong shape");
  Mat gram = mat_mul(mat_transpose(U), U);
  for (std::size_t i = 0; i < n; ++i) gram[i][i] -= 1.0;
  const double defect = frobenius_norm(gram);
  if (defect > 1e-12)
    throw std::invalid_argument("orthogonal_conjugate: U not orthogonal, |U^T U - I| = " +
                                std::to_string(defect));

  const Mat Ut = mat_transpose(U);
  auto fwd = [U](const Vec& x) { return mat_vec(U, x); };      // new -> old coords
  auto pull = [Ut](const Vec& v) { return mat_vec(Ut, v); };   // old -> new coords

  ProblemSpec q;
  q.name = problem.name + "~U";
  q.dim = n;
  {
    auto f = problem.f;
    q.f = [f, fwd](const Vec& x) { return f(fwd(x)); };
  }
  {
    auto g = problem.grad_f;
    q.grad_f = [g, fwd, pull](const Vec& x) { return pull(g(fwd(x))); };
  }
  {
    auto d = problem.differentiable;
    q.differentiable = d ? std::function<bool(const Vec&)>([d, fwd](const Vec& x) { return d(fwd(x)); })
                         : nullptr;
  }
  if (problem.smooth_margin) {
    auto sm = problem.smooth_margin;
    q.smooth_margin = [sm, fwd](const Vec& x) { return sm(fwd(x)); };
  }
  auto conj_exceptional = [fwd, pull](const std::function<std::optional<FieldSample>(const Vec&)>& e)
      -> std::function<std::optional<FieldSample>(const Vec&)> {
    if (!e) return nullptr;
    return [e, fwd, pull](const Vec& x) -> std::optional<FieldSample> {
      auto s = e(fwd(x));
      if (!s) return std::nullopt;
      for (auto& d : s->directions) d = pull(d);
      return s;
    };
  };
  q.exceptional_normalized = conj_exceptional(problem.exceptional_normalized);
  q.exceptional_bouligand = conj_exceptional(problem.exceptional_bouligand);

  auto conj_gfunc = [fwd, pull, U, Ut](const GFunc& g) {
    GFunc h;
    h.name = g.name + "~U";
    auto val = g.value;
    h.value = [val, fwd](const Vec& x) { return val(fwd(x)); };
    auto gr = g.grad;
    h.grad = [gr, fwd, pull](const Vec& x) { return pull(gr(fwd(x))); };
    if (g.hess) {
      auto hs = g.hess;
      h.hess = [hs, fwd, U, Ut](const Vec& x) { return mat_mul(Ut, mat_mul(hs(fwd(x)), U)); };
    }
    if (g.differentiable_at) {
      auto da = g.differentiable_at;
      h.differentiable_at = [da, fwd](const Vec& x) { return da(fwd(x)); };
    }
    return h;
  };
  for (const auto& g : problem.g_list) q.g_list.push_back(conj_gfunc(g));
  for (const auto& c : problem.conserved) {
    ConservedQuantity cc;
    cc.name = c.name + "~U";
    auto val = c.value;
    cc.value = [val, fwd](const Vec& x) { return val(fwd(x)); };
    auto gr = c.grad;
    cc.grad = [gr, fwd, pull](const Vec& x) { return pull(gr(fwd(x))); };
    if (c.differentiable_at) {
      auto da = c.differentiable_at;
      cc.differentiable_at = [da, fwd](const Vec& x) { return da(fwd(x)); };
    }
    q.conserved.push_back(std::move(cc));
  }

  auto conj_set = [fwd, pull](const SetDescriptor& s) {
    SetDescriptor t = s;
    t.name = s.name + "~U";
    auto d = s.dist;
    t.dist = [d, fwd](const Vec& x) { return d(fwd(x)); };
    auto smp = s.sample;
    t.sample = [smp, pull](Rng& rng) { return pull(smp(rng)); };
    if (s.project) {
      auto pr = s.project;
      t.project = [pr, fwd, pull](const Vec& x) -> std::optional<Vec> {
        auto y = pr(fwd(x));
        if (!y) return std::nullopt;
        return pull(*y);
      };
    }
    if (s.tangent_basis) {
      auto tb = s.tangent_basis;
      t.tangent_basis = [tb, fwd, pull](const Vec& y) {
        auto basis = tb(fwd(y));
        for (auto& b : basis) b = pull(b);
        return basis;
      };
    }
    return t;
  };
  q.minima = conj_set(problem.minima);
  if (problem.attractor) q.attractor = conj_set(*problem.attractor);
  q.attractor_order = problem.attractor_order;

  // enclosing axis-aligned box of U^T * box
  q.bounded_box.lo.resize(n);
  q.bounded_box.hi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double c = 0.0, h = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double cj = 0.5 * (problem.bounded_box.lo[j] + problem.bounded_box.hi[j]);
      const double hj = 0.5 * (problem.bounded_box.hi[j] - problem.bounded_box.lo[j]);
      c += Ut[i][j] * cj;
      h += std::abs(Ut[i][j]) * hj;
    }
    q.bounded_box.lo[i] = c - h;
    q.bounded_box.hi[i] = c + h;
  }
  q.tracking_smooth = problem.tracking_smooth;
  rebuild_fields(q);
  return q;
}

// ---------------------------------------------------------------------------
// Registry. Grammar: name(:key=value(,value)*(,key=value(,value)*)*)?
// Vector values use commas, matrix values use semicolons between rows
// (e.g. "bilinear:A=2,0;0,1").
namespace detail {

inline std::map<std::string, std::string> parse_params(const std::string& s) {
  std::map<std::string, std::string> kv;
  std::string key;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) {
      key = tok.substr(0, eq);
      kv[key] = tok.substr(eq + 1);
    } else {
      if (key.empty()) throw std::invalid_argument("problem params: value before any key");
      kv[key] += "," + tok;
    }
  }
  return kv;
}

inline Vec parse_vec(const std::string& s) {
  Vec v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  return v;
}

inline Mat parse_mat(const std::string& s) {
  Mat m;
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) m.push_back(parse_vec(row));
  return m;
}

}  // namespace detail

inline std::vector<std::string> problem_names() {
  return {"flat4", "parabola", "ellipse", "mvellipse", "bilinear", "monomial", "l1-3d", "rank1"};
}

inline ProblemSpec get_problem(const std::string& spec) {
  std::string name = spec, params;
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    name = spec.substr(0, colon);
    params = spec.substr(colon + 1);
  }
  auto kv = detail::parse_params(params);
  auto vec_param = [&kv](const std::string& key, const Vec& dflt) {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : detail::parse_vec(it->second);
  };
  auto scalar_param = [&kv](const std::string& key, double dflt) {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : std::stod(it->second);
  };

  if (name == "flat4") return make_flat4();
  if (name == "parabola") return make_parabola();
  if (name == "ellipse") return make_ellipse(scalar_param("a", 2.0), scalar_param("b", 1.0));
  if (name == "mvellipse") return make_mvellipse(vec_param("a", {1.0, 0.5, -1.0, -0.5}));
  if (name == "bilinear") {
    auto it = kv.find("A");
    Mat A = it == kv.end() ? Mat{{2.0, 0.0}, {0.0, 1.0}} : detail::parse_mat(it->second);
    return make_bilinear(A);
  }
  if (name == "monomial") {
    Vec u = vec_param("u", {1.0, 1.0});
    std::vector<int> ups;
    for (double x : u) ups.push_back(static_cast<int>(std::lround(x)));
    return make_monomial(ups);
  }
  if (name == "l1-3d") return make_l1_3d();
  if (name == "rank1") return make_rank1(vec_param("u", {2.0, 1.0}), vec_param("v", {1.0, 3.0}));
  throw std::invalid_argument("unknown problem: " + name);
}

}  // namespace dstab

#endif  // DSTAB_CATALOG_HPP
