#ifndef DSTAB_PROBLEM_HPP
#define DSTAB_PROBLEM_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dstab/field.hpp"
#include "dstab/sets.hpp"
#include "dstab/vec.hpp"

namespace dstab {

// Auxiliary scalar function with closed-form derivatives. Values may be +inf
// (extended-real); grad/hess are valid where differentiable_at holds.
struct GFunc {
  std::string name;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;  // may be null
  std::function<bool(const Vec&)> differentiable_at;

  bool has_hess() const { return static_cast<bool>(hess); }
};

struct ConservedQuantity {
  std::string name;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  std::function<bool(const Vec&)> differentiable_at;  // may be null: everywhere
};

// One catalog example: objective, fields, auxiliary decrease functions,
// conserved quantities, and the known minimum/attractor geometry.
struct ProblemSpec {
  std::string name;
  std::size_t dim = 0;

  std::function<double(const Vec&)> f;
  std::function<Vec(const Vec&)> grad_f;               // valid on smooth locus
  std::function<bool(const Vec&)> differentiable;      // closed-form gradient valid
  // Distance proxy to the nonsmooth locus; finite-difference tests require a
  // margin. Null means smooth everywhere.
  std::function<double(const Vec&)> smooth_margin;

  // Declared exceptional loci with their exact limit sets, per field kind.
  std::function<std::optional<FieldSample>(const Vec&)> exceptional_normalized;
  std::function<std::optional<FieldSample>(const Vec&)> exceptional_bouligand;

  Field field_normalized;  // gradient-direction limit sets
  Field field_bouligand;   // gradient limit sets

  std::vector<GFunc> g_list;
  std::vector<ConservedQuantity> conserved;

  SetDescriptor minima;
  std::optional<SetDescriptor> attractor;
  double attractor_order = 2.0;

  Box bounded_box;
  bool tracking_smooth = false;  // objective is C^1 along generic trajectories

  double eval_g(const Vec& x) const { return g_list.empty() ? kInf : g_list[0].value(x); }

  // Descent dynamics for the Euler engine (the inclusion uses -F).
  Field descent_normalized() const { return negate(field_normalized); }
  Field descent_bouligand() const { return negate(field_bouligand); }
};

// (Re)builds both subdifferential fields from the gradient closures and the
// declared exceptional loci. Called by the catalog constructors and after
// changes of variables.
inline void rebuild_fields(ProblemSpec& p) {
  FieldParts parts;
  parts.dim = p.dim;
  parts.grad = p.grad_f;
  parts.differentiable = p.differentiable ? p.differentiable
                                          : std::function<bool(const Vec&)>([](const Vec&) { return true; });
  parts.exceptional = p.exceptional_normalized;
  p.field_normalized = make_normalized_field(parts, p.name + ".normalized");
  parts.exceptional = p.exceptional_bouligand;
  p.field_bouligand = make_bouligand_field(parts, p.name + ".bouligand");
}

}  // namespace dstab

#endif  // DSTAB_PROBLEM_HPP
