#ifndef DSTAB_SCHEDULE_HPP
#define DSTAB_SCHEDULE_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dstab/vec.hpp"

namespace dstab {

// Step-size rule alpha_k in (0, cap]. The power kind uses k+1 in the
// denominator so that alpha_0 is finite.
struct StepSchedule {
  enum class Kind { constant, power };

  Kind kind = Kind::constant;
  double c = 1.0;    // scale
  double p = 1.0;    // power kind only: alpha_k = min(cap, c/(k+1)^{1/p})
  double cap = 1.0;  // upper bound on every step

  double alpha(std::int64_t k) const {
    if (kind == Kind::constant) return c < cap ? c : cap;
    const double a = c / std::pow(static_cast<double>(k + 1), 1.0 / p);
    return a < cap ? a : cap;
  }
};

inline StepSchedule make_constant_schedule(double c, double cap = kInf) {
  if (!(c > 0.0)) throw std::invalid_argument("constant schedule: c must be > 0");
  if (!(cap > 0.0)) throw std::invalid_argument("constant schedule: cap must be > 0");
  StepSchedule s;
  s.kind = StepSchedule::Kind::constant;
  s.c = c;
  s.cap = cap;
  return s;
}

inline StepSchedule make_power_schedule(double c, double p, double cap) {
  if (!(c > 0.0)) throw std::invalid_argument("power schedule: c must be > 0");
  if (!(p >= 1.0)) throw std::invalid_argument("power schedule: p must be >= 1");
  if (!(cap > 0.0)) throw std::invalid_argument("power schedule: cap must be > 0");
  StepSchedule s;
  s.kind = StepSchedule::Kind::power;
  s.c = c;
  s.p = p;
  s.cap = cap;
  return s;
}

// t_0 = 0, t_{k+1} = t_k + alpha_k, accumulated with compensated summation.
inline std::vector<double> cumulative_times(const StepSchedule& s, std::int64_t K) {
  if (K < 0) throw std::invalid_argument("cumulative_times: K must be >= 0");
  std::vector<double> t(static_cast<std::size_t>(K) + 1);
  KahanSum acc;
  t[0] = 0.0;
  for (std::int64_t k = 0; k < K; ++k) {
    acc.add(s.alpha(k));
    t[static_cast<std::size_t>(k) + 1] = acc.value();
  }
  return t;
}

}  // namespace dstab

#endif  // DSTAB_SCHEDULE_HPP
