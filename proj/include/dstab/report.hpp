#ifndef DSTAB_REPORT_HPP
#define DSTAB_REPORT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dstab/trajectory.hpp"

namespace dstab {

enum class Verdict { NO_VIOLATION_FOUND, COUNTEREXAMPLE };

inline const char* to_string(Verdict v) {
  return v == Verdict::NO_VIOLATION_FOUND ? "NO_VIOLATION_FOUND" : "COUNTEREXAMPLE";
}

struct ProbeStats {
  std::int64_t trials = 0;
  std::int64_t points = 0;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;
};

// Outcome of a falsification sweep. worst_margin is the extremal value of
// the tested inequality over all trials (sign convention: the inequality
// asserts margin <= 0, so a positive worst margin is a violation).
// A witness is present exactly when the verdict is COUNTEREXAMPLE.
struct ProbeReport {
  Verdict verdict = Verdict::NO_VIOLATION_FOUND;
  double worst_margin = -kInf;
  std::optional<Trajectory> witness;
  ProbeStats stats;
  std::vector<std::string> notes;

  bool passed() const { return verdict == Verdict::NO_VIOLATION_FOUND; }

  void flag_counterexample(Trajectory w) {
    verdict = Verdict::COUNTEREXAMPLE;
    witness = std::move(w);
  }
};

// One-step witness for pointwise inequality violations (x, u, alpha).
inline Trajectory step_witness(const Vec& x, const Vec& u, double alpha, double fx, double fxu) {
  Trajectory t;
  t.points = {x, axpy(x, alpha, u)};
  t.directions = {u};
  t.chosen_index = {0};
  t.alphas = {alpha};
  t.times = {0.0, alpha};
  t.f_values = {fx, fxu};
  t.ks = {0, 1};
  return t;
}

}  // namespace dstab

#endif  // DSTAB_REPORT_HPP
