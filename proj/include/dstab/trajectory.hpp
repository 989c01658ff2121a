#ifndef DSTAB_TRAJECTORY_HPP
#define DSTAB_TRAJECTORY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dstab/vec.hpp"

namespace dstab {

// Error mark on a truncated run (field overflow, NaN objective).
struct SimError {
  std::int64_t k = 0;
  std::string what;
};

// Full Euler record. With thinning (store_every > 1) only a subsequence of
// steps is kept; ks holds the original step indices. points/times/f/g have
// one more entry than directions/alphas.
struct Trajectory {
  std::vector<Vec> points;
  std::vector<Vec> directions;       // chosen u_k from the field sample
  std::vector<int> chosen_index;     // index of u_k within the sample
  std::vector<double> alphas;
  std::vector<double> times;
  std::vector<double> f_values;
  std::vector<double> g_values;      // +inf allowed; empty if no g tracked
  std::vector<std::int64_t> ks;
  std::optional<SimError> error;

  std::size_t size() const { return points.size(); }
  const Vec& back() const { return points.back(); }
};

}  // namespace dstab

#endif  // DSTAB_TRAJECTORY_HPP
