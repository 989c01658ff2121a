#ifndef DSTAB_RNG_HPP
#define DSTAB_RNG_HPP

#include <cstdint>
#include <random>

#include "dstab/vec.hpp"

namespace dstab {

// splitmix64 finalizer; used to derive independent per-trial seeds so that
// parallel sweeps are deterministic regardless of scheduling.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seeded generator with hand-rolled distributions. std::*_distribution is not
// bit-stable across standard libraries, so everything is built from the raw
// 64-bit stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // uniform in (0, 1]; used for step sizes which must be positive
  double uniform_pos() { return 1.0 - uniform(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }

  double gaussian() {
    // Marsaglia polar method
    for (;;) {
      const double u = uniform(-1.0, 1.0);
      const double v = uniform(-1.0, 1.0);
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

  Vec unit_vector(std::size_t n) {
    Vec v(n);
    for (;;) {
      for (auto& x : v) x = gaussian();
      const double r = norm(v);
      if (r > 1e-12) return scale(1.0 / r, v);
    }
  }

  Vec in_ball(const Vec& center, double radius) {
    Vec d = unit_vector(center.size());
    const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(center.size()));
    return axpy(center, r, d);
  }

  Vec on_sphere(const Vec& center, double radius) {
    return axpy(center, radius, unit_vector(center.size()));
  }

  Vec in_box(const Box& box) {
    Vec v(box.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = uniform(box.lo[i], box.hi[i]);
    return v;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dstab

#endif  // DSTAB_RNG_HPP
