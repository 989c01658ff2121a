#ifndef DSTAB_VEC_HPP
#define DSTAB_VEC_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dstab {

// Dense real vector. All points, directions, and gradients are Vec; the
// dimension is fixed per problem and checked at module boundaries.
using Vec = std::vector<double>;

// Dense matrix as rows (only used for small Hessians).
using Mat = std::vector<Vec>;

constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline void check_dim(const Vec& v, std::size_t n, const char* what) {
  if (v.size() != n)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch, got " +
                                std::to_string(v.size()) + ", expected " + std::to_string(n));
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec scale(double c, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

// r = a + c*b, the Euler step kernel.
inline Vec axpy(const Vec& a, double c, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
  return r;
}

inline Vec normalized(const Vec& a) {
  const double n = norm(a);
  return scale(1.0 / n, a);
}

inline Vec neg(const Vec& a) { return scale(-1.0, a); }

inline Vec mat_vec(const Mat& m, const Vec& v) {
  Vec r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], v);
  return r;
}

inline double quad_form(const Mat& m, const Vec& v) { return dot(v, mat_vec(m, v)); }

inline Mat mat_transpose(const Mat& m) {
  if (m.empty()) return {};
  Mat r(m[0].size(), Vec(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[0].size(); ++j) r[j][i] = m[i][j];
  return r;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
  Mat r(a.size(), Vec(b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

inline Mat mat_identity(std::size_t n) {
  Mat r(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = 1.0;
  return r;
}

inline double frobenius_norm(const Mat& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (double x : row) s += x * x;
  return std::sqrt(s);
}

// x^e for small nonnegative integer exponents
inline double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

inline int sgn(double x) { return (x > 0.0) - (x < 0.0); }

// Compensated (Kahan) running sum; keeps long-horizon time accounting stable.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Axis-aligned box, used as a simulation guard and sampling domain.
struct Box {
  Vec lo, hi;

  std::size_t dim() const { return lo.size(); }

  bool contains(const Vec& x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }

  static Box cube(std::size_t n, double half_width) {
    Box b;
    b.lo.assign(n, -half_width);
    b.hi.assign(n, half_width);
    return b;
  }
};

}  // namespace dstab

#endif  // DSTAB_VEC_HPP
