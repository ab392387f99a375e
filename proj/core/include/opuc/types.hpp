#ifndef OPUC_TYPES_HPP
#define OPUC_TYPES_HPP

#include <cmath>
#include <complex>
#include <numbers>

namespace opuc {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  // fmod can return exactly 2*pi after the correction when theta is a tiny
  // negative number
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

struct Vec2 {
  cplx x{0.0}, y{0.0};

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(cplx s) const { return {s * x, s * y}; }
  double norm() const { return std::sqrt(std::norm(x) + std::norm(y)); }
};

/// 2x2 complex matrix [[a, b], [c, d]], the workhorse of every transfer-matrix
/// computation. Row-major entry names follow the usual 2x2 convention.
struct Mat2 {
  cplx a{0.0}, b{0.0}, c{0.0}, d{0.0};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  Mat2 operator*(cplx s) const { return {s * a, s * b, s * c, s * d}; }

  cplx det() const { return a * d - b * c; }
  cplx trace() const { return a + d; }
  Mat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }

  /// Inverse of a unimodular matrix: (d, -b; -c, a). Exact up to rounding when
  /// det == 1; callers are responsible for that precondition.
  Mat2 adjugate() const { return {d, -b, -c, a}; }

  double frobenius_norm() const {
    return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
  }

  /// Spectral norm (largest singular value) from the closed-form 2x2 SVD:
  /// sigma_max^2 = (f + sqrt(f^2 - 4 g^2)) / 2 with f = ||A||_F^2, g = |det A|.
  double spectral_norm() const {
    const double f = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
    const double g = std::abs(det());
    const double disc = std::max(0.0, f * f - 4.0 * g * g);
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
  }
};

/// Kahan compensated accumulator, used for the log-modulus sums of long
/// products where plain summation would lose digits past ~1e4 terms.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace opuc

#endif  // OPUC_TYPES_HPP
