#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace billiards {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double a) { x *= a; y *= a; return *this; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
inline Vec2 operator*(Vec2 a, double k) { return {k * a.x, k * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 normalized(Vec2 a) { return (1.0 / norm(a)) * a; }
inline Vec2 rotate(Vec2 a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}
// Rotation by -pi/2: (x, y) -> (y, -x).
inline Vec2 rotate_cw(Vec2 a) { return {a.y, -a.x}; }

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static Mat2 identity() { return {}; }
  static Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  Mat2 inverse() const {
    const double k = 1.0 / det();
    return {k * d, -k * b, -k * c, k * a};
  }
  Mat2 transpose() const { return {a, c, b, d}; }
};

inline Mat2 operator*(const Mat2& m, const Mat2& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
          m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}
inline Vec2 operator*(const Mat2& m, Vec2 v) {
  return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
}
inline Mat2 operator*(double k, const Mat2& m) {
  return {k * m.a, k * m.b, k * m.c, k * m.d};
}
inline Mat2 operator-(const Mat2& m, const Mat2& n) {
  return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
}
inline Mat2 operator+(const Mat2& m, const Mat2& n) {
  return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d};
}

/// Largest absolute entry.
double max_abs(const Mat2& m);

/// Eigen-decomposition of a real 2x2 matrix with real eigenvalues.
struct Eigen2 {
  bool real = false;
  double lambda_small = 0.0;  // eigenvalue of smaller modulus
  double lambda_large = 0.0;  // eigenvalue of larger modulus
  Vec2 v_small;               // unit eigenvectors
  Vec2 v_large;
};
Eigen2 eigen(const Mat2& m);

/// Spectral radius (modulus of the largest eigenvalue, complex allowed).
double spectral_radius(const Mat2& m);

/// Thomas algorithm. `lower[i]` couples rows i and i-1 (lower[0] unused),
/// `upper[i]` couples rows i and i+1 (upper[n-1] unused). Returns the
/// solution; rhs is not modified.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

/// Cyclic tridiagonal system (corners lower[0] -> row 0, col n-1 and
/// upper[n-1] -> row n-1, col 0), solved by Sherman-Morrison. n >= 3.
std::vector<double> solve_cyclic_tridiagonal(std::span<const double> lower,
                                             std::span<const double> diag,
                                             std::span<const double> upper,
                                             std::span<const double> rhs);

}  // namespace billiards
