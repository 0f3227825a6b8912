#include "billiards/linalg.hpp"

#include <algorithm>
#include <complex>
#include <stdexcept>

#include "billiards/error.hpp"

namespace billiards {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::Inadmissible: return "inadmissible";
    case ErrorKind::Escape: return "escape";
    case ErrorKind::Tangency: return "tangency";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::Insufficient: return "insufficient";
  }
  return "unknown";
}

double max_abs(const Mat2& m) {
  return std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
}

namespace {

Vec2 eigenvector(const Mat2& m, double lambda) {
  const Vec2 v1{m.b, lambda - m.a};
  const Vec2 v2{lambda - m.d, m.c};
  const Vec2 v = norm(v1) >= norm(v2) ? v1 : v2;
  if (norm(v) == 0.0) return {1.0, 0.0};  // scalar matrix
  Vec2 u = normalized(v);
  // canonical sign: first nonzero component positive
  if (u.x < 0.0 || (u.x == 0.0 && u.y < 0.0)) u = -u;
  return u;
}

}  // namespace

Eigen2 eigen(const Mat2& m) {
  Eigen2 e;
  const double half_tr = 0.5 * m.trace();
  const double disc = half_tr * half_tr - m.det();
  if (disc < 0.0) return e;
  e.real = true;
  const double root = std::sqrt(disc);
  // avoid cancellation: large root first, small from the determinant
  const double big = half_tr >= 0.0 ? half_tr + root : half_tr - root;
  const double small = big != 0.0 ? m.det() / big : half_tr - root;
  e.lambda_large = big;
  e.lambda_small = small;
  e.v_large = eigenvector(m, big);
  e.v_small = eigenvector(m, small);
  return e;
}

double spectral_radius(const Mat2& m) {
  const std::complex<double> half_tr(0.5 * m.trace(), 0.0);
  const std::complex<double> root = std::sqrt(half_tr * half_tr - m.det());
  return std::max(std::abs(half_tr + root), std::abs(half_tr - root));
}

std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw Error(ErrorKind::InvalidInput, "tridiagonal: size mismatch");
  std::vector<double> c(n), d(n), x(n);
  if (n == 0) return x;
  double beta = diag[0];
  if (beta == 0.0) throw Error(ErrorKind::NonConvergence, "tridiagonal: zero pivot");
  c[0] = n > 1 ? upper[0] / beta : 0.0;
  d[0] = rhs[0] / beta;
  for (std::size_t i = 1; i < n; ++i) {
    beta = diag[i] - lower[i] * c[i - 1];
    if (beta == 0.0) throw Error(ErrorKind::NonConvergence, "tridiagonal: zero pivot");
    c[i] = i + 1 < n ? upper[i] / beta : 0.0;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / beta;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

std::vector<double> solve_cyclic_tridiagonal(std::span<const double> lower,
                                             std::span<const double> diag,
                                             std::span<const double> upper,
                                             std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (n < 3) throw Error(ErrorKind::InvalidInput, "cyclic tridiagonal needs n >= 3");
  // A = B + u v^T with u = (gamma, 0, ..., 0, upper[n-1]),
  // v = (1, 0, ..., 0, lower[0] / gamma).
  const double alpha = upper[n - 1];  // row n-1, col 0
  const double beta = lower[0];       // row 0, col n-1
  const double gamma = -diag[0];
  std::vector<double> bdiag(diag.begin(), diag.end());
  bdiag[0] = diag[0] - gamma;
  bdiag[n - 1] = diag[n - 1] - alpha * beta / gamma;
  std::vector<double> lo(lower.begin(), lower.end()), up(upper.begin(), upper.end());
  lo[0] = 0.0;
  up[n - 1] = 0.0;
  const std::vector<double> y = solve_tridiagonal(lo, bdiag, up, rhs);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  const std::vector<double> z = solve_tridiagonal(lo, bdiag, up, u);
  const double vy = y[0] + beta / gamma * y[n - 1];
  const double vz = z[0] + beta / gamma * z[n - 1];
  const double factor = vy / (1.0 + vz);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - factor * z[i];
  return x;
}

}  // namespace billiards
