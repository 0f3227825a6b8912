#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "billiards/jet.hpp"
#include "billiards/linalg.hpp"
#include "billiards/quadrature.hpp"

using namespace billiards;

TEST(Mat2, EigenOfHyperbolicBlock) {
  const Mat2 m{-5, -4, -6, -5};
  const Eigen2 e = eigen(m);
  ASSERT_TRUE(e.real);
  EXPECT_NEAR(e.lambda_large, -5 - 2 * std::sqrt(6.0), 1e-12);
  EXPECT_NEAR(e.lambda_small, -5 + 2 * std::sqrt(6.0), 1e-14);
  const Vec2 mv = m * e.v_large;
  EXPECT_NEAR(mv.x, e.lambda_large * e.v_large.x, 1e-12);
  EXPECT_NEAR(mv.y, e.lambda_large * e.v_large.y, 1e-12);
  // direction (2, sqrt6)
  EXPECT_NEAR(e.v_large.y / e.v_large.x, std::sqrt(6.0) / 2.0, 1e-12);
  EXPECT_NEAR(spectral_radius(m * m), std::pow(5 + 2 * std::sqrt(6.0), 2), 1e-9);
}

TEST(Mat2, SpectralRadiusOfRotationIsOne) {
  const double c = std::cos(0.3), s = std::sin(0.3);
  EXPECT_NEAR(spectral_radius({c, -s, s, c}), 1.0, 1e-14);
  EXPECT_FALSE(eigen({c, -s, s, c}).real);
}

TEST(Tridiagonal, MatchesDenseProduct) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n : {1, 2, 5, 40}) {
    std::vector<double> lo(n), di(n), up(n), x(n), b(n);
    for (int i = 0; i < n; ++i) {
      lo[i] = u(rng);
      up[i] = u(rng);
      di[i] = 4 + u(rng);
      x[i] = u(rng);
    }
    for (int i = 0; i < n; ++i) {
      b[i] = di[i] * x[i];
      if (i > 0) b[i] += lo[i] * x[i - 1];
      if (i + 1 < n) b[i] += up[i] * x[i + 1];
    }
    const auto y = solve_tridiagonal(lo, di, up, b);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(y[i], x[i], 1e-12);
  }
}

TEST(Tridiagonal, CyclicMatchesDenseProduct) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n : {3, 4, 17}) {
    std::vector<double> lo(n), di(n), up(n), x(n), b(n);
    for (int i = 0; i < n; ++i) {
      lo[i] = u(rng);
      up[i] = u(rng);
      di[i] = 4 + u(rng);
      x[i] = u(rng);
    }
    for (int i = 0; i < n; ++i)
      b[i] = di[i] * x[i] + lo[i] * x[(i + n - 1) % n] + up[i] * x[(i + 1) % n];
    const auto y = solve_cyclic_tridiagonal(lo, di, up, b);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(y[i], x[i], 1e-12);
  }
}

TEST(Jet, ElementaryFunctionsMatchTaylorCoefficients) {
  const Jet t = Jet::variable(8, 0.4);
  const Jet s = sin(t);
  double f = 1;
  for (int k = 0; k <= 8; ++k) {
    if (k > 0) f *= k;
    const double dk[4] = {std::sin(0.4), std::cos(0.4), -std::sin(0.4), -std::cos(0.4)};
    EXPECT_NEAR(s[k], dk[k % 4] / f, 1e-15);
  }
  const Jet p = pow(t, 2.5);
  EXPECT_NEAR(p.derivative(3), 2.5 * 1.5 * 0.5 * std::pow(0.4, -0.5), 1e-12);
  const Jet q = sqrt(t) * sqrt(t);
  for (int k = 2; k <= 8; ++k) EXPECT_NEAR(q[k], 0.0, 1e-12);
  const Jet r = Jet(8, 1.0) / (Jet(8, 1.0) - Jet::variable(8, 0.0));
  for (int k = 0; k <= 8; ++k) EXPECT_NEAR(r[k], 1.0, 1e-14);
}

TEST(Jet, ReversionInvertsSine) {
  // asin(y) = y + y^3/6 + 3 y^5/40 + 5 y^7/112
  const Jet g = sin(Jet::variable(7, 0.0));
  const Jet h = revert(g);
  EXPECT_NEAR(h[1], 1.0, 1e-15);
  EXPECT_NEAR(h[3], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(h[5], 3.0 / 40.0, 1e-15);
  EXPECT_NEAR(h[7], 5.0 / 112.0, 1e-15);
  const Jet id = compose(g, h);
  EXPECT_NEAR(id[1], 1.0, 1e-15);
  for (int k = 2; k <= 7; ++k) EXPECT_NEAR(id[k], 0.0, 1e-14);
}

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  for (int n : {1, 3, 10, 20}) {
    const int deg = 2 * n - 1;
    const double v = integrate_gl([&](double x) { return std::pow(x, deg) + std::pow(x, deg - 1); }, 0.0, 1.0, n);
    EXPECT_NEAR(v, 1.0 / (deg + 1) + 1.0 / deg, 1e-14);
  }
}
