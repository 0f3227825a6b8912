#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "billiards/error.hpp"
#include "billiards/geometry.hpp"

using namespace billiards;

namespace {

const double kPi = std::numbers::pi;

ShapeParams circle(Vec2 c, double r) {
  ShapeParams p;
  p.kind = ShapeKind::Circle;
  p.center = c;
  p.radius = r;
  return p;
}

ShapeParams ellipse(double a, double b) {
  ShapeParams p;
  p.kind = ShapeKind::Ellipse;
  p.semi_a = a;
  p.semi_b = b;
  return p;
}

ShapeParams fourier(std::vector<double> cs, std::vector<double> ss = {}) {
  ShapeParams p;
  p.kind = ShapeKind::Fourier;
  p.cos_coeffs = std::move(cs);
  p.sin_coeffs = std::move(ss);
  return p;
}

TableConfig config_of(std::vector<ShapeParams> shapes, bool non_eclipse = true) {
  TableConfig c;
  int id = 1;
  for (auto& s : shapes) c.obstacles.push_back({id++, s, {}});
  c.non_eclipse = non_eclipse;
  return c;
}

// distance from point p to segment [a, b]
double seg_dist(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  double t = dot(p - a, d) / dot(d, d);
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * d));
}

// Equal-radius discs: hull(D_i u D_j) meets D_k iff dist(c_k, [c_i c_j]) <= r_ij + r_k.
bool circle_non_eclipse_oracle(const std::vector<Vec2>& c, double r) {
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      for (std::size_t k = 0; k < c.size(); ++k)
        if (k != i && k != j && seg_dist(c[k], c[i], c[j]) <= 2 * r) return false;
  return true;
}

std::vector<BoundaryCurve> sample_curves() {
  return {BoundaryCurve(circle({0.3, -0.2}, 1.4)), BoundaryCurve(ellipse(2.0, 1.0)),
          BoundaryCurve(fourier({0.05, 0.02}, {0.0, 0.03})), BoundaryCurve(fourier({0.0, 0.04}))};
}

}  // namespace

TEST(BuildTable, ThreeDiscs) {
  const Table t = build_table(three_disc_config());
  EXPECT_EQ(t.size(), 3u);
  for (int id : {1, 2, 3}) EXPECT_NEAR(t.curve(id).perimeter(), 2 * kPi, 1e-14);
  EXPECT_NEAR(t.total_perimeter(), 6 * kPi, 1e-13);
  EXPECT_EQ(t.alphabet(), (std::vector<int>{1, 2, 3}));
}

TEST(BuildTable, RejectsFewerThanThree) {
  TableConfig c = three_disc_config();
  c.obstacles.resize(1);
  try {
    build_table(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    EXPECT_STREQ(e.what(), "fewer than 3 obstacles");
  }
}

TEST(BuildTable, RejectsNonConvexFourier) {
  // independent oracle: polar curvature of 1 + 0.9 cos 2u changes sign
  int neg = 0, pos = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = 2 * kPi * i / 10000;
    const double r = 1 + 0.9 * std::cos(2 * u), r1 = -1.8 * std::sin(2 * u), r2 = -3.6 * std::cos(2 * u);
    const double k = (r * r + 2 * r1 * r1 - r * r2) / std::pow(r * r + r1 * r1, 1.5);
    (k > 0 ? pos : neg)++;
  }
  ASSERT_GT(neg, 0);
  ASSERT_GT(pos, 0);
  TableConfig c = three_disc_config();
  c.obstacles[0].shape = fourier({0.0, 0.9});
  try {
    build_table(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Geometry);
    EXPECT_NE(std::string(e.what()).find("non-convex shape"), std::string::npos);
  }
}

TEST(BuildTable, RejectsOverlap) {
  EXPECT_THROW(build_table(config_of({circle({0, 0}, 1), circle({1.5, 0}, 1), circle({0, 5}, 1)})), Error);
  EXPECT_THROW(build_table(config_of({circle({0, 0}, 1), circle({2.5, 0}, 1), circle({1.25, 0.9}, 1)}, false)),
               Error);
}

TEST(Frame, UnitCircle) {
  const BoundaryCurve c(circle({0, 0}, 1));
  Frame f = c.frame(0.0);
  EXPECT_NEAR(f.point.x, 1, 1e-15);
  EXPECT_NEAR(f.point.y, 0, 1e-15);
  EXPECT_NEAR(f.tangent.y, 1, 1e-15);
  EXPECT_NEAR(f.normal.x, 1, 1e-15);
  f = c.frame(kPi);
  EXPECT_NEAR(f.point.x, -1, 1e-15);
  EXPECT_NEAR(f.tangent.y, -1, 1e-15);
  EXPECT_NEAR(f.normal.x, -1, 1e-15);
}

TEST(Frame, EllipseStartsOnMajorAxis) {
  const BoundaryCurve c(ellipse(2, 1));
  const Frame f = c.frame(0.0);
  EXPECT_NEAR(f.point.x, 2, 1e-14);
  EXPECT_NEAR(f.normal.x, 1, 1e-14);
  EXPECT_NEAR(f.normal.y, 0, 1e-14);
}

TEST(Frame, OrthonormalAndOutward) {
  std::mt19937 rng(3);
  for (const auto& c : sample_curves()) {
    std::uniform_real_distribution<double> us(0, c.perimeter());
    const Vec2 center = c.params().center;
    for (int i = 0; i < 200; ++i) {
      const Frame f = c.frame(us(rng));
      EXPECT_NEAR(norm(f.tangent), 1, 1e-14);
      EXPECT_NEAR(dot(f.tangent, f.normal), 0, 1e-14);
      EXPECT_GT(dot(f.normal, f.point - center), 0);  // star-shaped about its center
    }
  }
}

TEST(Arclength, UnitSpeedAndCurvatureByFiniteDifferences) {
  std::mt19937 rng(5);
  for (const auto& c : sample_curves()) {
    std::uniform_real_distribution<double> us(0, c.perimeter());
    for (int i = 0; i < 1000; ++i) {
      const double s = us(rng);
      const double h = 1e-4;
      const Vec2 pm = c.point(s - h), p0 = c.point(s), pp = c.point(s + h);
      const Vec2 d1 = (1 / (2 * h)) * (pp - pm);
      const Vec2 d2 = (1 / (h * h)) * (pp - 2 * p0 + pm);
      // O(h^2) truncation: |P'''| h^2 / 6 ~ 1e-9
      EXPECT_NEAR(norm(d1), 1.0, 1e-8);
      EXPECT_NEAR(norm(d2), c.frame(s).curvature, 1e-6);
    }
  }
}

TEST(Arclength, RichardsonSpeedIsOneTo1em10) {
  std::mt19937 rng(6);
  for (const auto& c : sample_curves()) {
    std::uniform_real_distribution<double> us(0, c.perimeter());
    for (int i = 0; i < 1000; ++i) {
      const double s = us(rng);
      auto d = [&](double h) { return (1 / (2 * h)) * (c.point(s + h) - c.point(s - h)); };
      const Vec2 r = (4.0 / 3.0) * d(5e-4) - (1.0 / 3.0) * d(1e-3);
      EXPECT_NEAR(norm(r), 1.0, 1e-10);
    }
  }
}

TEST(Arclength, RoundTrip) {
  for (const auto& c : sample_curves()) {
    for (int i = 0; i < 50; ++i) {
      const double s = c.perimeter() * (i + 0.37) / 50;
      EXPECT_NEAR(c.arclength_of(c.param_of(s)), s, 1e-12);
    }
  }
}

TEST(CurvatureJet, CircleConstants) {
  const BoundaryCurve c1(circle({0, 0}, 1)), c2(circle({1, 1}, 2));
  const auto j = c1.curvature_jet(0.7, 2);
  EXPECT_EQ(j, (std::vector<double>{1, 0, 0}));
  EXPECT_DOUBLE_EQ(c2.curvature_jet(3.1, 0)[0], 0.5);
}

TEST(CurvatureJet, EllipseMajorAxisEnd) {
  const BoundaryCurve c(ellipse(2, 1));
  const double k = c.curvature_jet(0.0, 0)[0];
  EXPECT_NEAR(k, 2.0, 1e-12);
  // oracle: finite-difference curvature of the parametric ellipse at t = 0
  const double h = 1e-4;
  auto P = [](double t) { return Vec2{2 * std::cos(t), std::sin(t)}; };
  const Vec2 d1 = (1 / (2 * h)) * (P(h) - P(-h));
  const Vec2 d2 = (1 / (h * h)) * (P(h) - 2 * P(0) + P(-h));
  EXPECT_NEAR(cross(d1, d2) / std::pow(norm(d1), 3), k, 1e-8);
}

TEST(CurvatureJet, MatchesFiniteDifferencesOfCurvature) {
  std::mt19937 rng(9);
  for (const auto& c : sample_curves()) {
    std::uniform_real_distribution<double> us(0, c.perimeter());
    for (int i = 0; i < 20; ++i) {
      const double s = us(rng);
      const auto jet = c.curvature_jet(s, 3);
      auto K = [&](double x) { return c.frame(x).curvature; };
      // fourth-order central stencils
      const double h = 2e-3, h3 = 2e-3;
      const double k1 = (8 * (K(s + h) - K(s - h)) - (K(s + 2 * h) - K(s - 2 * h))) / (12 * h);
      const double k2 = (-K(s + 2 * h) + 16 * K(s + h) - 30 * K(s) + 16 * K(s - h) - K(s - 2 * h)) / (12 * h * h);
      const double k3 = (-K(s + 3 * h3) + 8 * K(s + 2 * h3) - 13 * K(s + h3) + 13 * K(s - h3) -
                         8 * K(s - 2 * h3) + K(s - 3 * h3)) / (8 * h3 * h3 * h3);
      EXPECT_NEAR(jet[0], K(s), 1e-12);
      EXPECT_NEAR(jet[1], k1, 1e-6 * (1 + std::abs(jet[1])));
      EXPECT_NEAR(jet[2], k2, 1e-6 * (1 + std::abs(jet[2])));
      EXPECT_NEAR(jet[3], k3, 1e-6 * (1 + std::abs(jet[3])));
    }
  }
}

TEST(CurvatureJet, OrderBeyondSmoothnessIsRejected) {
  const BoundaryCurve c(circle({0, 0}, 1));
  EXPECT_THROW(c.curvature_jet(0.0, Jet::kMaxOrder), Error);
  TableConfig cfg = three_disc_config();
  cfg.obstacles[0].bumps.push_back({1, 0.2, 0.5, 1e-3, 4});
  const Table t = build_table(cfg);
  EXPECT_NO_THROW(t.curve(1).curvature_jet(0.3, 2));
  EXPECT_THROW(t.curve(1).curvature_jet(0.3, 3), Error);
}

TEST(NonEclipse, ThreeDiscsPass) {
  const auto rep = check_non_eclipse(build_table(three_disc_config()));
  EXPECT_TRUE(rep.pass);
  EXPECT_GT(rep.min_margin, 0.0);
}

TEST(NonEclipse, MiddleDiscBlocks) {
  const std::vector<Vec2> c = {{0, 0}, {5, 0}, {2.5, 0.5}};
  ASSERT_FALSE(circle_non_eclipse_oracle(c, 1.0));
  const Table t = build_table(config_of({circle(c[0], 1), circle(c[1], 1), circle(c[2], 1)}, false));
  const auto rep = check_non_eclipse(t);
  EXPECT_FALSE(rep.pass);
  EXPECT_EQ(rep.a, 1);
  EXPECT_EQ(rep.blocker, 3);
  EXPECT_EQ(rep.b, 2);
}

TEST(NonEclipse, GrownRadiiAgreeWithExactOracle) {
  const double L = 6.0;
  const std::vector<Vec2> c = {{0, 0}, {L, 0}, {L / 2, L * std::sqrt(3.0) / 2}};
  for (double r : {1.0, 1.7, 2.5, 2.7, 2.9}) {
    const Table t = build_table(config_of({circle(c[0], r), circle(c[1], r), circle(c[2], r)}, false));
    EXPECT_EQ(check_non_eclipse(t).pass, circle_non_eclipse_oracle(c, r)) << "radius " << r;
  }
  EXPECT_TRUE(circle_non_eclipse_oracle(c, 1.7));
  EXPECT_FALSE(circle_non_eclipse_oracle(c, 2.7));
}

TEST(NonEclipse, GeneralShapes) {
  ShapeParams e = ellipse(1.5, 0.8);
  e.center = {6, 0};
  e.rotation = 0.4;
  ShapeParams f = fourier({0.03, 0.02});
  f.center = {3, 5};
  const Table t = build_table(config_of({circle({0, 0}, 1), e, f}));
  EXPECT_TRUE(check_non_eclipse(t).pass);
  ShapeParams blocker = ellipse(1.0, 0.5);
  blocker.center = {3, 0.9};
  const Table bad = build_table(config_of({circle({0, 0}, 1), e, blocker}, false));
  const auto rep = check_non_eclipse(bad);
  EXPECT_FALSE(rep.pass);
  EXPECT_EQ(rep.blocker, 3);
}

TEST(Isometry, Identity) {
  const Table t = build_table(three_disc_config());
  const Table u = apply_isometry(t, 0.0, {0, 0});
  for (int id : {1, 2, 3})
    for (double s : {0.0, 1.0, 4.0}) {
      EXPECT_EQ(t.curve(id).point(s).x, u.curve(id).point(s).x);
      EXPECT_EQ(t.curve(id).point(s).y, u.curve(id).point(s).y);
    }
}

TEST(Isometry, FullTurnAndFrameCommutation) {
  TableConfig cfg = three_disc_config();
  cfg.obstacles[1].shape = ellipse(1.2, 0.9);
  cfg.obstacles[1].shape.center = {6, 0};
  cfg.obstacles[2].shape = fourier({0.02, 0.03}, {0.01});
  cfg.obstacles[2].shape.center = {3, 3 * std::sqrt(3.0)};
  const Table t = build_table(cfg);
  const Table full = apply_isometry(t, 2 * kPi, {0, 0});
  const double ang = 0.7;
  const Vec2 tr{1.3, -2.1};
  const Table moved = apply_isometry(t, ang, tr);
  std::mt19937 rng(1);
  for (int id : {1, 2, 3}) {
    std::uniform_real_distribution<double> us(0, t.curve(id).perimeter());
    for (int i = 0; i < 100; ++i) {
      const double s = us(rng);
      const Frame a = t.curve(id).frame(s), b = moved.curve(id).frame(s), c = full.curve(id).frame(s);
      const Vec2 ip = rotate(a.point, ang) + tr, it = rotate(a.tangent, ang), in = rotate(a.normal, ang);
      EXPECT_NEAR(b.point.x, ip.x, 1e-12);
      EXPECT_NEAR(b.point.y, ip.y, 1e-12);
      EXPECT_NEAR(b.tangent.x, it.x, 1e-12);
      EXPECT_NEAR(b.tangent.y, it.y, 1e-12);
      EXPECT_NEAR(b.normal.x, in.x, 1e-12);
      EXPECT_NEAR(b.normal.y, in.y, 1e-12);
      EXPECT_NEAR(b.curvature, a.curvature, 1e-12);
      EXPECT_NEAR(c.point.x, a.point.x, 1e-12);
      EXPECT_NEAR(c.point.y, a.point.y, 1e-12);
    }
  }
}

TEST(Perturb, ZeroAmplitudeIsIdentity) {
  const Table t = build_table(three_disc_config());
  const Table u = perturb_boundary(t, {1, 0.2, 0.5, 0.0, 6});
  EXPECT_TRUE(u.curve(1).is_circle());
  EXPECT_EQ(u.curve(1).perimeter(), t.curve(1).perimeter());
}

TEST(Perturb, SmallBumpKeepsConvexity) {
  const Table t = build_table(three_disc_config());
  PerturbationReport rep;
  const Table u = perturb_boundary(t, {1, 1.0, 1.3, 1e-3, 6}, &rep);
  EXPECT_GT(rep.max_curvature_deviation, 0.0);
  EXPECT_TRUE(std::isfinite(rep.max_curvature_deviation));
  EXPECT_GT(rep.min_curvature, 0.0);
  // oracle: dense curvature sampling of the new curve
  const BoundaryCurve& c = u.curve(1);
  double kmin = 1e9;
  for (int i = 0; i < 20000; ++i) kmin = std::min(kmin, c.frame(c.perimeter() * i / 20000).curvature);
  EXPECT_GT(kmin, 0.0);
  // boundary unchanged outside the support, correspondence exact there
  for (double s : {0.0, 0.5, 0.99, 1.31, 3.0, 6.0}) {
    const Vec2 a = t.curve(1).point(s);
    const Vec2 b = c.point(corresponding_s(t.curve(1), c, s));
    EXPECT_NEAR(norm(a - b), 0.0, 1e-12) << s;
  }
  // monotone correspondence
  double prev = -1;
  for (int i = 0; i < 100; ++i) {
    const double sn = corresponding_s(t.curve(1), c, 2 * kPi * i / 100);
    EXPECT_GT(sn, prev);
    prev = sn;
  }
}

TEST(Perturb, LargeBumpLosesConvexity) {
  const Table t = build_table(three_disc_config());
  try {
    perturb_boundary(t, {1, 1.0, 1.3, 0.5, 6});
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "convexity lost");
  }
  EXPECT_THROW(perturb_boundary(t, {1, 0.0, 7.0, 1e-4, 6}), Error);
  EXPECT_THROW(perturb_boundary(t, {1, 1.0, 1.0, 1e-4, 6}), Error);
}
