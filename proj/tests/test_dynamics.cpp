#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "billiards/dynamics.hpp"
#include "billiards/error.hpp"
#include "billiards/orbits.hpp"

using namespace billiards;

namespace {

const double kPi = std::numbers::pi;
const double kSqrt3 = std::numbers::sqrt3;

const Table& tri6() {
  static const Table t = build_table(three_disc_config());
  return t;
}

// tri6 with each obstacle routed through the general (non-circle) tracer:
// same discs described as Fourier shapes with no modes, plus an ellipse.
Table mixed_table() {
  TableConfig cfg;
  cfg.name = "mixed";
  cfg.non_eclipse = true;
  ObstacleConfig a, b, c;
  a.id = 1;
  a.shape.kind = ShapeKind::Ellipse;
  a.shape.semi_a = 1.2;
  a.shape.semi_b = 0.8;
  a.shape.rotation = 0.3;
  b.id = 2;
  b.shape.kind = ShapeKind::Fourier;
  b.shape.center = {6.0, 0.0};
  b.shape.radius = 1.0;
  b.shape.cos_coeffs = {0.0, 0.05};
  b.shape.sin_coeffs = {0.0, 0.0, 0.02};
  c.id = 3;
  c.shape.kind = ShapeKind::Circle;
  c.shape.center = {3.0, 3.0 * kSqrt3};
  c.shape.radius = 0.9;
  cfg.obstacles = {a, b, c};
  return build_table(cfg);
}

// Fourier circles without modes: geometrically tri6, but traced by the
// support-bracketed Newton path.
Table tri6_general() {
  TableConfig cfg = three_disc_config();
  for (ObstacleConfig& o : cfg.obstacles) {
    o.shape.kind = ShapeKind::Fourier;
    o.shape.cos_coeffs = {0.0};
  }
  return build_table(cfg);
}

const PhasePoint kAxis{1, 0.0, 0.0};
const PhasePoint kTriangle{1, kPi / 6.0, 0.5};

}  // namespace

TEST(Chord, NearestPointsOfTwoDiscs) {
  bool same = true;
  EXPECT_NEAR(chord_length(tri6(), {1, 0.0}, {2, kPi}, &same), 4.0, 1e-14);
  EXPECT_FALSE(same);
}

TEST(Chord, SameSiteIsZeroAndFlagged) {
  bool same = false;
  EXPECT_EQ(chord_length(tri6(), {2, 1.0}, {2, 1.0}, &same), 0.0);
  EXPECT_TRUE(same);
}

TEST(Chord, TriangleOrbitSegment) {
  // bounce points one unit from each center toward the centroid (3, sqrt3)
  const Vec2 p1{std::cos(kPi / 6), std::sin(kPi / 6)};
  const Vec2 p2 = Vec2{6, 0} + Vec2{std::cos(5 * kPi / 6), std::sin(5 * kPi / 6)};
  const double oracle = norm(p2 - p1);
  EXPECT_NEAR(oracle, 6.0 - kSqrt3, 1e-14);
  EXPECT_NEAR(chord_length(tri6(), {1, kPi / 6}, {2, 5 * kPi / 6}), 6.0 - kSqrt3, 1e-13);
}

TEST(Chord, DerivativesMatchFiniteDifferences) {
  const Table t = mixed_table();
  const Site a{1, 0.4}, b{2, 2.9};
  const Chord c = chord(t, a, b);
  const double h = 1e-5;
  auto H = [&](double da, double db) { return chord_length(t, {1, a.s + da}, {2, b.s + db}); };
  EXPECT_NEAR(c.d1, (H(h, 0) - H(-h, 0)) / (2 * h), 1e-9);
  EXPECT_NEAR(c.d2, (H(0, h) - H(0, -h)) / (2 * h), 1e-9);
  const double k = 1e-4;
  EXPECT_NEAR(c.d11, (H(k, 0) - 2 * H(0, 0) + H(-k, 0)) / (k * k), 1e-6);
  EXPECT_NEAR(c.d22, (H(0, k) - 2 * H(0, 0) + H(0, -k)) / (k * k), 1e-6);
  EXPECT_NEAR(c.d12, (H(k, k) - H(k, -k) - H(-k, k) + H(-k, -k)) / (4 * k * k), 1e-6);
}

TEST(BilliardMap, AxisOrbit) {
  const MapStep step = billiard_map(tri6(), kAxis);
  EXPECT_EQ(step.image.id, 2);
  EXPECT_NEAR(tri6().curve(2).offset(kPi, step.image.s), 0.0, 1e-13);
  EXPECT_NEAR(step.image.r, 0.0, 1e-14);
  EXPECT_NEAR(step.tau, 4.0, 1e-14);
  EXPECT_FALSE(step.near_tangent);
}

TEST(BilliardMap, TriangleOrbit) {
  const MapStep step = billiard_map(tri6(), kTriangle);
  EXPECT_EQ(step.image.id, 2);
  EXPECT_NEAR(tri6().curve(2).offset(5 * kPi / 6, step.image.s), 0.0, 1e-13);
  EXPECT_NEAR(step.image.r, 0.5, 1e-13);
  EXPECT_NEAR(step.tau, 6.0 - kSqrt3, 1e-13);
}

TEST(BilliardMap, EscapeAwayFromTable) {
  try {
    billiard_map(tri6(), {1, 7 * kPi / 6, 0.0});
    FAIL() << "expected escape";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Escape);
  }
}

TEST(BilliardMap, RejectsTangentInput) {
  EXPECT_THROW(billiard_map(tri6(), {1, 0.0, 1.0}), Error);
}

TEST(BilliardMap, GeneralTracerMatchesCircleFormula) {
  const Table g = tri6_general();
  for (const PhasePoint& x : sample_trapped_points(tri6(), 60, 5, 11)) {
    const MapStep a = billiard_map(tri6(), x), b = billiard_map(g, x);
    ASSERT_EQ(a.image.id, b.image.id);
    EXPECT_NEAR(tri6().curve(a.image.id).offset(a.image.s, b.image.s), 0.0, 1e-11);
    EXPECT_NEAR(a.image.r, b.image.r, 1e-11);
    EXPECT_NEAR(a.tau, b.tau, 1e-11);
  }
}

TEST(BilliardMap, TauIsChordOfEndpoints) {
  const Table t = mixed_table();
  for (const PhasePoint& x : sample_trapped_points(t, 40, 4, 3)) {
    const MapStep step = billiard_map(t, x);
    EXPECT_NEAR(step.tau, norm(step.to - step.from), 1e-14);
    EXPECT_NEAR(step.tau, chord_length(t, {x.id, x.s}, {step.image.id, step.image.s}), 1e-11);
  }
}

TEST(BilliardMap, BackwardUndoesForward) {
  const Table mixed = mixed_table();
  for (const Table* t : {&tri6(), &mixed}) {
    for (const PhasePoint& x : sample_trapped_points(*t, 50, 6, 5)) {
      const PhasePoint y = billiard_map(*t, x).image;
      const MapStep back = billiard_map(*t, y, Direction::Backward);
      EXPECT_EQ(back.image.id, x.id);
      EXPECT_NEAR(t->curve(x.id).offset(x.s, back.image.s), 0.0, 1e-10);
      EXPECT_NEAR(back.image.r, x.r, 1e-10);
      // I F I
      const PhasePoint z = involution(billiard_map(*t, involution(y)).image);
      EXPECT_NEAR(t->curve(x.id).offset(z.s, back.image.s), 0.0, 1e-14);
      EXPECT_NEAR(z.r, back.image.r, 1e-14);
    }
  }
}

TEST(Differential, AxisOrbitClosedForm) {
  const Mat2 m = billiard_map_differential(tri6(), kAxis);
  EXPECT_NEAR(m.a, -5.0, 1e-13);
  EXPECT_NEAR(m.b, -4.0, 1e-13);
  EXPECT_NEAR(m.c, -6.0, 1e-13);
  EXPECT_NEAR(m.d, -5.0, 1e-13);
  EXPECT_NEAR(m.det(), 1.0, 1e-12);
}

TEST(Differential, FiniteDifferenceJacobian) {
  for (const PhasePoint& x : {kAxis, kTriangle}) {
    const Mat2 j = phase_jacobian(tri6(), x), fd = finite_difference_jacobian(tri6(), x);
    EXPECT_LT(max_abs(j - fd), 1e-6);
  }
  const Table t = mixed_table();
  for (const PhasePoint& x : sample_trapped_points(t, 30, 4, 9)) {
    const Mat2 j = phase_jacobian(t, x), fd = finite_difference_jacobian(t, x);
    EXPECT_LT(max_abs(j - fd), 1e-6 * (1.0 + max_abs(j)));
  }
}

TEST(Differential, SymplecticAndNegativeTwist) {
  const Table t = mixed_table();
  for (const Table* tab : {&tri6(), &t}) {
    for (const PhasePoint& x : sample_trapped_points(*tab, 300, 6, 21)) {
      const Mat2 m = billiard_map_differential(*tab, x);
      EXPECT_NEAR(m.det(), 1.0, 1e-9);
      EXPECT_LT(m.b, 0.0);
    }
  }
}

TEST(Generating, ResidualsAtKnownOrbits) {
  const GeneratingResidual a = check_generating_relations(tri6(), kAxis);
  EXPECT_LT(a.max(), 1e-8);
  const GeneratingResidual b = check_generating_relations(tri6(), kTriangle);
  EXPECT_LT(b.max(), 1e-8);
}

TEST(Generating, ResidualsOnTrappedPoints) {
  const Table t = mixed_table();
  double worst = 0.0;
  for (const PhasePoint& x : sample_trapped_points(t, 300, 6, 4)) worst = std::max(worst, check_generating_relations(t, x).max());
  EXPECT_LT(worst, 1e-7);
}

TEST(Liouville, DefectAtAxisAndRandomPoints) {
  EXPECT_LT(liouville_defect(tri6(), kAxis), 1e-6);
  double worst = 0.0;
  for (const PhasePoint& x : sample_trapped_points(tri6(), 100, 6, 8)) worst = std::max(worst, liouville_defect(tri6(), x));
  EXPECT_LT(worst, 1e-5);
  const Table t = mixed_table();
  for (const PhasePoint& x : sample_trapped_points(t, 50, 5, 8)) EXPECT_LT(liouville_defect(t, x), 1e-5);
}

TEST(Propagator, FreeFlightBeforeFirstCollision) {
  const PerpPropagator p = jacobi_perp_propagator(tri6(), {kAxis, 0.0}, 2.5);
  EXPECT_EQ(p.collisions, 0);
  EXPECT_NEAR(p.matrix.a, 1.0, 0.0);
  EXPECT_NEAR(p.matrix.b, 2.5, 1e-15);
  EXPECT_NEAR(p.matrix.c, 0.0, 0.0);
  EXPECT_NEAR(p.matrix.d, 1.0, 0.0);
  // starting mid-flight shortens the window to the next collision
  const PerpPropagator q = jacobi_perp_propagator(tri6(), {kAxis, 3.0}, 0.5);
  EXPECT_EQ(q.collisions, 0);
}

TEST(Propagator, ZeroDurationIsIdentity) {
  const PerpPropagator p = jacobi_perp_propagator(tri6(), {kAxis, 0.0}, 0.0);
  EXPECT_EQ(max_abs(p.matrix - Mat2::identity()), 0.0);
}

TEST(Propagator, TwoOrbitPeriod) {
  const PerpPropagator p = jacobi_perp_propagator(tri6(), {kAxis, 0.0}, 8.0);
  EXPECT_EQ(p.collisions, 2);
  EXPECT_NEAR(p.matrix.det(), 1.0, 1e-9);
  const double rho = spectral_radius(p.matrix);
  const double expected = std::pow(5.0 + 2.0 * std::sqrt(6.0), 2);
  EXPECT_NEAR(rho / expected, 1.0, 1e-6);
  const Mat2 m = billiard_map_differential(tri6(), kAxis);
  EXPECT_NEAR(rho / spectral_radius(m * m), 1.0, 1e-6);
}

TEST(Propagator, NegativeDurationRejected) {
  EXPECT_THROW(jacobi_perp_propagator(tri6(), {kAxis, 0.0}, -1.0), Error);
}
