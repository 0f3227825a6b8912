#pragma once

#include "billiards/geometry.hpp"
#include "billiards/linalg.hpp"

namespace billiards {

/// Collision coordinates. r is the sine of the angle between the outward
/// normal and the outgoing velocity, signed so that r = dh/ds for the chord
/// length h: the outgoing unit velocity is nu n - r T.
struct PhasePoint {
  int id = 0;
  double s = 0.0;
  double r = 0.0;
  double nu() const { return std::sqrt(std::max(0.0, 1.0 - r * r)); }
};

/// Suspension coordinates: t is the time since the collision at base.
struct FlowPoint {
  PhasePoint base;
  double t = 0.0;
};

/// A boundary point without a direction.
struct Site {
  int id = 0;
  double s = 0.0;
};

/// Involution (s, r) -> (s, -r) conjugating the map to its inverse.
inline PhasePoint involution(const PhasePoint& x) { return {x.id, x.s, -x.r}; }

/// Chord between two boundary sites with the partial derivatives of its
/// length h(s0, s1).
struct Chord {
  double h = 0.0;
  Vec2 v;              // unit direction from site 0 to site 1
  Frame f0, f1;
  double d1 = 0.0;     // dh/ds0 = -<v, T0>
  double d2 = 0.0;     // dh/ds1 = <v, T1>
  double d11 = 0.0, d12 = 0.0, d22 = 0.0;
  bool same_obstacle = false;
};
Chord chord(const Table& table, Site a, Site b);
/// Euclidean distance; `same_obstacle` flags a degenerate request.
double chord_length(const Table& table, Site a, Site b, bool* same_obstacle = nullptr);

enum class Direction { Forward, Backward };

struct MapStep {
  PhasePoint image;
  double tau = 0.0;
  /// -[[(hK+nu)/nu', h/(nu nu')], [hKK' + K nu' + K' nu, (hK'+nu')/nu]]:
  /// the derivative in the reflected chart (s, -r); negative twist.
  Mat2 differential;
  /// The same derivative in (s, r): S differential S with S = diag(1, -1).
  Mat2 jacobian;
  Vec2 from, to;
  bool near_tangent = false;  // |r'| > 1 - 1e-8: differential unreliable
};

/// One bounce. Throws Escape when the outgoing ray misses every obstacle.
MapStep billiard_map(const Table& table, const PhasePoint& x, Direction dir = Direction::Forward);
/// The negative-twist differential of the forward map.
Mat2 billiard_map_differential(const Table& table, const PhasePoint& x);
/// Jacobian of the forward map in (s, r).
Mat2 phase_jacobian(const Table& table, const PhasePoint& x);
/// The differential from its ingredients: chord length h, curvatures K at
/// the start and Kp at the image, and nu, nup.
Mat2 differential_formula(double h, double K, double Kp, double nu, double nup);
inline Mat2 flip_chart(const Mat2& m) { return {m.a, -m.b, -m.c, m.d}; }

/// Outgoing unit velocity of a phase point.
Vec2 outgoing_direction(const Table& table, const PhasePoint& x);

/// Central-difference Jacobian of the forward map in (s, r) with steps
/// 1e-6 (1 + |coordinate|).
Mat2 finite_difference_jacobian(const Table& table, const PhasePoint& x);

struct GeneratingResidual {
  double r = 0.0;        // |r - dh/ds|
  double r_prime = 0.0;  // |r' + dh/ds'|
  double max() const { return std::max(r, r_prime); }
};
GeneratingResidual check_generating_relations(const Table& table, const PhasePoint& x);

/// Max mismatch between F*lambda - lambda and d tau on the coordinate
/// directions, lambda = -r ds, everything by central differences.
double liouville_defect(const Table& table, const PhasePoint& x);

struct PerpPropagator {
  Mat2 matrix;  // acts on (transverse offset, transverse velocity)
  double elapsed = 0.0;
  int collisions = 0;
};
/// Product of free-flight factors [[1, t], [0, 1]] and collision factors
/// -[[1, 0], [2K/nu, 1]] along the flow for `duration`. Collisions that
/// land within 1e-9 of the window end are included.
PerpPropagator jacobi_perp_propagator(const Table& table, const FlowPoint& start, double duration);

}  // namespace billiards
