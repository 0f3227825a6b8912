#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "billiards/jet.hpp"
#include "billiards/linalg.hpp"

namespace billiards {

enum class ShapeKind { Circle, Ellipse, Fourier };

const char* to_string(ShapeKind kind);

/// Local shape in its own frame plus a placement (rotation, then center).
/// Fourier shapes are polar graphs rho(u) = radius * (1 + sum a_k cos ku +
/// b_k sin ku), with a_k = cos_coeffs[k-1], b_k = sin_coeffs[k-1].
struct ShapeParams {
  ShapeKind kind = ShapeKind::Circle;
  Vec2 center;
  double rotation = 0.0;
  double radius = 1.0;
  double semi_a = 1.0;
  double semi_b = 1.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
};

/// Normal bump on one obstacle. The support [s_a, s_b] is given in the
/// arclength of the curve the bump is applied to; s_b may exceed the
/// perimeter to wrap through s = 0. Profile (1 - x^2)^(order+1) on x in
/// [-1, 1], so the displacement is C^order at the support endpoints.
struct BumpPerturbation {
  int target_id = 0;
  double s_a = 0.0;
  double s_b = 0.0;
  double amplitude = 0.0;
  int order = 6;
};

struct Frame {
  Vec2 point;
  Vec2 tangent;
  Vec2 normal;  // outward
  double curvature = 0.0;
};

/// Cumulative arclength of a closed parametric curve over u in [0, 2pi]:
/// panel edges, the arclength accumulated at each edge, and per panel the
/// Legendre coefficients of the speed interpolated at the Gauss nodes.
struct ArclengthTable {
  static constexpr int kNodes = 10;
  std::vector<double> breaks;
  std::vector<double> cum;
  std::vector<std::array<double, kNodes>> legendre;
  double total() const { return cum.empty() ? 0.0 : cum.back(); }
  /// Arclength at u and, optionally, ds/du there.
  double s_of_u(double u, double* speed = nullptr) const;
  double u_of_s(double s) const;
};

/// A closed strictly convex curve, counterclockwise, parametrized by
/// arclength s in [0, perimeter). Immutable after construction.
class BoundaryCurve {
 public:
  struct Bump {
    double center = 0.0;      // base arclength
    double half_width = 0.0;  // base arclength
    double amplitude = 0.0;
    int order = 6;
  };

  BoundaryCurve() : BoundaryCurve(ShapeParams{}) {}
  explicit BoundaryCurve(ShapeParams params, std::vector<Bump> bumps = {});

  const ShapeParams& params() const { return params_; }
  const std::vector<Bump>& bumps() const { return bumps_; }
  double perimeter() const { return perimeter_; }
  double wrap(double s) const;
  /// Signed shortest offset s1 - s0 on the circle of length perimeter().
  double offset(double s0, double s1) const;

  Vec2 point(double s) const;
  Frame frame(double s) const;
  /// K(s), K'(s), ..., K^(m)(s) in arclength.
  std::vector<double> curvature_jet(double s, int order) const;
  /// Highest curvature-jet order guaranteed by the smoothness class.
  int max_jet_order() const;
  /// Smoothness class k of the boundary (large for analytic shapes).
  int smoothness() const;

  /// Support function max_s <d, P(s)> (d need not be unit); also the
  /// maximizing s when requested.
  double support(Vec2 d, double* argmax = nullptr) const;
  /// Minimum curvature over a dense sample.
  double min_curvature(int samples = 10000) const;

  /// Arclength <-> internal parameter (angle-like, in [0, 2pi)).
  double param_of(double s) const;
  double arclength_of(double u) const;
  /// Point and first two u-derivatives, in placed coordinates.
  void eval_param(double u, Vec2& p, Vec2& dp, Vec2& ddp) const;

  bool is_circle() const { return circle_; }
  /// Same shape moved by a rigid motion; arclength coordinates carry over.
  BoundaryCurve moved(double angle, Vec2 translation) const;
  /// Base arclength of the unbumped shape at a parameter.
  double base_arclength_of(double u) const;
  double base_perimeter() const { return base_perimeter_; }

 private:
  // local (unplaced) point jets of the curve at parameter jet u
  void local_jets(const Jet& u, Jet& x, Jet& y) const;
  void base_jets(const Jet& u, Jet& x, Jet& y) const;
  double speed(double u, bool base) const;
  ArclengthTable build_table(bool base, const std::vector<double>& extra_breaks) const;
  Vec2 place(Vec2 local) const;
  Vec2 place_dir(Vec2 local) const;

  ShapeParams params_;
  std::vector<Bump> bumps_;
  bool circle_ = false;  // closed-form fast path
  double cos_rot_ = 1.0, sin_rot_ = 0.0;
  double perimeter_ = 0.0;
  double base_perimeter_ = 0.0;
  ArclengthTable base_table_;  // only for bumped non-circles
  ArclengthTable table_;
};

struct Obstacle {
  int id = 0;
  BoundaryCurve curve;
};

struct ObstacleConfig {
  int id = 0;
  ShapeParams shape;
  std::vector<BumpPerturbation> bumps;  // applied in order
};

struct TableConfig {
  std::string name = "table";
  bool non_eclipse = true;
  std::vector<ObstacleConfig> obstacles;
};

class Table {
 public:
  Table(std::string name, std::vector<Obstacle> obstacles, bool non_eclipse);

  const std::string& name() const { return name_; }
  bool non_eclipse() const { return non_eclipse_; }
  std::size_t size() const { return obstacles_.size(); }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  const Obstacle& obstacle(int id) const;
  const BoundaryCurve& curve(int id) const { return obstacle(id).curve; }
  bool has(int id) const;
  std::vector<int> alphabet() const;
  double total_perimeter() const;
  /// Largest distance of any boundary point from the origin.
  double extent() const;

 private:
  std::string name_;
  bool non_eclipse_ = true;
  std::vector<Obstacle> obstacles_;
  std::vector<int> index_;  // id -> position, -1 if absent
};

/// Validates and builds: >= 3 obstacles, distinct ids, strict convexity,
/// pairwise disjoint, and non-eclipse when the flag is set.
Table build_table(const TableConfig& config);

/// The equilateral three-disc table used throughout the tests: unit discs
/// at (0,0), (L,0), (L/2, L sqrt3/2), ids 1, 2, 3.
TableConfig three_disc_config(double separation = 6.0, double radius = 1.0);

Frame boundary_frame(const Table& table, int id, double s);
std::vector<double> curvature_jet(const Table& table, int id, double s, int order);

/// Positive distance between two obstacles, negative if they overlap.
double obstacle_gap(const BoundaryCurve& a, const BoundaryCurve& b);

struct EclipseReport {
  bool pass = true;
  // first offending triple: hull of (a, b) meets blocker
  int a = 0, blocker = 0, b = 0;
  double min_margin = 0.0;  // smallest certified separation over all triples
};
EclipseReport check_non_eclipse(const Table& table);

/// Rotation about the origin by angle, then translation.
Table apply_isometry(const Table& table, double angle, Vec2 translation);
/// Same obstacles under new ids; `ids` maps every old id to a new one.
Table relabel_table(const Table& table, const std::map<int, int>& ids);

struct PerturbationReport {
  double max_curvature_deviation = 0.0;
  double perimeter_change = 0.0;
  double min_curvature = 0.0;
};
Table perturb_boundary(const Table& table, const BumpPerturbation& bump,
                       PerturbationReport* report = nullptr);
/// New-table arclength of the boundary point with old arclength s_old;
/// monotone and exact outside the bump support.
double corresponding_s(const BoundaryCurve& before, const BoundaryCurve& after, double s_old);

}  // namespace billiards
