#pragma once

#include <array>
#include <vector>

#include "billiards/orbits.hpp"

namespace billiards {

/// Corners x0, x1, x2, x3 on one obstacle: x1 = [x0, x2] (future of x0,
/// past of x2) and x3 = [x2, x0]. The codes certify x1 on W^s(x0),
/// x2 on W^u(x1), x3 on W^s(x2) and x0 on W^u(x3).
struct Quadrilateral {
  std::array<CodedPoint, 4> corners;
  int obstacle = 0;
  // flank blocks when x0 (x2) is the periodic point starting the block
  Word periodic0, periodic2;
  const CodedPoint& operator[](int i) const { return corners[static_cast<std::size_t>(i)]; }
};

Quadrilateral make_quadrilateral(const Table& table, const InfiniteCode& c0, const InfiniteCode& c2, int W = -1);
/// x0 and x2 are the orbit points starting the blocks p0 and p2, which
/// must begin with the same symbol.
Quadrilateral periodic_quadrilateral(const Table& table, const Word& p0, const Word& p2, int W = -1);
/// (x1, x0, x3, x2): same boundary traversed backwards.
Quadrilateral reversed_orientation(const Table& table, const Quadrilateral& q);
/// (I x0, I x3, I x2, I x1) with I(s, r) = (s, -r).
Quadrilateral involution_image(const Table& table, const Quadrilateral& q);

struct Holonomy {
  double value = 0.0;
  double tail = 0.0;  // bound on the omitted terms
  int depth = 0;
};
/// sum_{j=0}^{depth-1} tau(F^j z1) - tau(F^j z0); the codes must share
/// their futures.
Holonomy stable_holonomy(const Table& table, const InfiniteCode& z0, const InfiniteCode& z1, int depth = 60);
/// sum_{j=-depth}^{-1} tau(F^j z0) - tau(F^j z1); shared pasts.
Holonomy unstable_holonomy(const Table& table, const InfiniteCode& z0, const InfiniteCode& z1, int depth = 60);

struct DisplacementReport {
  std::array<double, 4> holonomies{};  // Hs(x0,x1), Hu(x1,x2), Hs(x2,x3), Hu(x3,x0)
  double H = 0.0;
  double tail = 0.0;
  int depth = 0;
  // sum_{j=-n}^{n-1} over clamped windows of half-width n around each corner
  double H_symmetric = 0.0;
  double symmetric_change = 0.0;  // |value at n - value at n/2|
  int symmetric_n = 0;
};
DisplacementReport temporal_displacement(const Table& table, const Quadrilateral& q, int depth = 60);

struct Approximant {
  int n = 0;
  Word word;
  int bounces = 0;
  int blocks = 0;
  double length = 0.0;
  double value = 0.0;  // T(x^n) - (4n+1)(T0 + T2)
  double residual = 0.0;
};
/// Needs a quad built by periodic_quadrilateral.
Approximant periodic_approx_displacement(const Table& table, const Quadrilateral& q, int n);

struct AreaResult {
  double area = 0.0;                // circulation of lambda = -r ds
  double error = 0.0;               // panel-doubling difference
  std::array<double, 4> arcs{};     // lambda integrals x0->x1, x1->x2, x2->x3, x3->x0
  int panels = 0;
};
/// Circulation along the four leaf arcs, each a graph r(s) from the
/// variational leaf solver, by composite Gauss-Legendre quadrature.
AreaResult quadrilateral_area(const Table& table, const Quadrilateral& q, int panels = 4);

struct SmallQuadScale {
  double target = 0.0;
  double dx1 = 0.0, dx2 = 0.0, dy = 0.0;  // s offsets of x1, x2, y0 from x0
  double area1 = 0.0, area2 = 0.0;        // Q(y0, x1), Q(y0, x2)
  double density = 0.0;                   // area1 / (dx1 dy)
  double area_ratio = 0.0;                // area2 / area1
  double side_ratio = 0.0;                // dx2 / dx1
  double ratio_error = 0.0;               // |area_ratio / side_ratio - 1|
  double holonomy_derivative = 0.0;       // (s([y0,x1]) - s(x1)) / dy
};
struct SmallQuadReport {
  InfiniteCode base;
  std::vector<SmallQuadScale> scales;
  double slope_gap = 0.0;  // |k_s - k_u| at x0: the limit of density in (s, r)
  double order = 0.0;      // fitted exponent of ratio_error against the scale
};
/// x1, x2 on W^s(x0) and y0 on W^u(x0) are Cantor points whose s offsets
/// are closest to target and fraction * target.
SmallQuadReport small_quad_asymptotics(const Table& table, const InfiniteCode& base, const std::vector<double>& targets,
                                       double fraction = 0.5);

/// Cantor points sharing the future (Stable) or past (Unstable) of `code`
/// and differing at depth 1..max_depth, with their s offsets from the base.
struct LeafNeighbor {
  InfiniteCode code;
  double offset = 0.0;
  int depth = 0;
};
std::vector<LeafNeighbor> leaf_neighbors(const Table& table, const InfiniteCode& code, Stability which,
                                         int max_depth = 24);

}  // namespace billiards
