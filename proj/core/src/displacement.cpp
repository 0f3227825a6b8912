#include "billiards/displacement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "billiards/error.hpp"
#include "billiards/quadrature.hpp"

namespace billiards {

namespace {

long long mod(long long a, long long n) { return ((a % n) + n) % n; }

bool futures_agree(const InfiniteCode& a, const InfiniteCode& b) {
  const long long K = std::max<long long>({a.future_start(), b.future_start(), 0}) +
                      std::lcm<long long>(static_cast<long long>(a.future.size()), static_cast<long long>(b.future.size()));
  for (long long k = 0; k <= K; ++k)
    if (a.symbol(k) != b.symbol(k)) return false;
  return true;
}

bool pasts_agree(const InfiniteCode& a, const InfiniteCode& b) {
  return futures_agree(a.reversed().shifted(1), b.reversed().shifted(1));
}

int holonomy_window(const InfiniteCode& code, int depth) { return default_window(code) + depth; }

double tail_rate(const Table& table, const Word& tail_word) {
  return std::exp(-lyapunov_exponent(solve_periodic_orbit(table, tail_word)));
}

// Terms t_j = tau_j(b) - tau_j(a) for j = 0..depth-1 (stable) or
// tau_j(a) - tau_j(b) for j = -depth..-1 (unstable), summed from the tail.
Holonomy holonomy_from(const Table& table, const CodeTrajectory& a, const CodeTrajectory& b, Stability which,
                       int depth, double q) {
  const bool stable = which == Stability::Stable;
  std::vector<double> terms;
  for (int i = 0; i < depth; ++i) {
    const long long k = stable ? i : -1 - i;
    terms.push_back(stable ? b.tau(table, k) - a.tau(table, k) : a.tau(table, k) - b.tau(table, k));
  }
  Holonomy h;
  h.depth = depth;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) h.value += *it;
  if (depth >= 2) {
    const double last = std::max(std::abs(terms[depth - 1]), std::abs(terms[depth - 2]) * q);
    h.tail = last * q / (1.0 - q);
  }
  return h;
}

Holonomy holonomy(const Table& table, const InfiniteCode& z0, const InfiniteCode& z1, Stability which, int depth) {
  if (depth < 1) throw Error(ErrorKind::InvalidInput, "holonomy depth must be positive");
  const bool stable = which == Stability::Stable;
  if (stable ? !futures_agree(z0, z1) : !pasts_agree(z0, z1))
    throw Error(ErrorKind::InvalidInput, stable ? "codes do not share a future" : "codes do not share a past");
  const int W = std::max(holonomy_window(z0, depth), holonomy_window(z1, depth));
  const CodeTrajectory a = solve_code_point(table, z0, W), b = solve_code_point(table, z1, W);
  return holonomy_from(table, a, b, which, depth, tail_rate(table, stable ? z0.future : z0.past));
}

// sum_{j=-n}^{n-1} of tau along the clamped window of half-width n
double symmetric_sum(const Table& table, const InfiniteCode& code, int n) {
  const CodeTrajectory t = solve_code_point(table, code, n);
  double acc = 0.0;
  for (long long k = -n; k < n; ++k) acc += t.tau(table, k);
  return acc;
}

double symmetric_displacement(const Table& table, const Quadrilateral& q, int n) {
  // pair the corners so each difference stays small
  double acc = 0.0;
  acc += symmetric_sum(table, q[1].code, n) - symmetric_sum(table, q[0].code, n);
  acc += symmetric_sum(table, q[3].code, n) - symmetric_sum(table, q[2].code, n);
  return acc;
}

// Code equal to `c` at times >= t0, with `prefix` just before t0 and the
// periodic `past` before that.
InfiniteCode with_past(const InfiniteCode& c, long long t0, const Word& prefix, const Word& past) {
  const long long f = std::max(c.future_start(), t0);
  InfiniteCode out;
  out.center = concat(prefix, f > t0 ? c.window(t0, f - 1) : Word{});
  out.origin = static_cast<int>(static_cast<long long>(prefix.size()) - t0);
  const long long phase = f + c.origin - static_cast<long long>(c.center.size());
  out.future = rotated(c.future, static_cast<int>(mod(phase, static_cast<long long>(c.future.size()))));
  out.past = past;
  return out;
}

double arc_integral(const Table& table, const InfiniteCode& code, Stability which, double s_ref, double r_ref,
                    double a, double b, int panels) {
  const BoundaryCurve& curve = table.curve(code.symbol(0));
  std::vector<double> warm;
  const auto f = [&](double t) {
    const LeafPoint lp = leaf_point(table, code, which, curve.wrap(s_ref + t), -1, warm.empty() ? nullptr : &warm);
    warm.clear();
    for (const Site& s : lp.sites) warm.push_back(s.s);
    return -(lp.point.r - r_ref);
  };
  double acc = 0.0;
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) acc += integrate_gl(f, a + i * h, a + (i + 1) * h, 10);
  return acc;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Quadrilaterals

Quadrilateral make_quadrilateral(const Table& table, const InfiniteCode& c0, const InfiniteCode& c2, int W) {
  if (c0.symbol(0) != c2.symbol(0))
    throw Error(ErrorKind::Inadmissible, "quadrilateral corners must share the obstacle at time 0");
  const InfiniteCode c1 = InfiniteCode::splice(c0, c2), c3 = InfiniteCode::splice(c2, c0);
  for (const InfiniteCode* c : {&c0, &c1, &c2, &c3})
    if (!c->admissible()) throw Error(ErrorKind::Inadmissible, "corner code " + to_string(*c) + " is not admissible");
  Quadrilateral q;
  q.obstacle = c0.symbol(0);
  q.corners = {make_coded_point(table, c0, W), make_coded_point(table, c1, W), make_coded_point(table, c2, W),
               make_coded_point(table, c3, W)};
  return q;
}

Quadrilateral periodic_quadrilateral(const Table& table, const Word& p0, const Word& p2, int W) {
  if (p0.empty() || p2.empty() || p0[0] != p2[0])
    throw Error(ErrorKind::InvalidInput, "periodic blocks must start with the same symbol");
  Quadrilateral q = make_quadrilateral(table, InfiniteCode::periodic(p0), InfiniteCode::periodic(p2), W);
  q.periodic0 = p0;
  q.periodic2 = p2;
  return q;
}

Quadrilateral reversed_orientation(const Table& table, const Quadrilateral& q) {
  return make_quadrilateral(table, q[1].code, q[3].code);
}

Quadrilateral involution_image(const Table& table, const Quadrilateral& q) {
  return make_quadrilateral(table, q[0].code.reversed(), q[2].code.reversed());
}

// ---------------------------------------------------------------------------
// Holonomies and displacement

Holonomy stable_holonomy(const Table& table, const InfiniteCode& z0, const InfiniteCode& z1, int depth) {
  return holonomy(table, z0, z1, Stability::Stable, depth);
}

Holonomy unstable_holonomy(const Table& table, const InfiniteCode& z0, const InfiniteCode& z1, int depth) {
  return holonomy(table, z0, z1, Stability::Unstable, depth);
}

DisplacementReport temporal_displacement(const Table& table, const Quadrilateral& q, int depth) {
  if (depth < 2) throw Error(ErrorKind::InvalidInput, "displacement depth must be at least 2");
  int W = 0;
  for (const CodedPoint& c : q.corners) W = std::max(W, holonomy_window(c.code, depth));
  std::array<CodeTrajectory, 4> t;
  for (int i = 0; i < 4; ++i) t[static_cast<std::size_t>(i)] = solve_code_point(table, q[i].code, W);
  const double q0s = tail_rate(table, q[0].code.future), q0u = tail_rate(table, q[0].code.past);
  const double q2s = tail_rate(table, q[2].code.future), q2u = tail_rate(table, q[2].code.past);
  const Holonomy parts[4] = {holonomy_from(table, t[0], t[1], Stability::Stable, depth, q0s),
                             holonomy_from(table, t[1], t[2], Stability::Unstable, depth, q2u),
                             holonomy_from(table, t[2], t[3], Stability::Stable, depth, q2s),
                             holonomy_from(table, t[3], t[0], Stability::Unstable, depth, q0u)};
  DisplacementReport r;
  r.depth = depth;
  for (int i = 0; i < 4; ++i) {
    r.holonomies[static_cast<std::size_t>(i)] = parts[i].value;
    r.H += parts[i].value;
    r.tail += parts[i].tail;
  }
  r.symmetric_n = depth;
  r.H_symmetric = symmetric_displacement(table, q, depth);
  r.symmetric_change = std::abs(r.H_symmetric - symmetric_displacement(table, q, std::max(depth / 2, 1)));
  return r;
}

Approximant periodic_approx_displacement(const Table& table, const Quadrilateral& q, int n) {
  if (q.periodic0.empty() || q.periodic2.empty())
    throw Error(ErrorKind::InvalidInput, "periodic approximation needs periodic corners x0 and x2");
  if (n < 1) throw Error(ErrorKind::InvalidInput, "n must be at least 1");
  const Bridge b1{{}, q.periodic0, {}}, b3{{}, q.periodic2, {}};
  const BridgeWord bw = bridge_word(q.periodic0, q.periodic2, b1, b3, n);
  const PeriodicOrbit orbit = solve_periodic_orbit(table, bw.word);
  const double T0 = solve_periodic_orbit(table, q.periodic0).length;
  const double T2 = solve_periodic_orbit(table, q.periodic2).length;
  Approximant a;
  a.n = n;
  a.word = bw.word;
  a.bounces = orbit.period();
  a.blocks = bw.blocks;
  a.length = orbit.length;
  a.residual = orbit.residual;
  a.value = orbit.length - (4.0 * n + 1.0) * (T0 + T2);
  return a;
}

AreaResult quadrilateral_area(const Table& table, const Quadrilateral& q, int panels) {
  if (panels < 1) throw Error(ErrorKind::InvalidInput, "need at least one panel");
  const BoundaryCurve& curve = table.curve(q.obstacle);
  const double s_ref = q[0].point.s, r_ref = q[0].point.r;
  double t[5];
  for (int i = 0; i < 4; ++i) t[i] = curve.offset(s_ref, q[i].point.s);
  t[4] = t[0];
  // stable leaves carry x0 -> x1 and x2 -> x3, unstable leaves the others
  const Stability kind[4] = {Stability::Stable, Stability::Unstable, Stability::Stable, Stability::Unstable};
  const int leaf_of[4] = {0, 1, 2, 3};
  AreaResult out;
  out.panels = 2 * panels;
  double coarse = 0.0;
  for (int i = 0; i < 4; ++i) {
    const InfiniteCode& code = q[leaf_of[i]].code;
    const double fine_i = arc_integral(table, code, kind[i], s_ref, r_ref, t[i], t[i + 1], 2 * panels);
    coarse += arc_integral(table, code, kind[i], s_ref, r_ref, t[i], t[i + 1], panels);
    out.area += fine_i;
    out.arcs[static_cast<std::size_t>(i)] = fine_i - r_ref * (t[i + 1] - t[i]);
  }
  out.error = std::abs(out.area - coarse);
  return out;
}

// ---------------------------------------------------------------------------
// Small quadrilaterals

std::vector<LeafNeighbor> leaf_neighbors(const Table& table, const InfiniteCode& code, Stability which,
                                         int max_depth) {
  if (which == Stability::Unstable) {
    std::vector<LeafNeighbor> out = leaf_neighbors(table, code.reversed(), Stability::Stable, max_depth);
    for (LeafNeighbor& n : out) n.code = n.code.reversed();
    return out;
  }
  const std::vector<int> alphabet = table.alphabet();
  const BoundaryCurve& curve = table.curve(code.symbol(0));
  const double s0 = code_point(table, code).s;
  std::vector<LeafNeighbor> out;
  for (int m = 0; m < max_depth; ++m) {
    // agree at times >= -m, differ at -m-1
    for (int b : alphabet) {
      if (b == code.symbol(-m) || b == code.symbol(-m - 1)) continue;
      for (int a : alphabet) {
        if (a == b) continue;
        for (int x : alphabet)
          for (int y : alphabet) {
            if (x == y || y == a) continue;
            const InfiniteCode c = with_past(code, -m, Word{a, b}, Word{x, y});
            if (!c.admissible()) continue;
            LeafNeighbor n;
            n.code = c;
            n.depth = m + 1;
            n.offset = curve.offset(s0, code_point(table, c).s);
            out.push_back(n);
          }
      }
    }
  }
  return out;
}

SmallQuadReport small_quad_asymptotics(const Table& table, const InfiniteCode& base, const std::vector<double>& targets,
                                       double fraction) {
  if (targets.empty()) throw Error(ErrorKind::InvalidInput, "no scales requested");
  if (!(fraction > 0.0 && fraction < 1.0)) throw Error(ErrorKind::InvalidInput, "fraction must lie in (0, 1)");
  SmallQuadReport rep;
  rep.base = base;
  const BoundaryCurve& curve = table.curve(base.symbol(0));
  const PhasePoint x0 = code_point(table, base);
  const double smallest = *std::min_element(targets.begin(), targets.end());
  int depth = 4;
  {
    const double lam = std::exp(lyapunov_exponent(solve_periodic_orbit(table, base.future)));
    depth += static_cast<int>(std::ceil(std::log(1.0 / (fraction * smallest)) / std::log(lam)));
  }
  const std::vector<LeafNeighbor> stab = leaf_neighbors(table, base, Stability::Stable, depth);
  const std::vector<LeafNeighbor> unst = leaf_neighbors(table, base, Stability::Unstable, depth);
  // work on the side of x0 that carries more Cantor points
  const auto side_of = [](const std::vector<LeafNeighbor>& pool) {
    int balance = 0;
    for (const LeafNeighbor& n : pool) balance += n.offset > 0.0 ? 1 : -1;
    return balance >= 0 ? 1.0 : -1.0;
  };
  const double sx = side_of(stab), sy = side_of(unst);
  const auto nearest = [](const std::vector<LeafNeighbor>& pool, double side, double target,
                          double below) -> const LeafNeighbor& {
    const LeafNeighbor* best = nullptr;
    double gap = 0.0;
    for (const LeafNeighbor& n : pool) {
      const double d = side * n.offset;
      if (!(d > 0.0) || !(d < below)) continue;
      const double g = std::abs(std::log(d / target));
      if (!best || g < gap) best = &n, gap = g;
    }
    if (!best || gap > std::log(4.0))
      throw Error(ErrorKind::Insufficient, "no Cantor point near the requested scale");
    return *best;
  };
  // leaf slopes at x0 by central differences
  const double hs = 1e-5;
  const auto slope = [&](Stability st) {
    const double rp = leaf_point(table, base, st, curve.wrap(x0.s + hs)).point.r;
    const double rm = leaf_point(table, base, st, curve.wrap(x0.s - hs)).point.r;
    return (rp - rm) / (2.0 * hs);
  };
  rep.slope_gap = slope(Stability::Unstable) - slope(Stability::Stable);

  std::vector<double> lx, ly;
  for (double target : targets) {
    const double inf = std::numeric_limits<double>::infinity();
    const LeafNeighbor& x1 = nearest(stab, sx, target, inf);
    // x2 strictly between x0 and x1
    const LeafNeighbor& x2 = nearest(stab, sx, fraction * sx * x1.offset, sx * x1.offset * (1.0 - 1e-9));
    const LeafNeighbor& y0 = nearest(unst, sy, target, inf);
    const Quadrilateral q1 = make_quadrilateral(table, base, InfiniteCode::splice(y0.code, x1.code));
    const Quadrilateral q2 = make_quadrilateral(table, base, InfiniteCode::splice(y0.code, x2.code));
    SmallQuadScale sc;
    sc.target = target;
    sc.dx1 = x1.offset;
    sc.dx2 = x2.offset;
    sc.dy = y0.offset;
    sc.area1 = quadrilateral_area(table, q1).area;
    sc.area2 = quadrilateral_area(table, q2).area;
    sc.density = sc.area1 / (sc.dx1 * sc.dy);
    sc.area_ratio = sc.area2 / sc.area1;
    sc.side_ratio = sc.dx2 / sc.dx1;
    sc.ratio_error = std::abs(sc.area_ratio / sc.side_ratio - 1.0);
    // q1 corner 2 is [y0, x1]; its offset from x1 against that of y0 from x0
    sc.holonomy_derivative = curve.offset(q1[1].point.s, q1[2].point.s) / sc.dy;
    rep.scales.push_back(sc);
    if (sc.ratio_error > 0.0) {
      lx.push_back(std::log(target));
      ly.push_back(std::log(sc.ratio_error));
    }
  }
  if (lx.size() >= 2) rep.order = least_squares_slope(lx, ly);
  return rep;
}

}  // namespace billiards
