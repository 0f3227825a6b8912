#include "billiards/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "billiards/error.hpp"

namespace billiards {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTangency = 1.0 - 1e-8;

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  double s = 0.0;
  int id = 0;
};

// First intersection of the ray p + t v (t > 0) with a circle-shaped curve.
bool hit_circle(const BoundaryCurve& c, Vec2 p, Vec2 v, Hit& out) {
  const Vec2 rel = p - c.params().center;
  const double R = c.params().radius;
  const double b = dot(v, rel);
  const double q = dot(rel, rel) - R * R;
  const double disc = b * b - q;
  if (disc < 0.0) return false;
  // entry root, computed without cancellation
  const double root = std::sqrt(disc);
  const double t = b < 0.0 ? q / (-b + root) : -b - root;
  if (!(t > 0.0)) return false;
  const Vec2 hit = rel + t * v;
  out.t = t;
  out.s = c.wrap(R * (std::atan2(hit.y, hit.x) - c.params().rotation));
  return true;
}

// Root of g(u) = <P(u), w> - c on [lo, hi] where g changes sign, g(lo) has
// sign `lo_sign`.
double monotone_root(const BoundaryCurve& curve, Vec2 w, double c, double lo, double hi, double lo_sign) {
  double u = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    Vec2 p, dp, ddp;
    curve.eval_param(u, p, dp, ddp);
    const double g = dot(p, w) - c, dg = dot(dp, w);
    if (g == 0.0) return u;
    if (g * lo_sign > 0.0) lo = u;
    else hi = u;
    double next = dg != 0.0 ? u - g / dg : 0.5 * (lo + hi);
    if (!(next > std::min(lo, hi) && next < std::max(lo, hi))) next = 0.5 * (lo + hi);
    const double step = std::abs(next - u);
    u = next;
    if (step < 1e-15 * (1.0 + std::abs(u))) break;
  }
  return u;
}

bool hit_general(const BoundaryCurve& curve, Vec2 p, Vec2 v, Hit& out) {
  const Vec2 w{-v.y, v.x};
  const double c = dot(p, w);
  double s_max = 0.0, s_min = 0.0;
  const double hmax = curve.support(w, &s_max);
  const double hmin = -curve.support(-w, &s_min);
  if (!(c < hmax && c > hmin)) return false;
  const double u_max = curve.param_of(s_max);
  double u_min = curve.param_of(s_min);
  if (u_min < u_max) u_min += kTwoPi;
  const double u_roots[2] = {monotone_root(curve, w, c, u_max, u_min, 1.0),
                             monotone_root(curve, w, c, u_min, u_max + kTwoPi, -1.0)};
  bool found = false;
  for (double u : u_roots) {
    Vec2 q, dq, ddq;
    curve.eval_param(u, q, dq, ddq);
    const double t = dot(q - p, v);
    if (t > 0.0 && t < out.t) {
      out.t = t;
      out.s = curve.arclength_of(u);
      found = true;
    }
  }
  return found;
}

Mat2 free_flight(double t) { return {1.0, t, 0.0, 1.0}; }

}  // namespace

Chord chord(const Table& table, Site a, Site b) {
  Chord c;
  c.same_obstacle = a.id == b.id;
  c.f0 = table.curve(a.id).frame(a.s);
  c.f1 = table.curve(b.id).frame(b.s);
  const Vec2 d = c.f1.point - c.f0.point;
  c.h = norm(d);
  if (c.h == 0.0) return c;
  c.v = (1.0 / c.h) * d;
  const double vt0 = dot(c.v, c.f0.tangent), vt1 = dot(c.v, c.f1.tangent);
  c.d1 = -vt0;
  c.d2 = vt1;
  c.d11 = (1.0 - c.d1 * c.d1) / c.h + c.f0.curvature * dot(c.v, c.f0.normal);
  c.d22 = (1.0 - c.d2 * c.d2) / c.h - c.f1.curvature * dot(c.v, c.f1.normal);
  c.d12 = (-dot(c.f0.tangent, c.f1.tangent) + vt0 * vt1) / c.h;
  return c;
}

double chord_length(const Table& table, Site a, Site b, bool* same_obstacle) {
  if (same_obstacle) *same_obstacle = a.id == b.id;
  return norm(table.curve(b.id).point(b.s) - table.curve(a.id).point(a.s));
}

Vec2 outgoing_direction(const Table& table, const PhasePoint& x) {
  const Frame f = table.curve(x.id).frame(x.s);
  return x.nu() * f.normal - x.r * f.tangent;
}

Mat2 differential_formula(double h, double K, double Kp, double nu, double nup) {
  return {-(h * K + nu) / nup, -h / (nu * nup), -(h * K * Kp + K * nup + Kp * nu), -(h * Kp + nup) / nu};
}

MapStep billiard_map(const Table& table, const PhasePoint& x, Direction dir) {
  if (dir == Direction::Backward) {
    MapStep fwd = billiard_map(table, involution(x), Direction::Forward);
    MapStep back;
    back.image = involution(fwd.image);
    back.tau = fwd.tau;
    back.from = fwd.from;
    back.to = fwd.to;
    back.near_tangent = fwd.near_tangent;
    // d(I F I) = S J S in (s, r); in the reflected chart that is J itself
    back.jacobian = flip_chart(fwd.jacobian);
    back.differential = fwd.jacobian;
    return back;
  }
  if (!(std::abs(x.r) < 1.0)) throw Error(ErrorKind::InvalidInput, "phase point needs |r| < 1");
  const BoundaryCurve& own = table.curve(x.id);
  const Frame f = own.frame(x.s);
  const double nu = x.nu();
  const Vec2 v = nu * f.normal - x.r * f.tangent;
  Hit best;
  for (const Obstacle& o : table.obstacles()) {
    if (o.id == x.id) continue;
    Hit h;
    const bool ok = o.curve.is_circle() ? hit_circle(o.curve, f.point, v, h) : hit_general(o.curve, f.point, v, h);
    if (ok && h.t < best.t) {
      best = h;
      best.id = o.id;
    }
  }
  if (!std::isfinite(best.t)) throw Error(ErrorKind::Escape, "ray escapes the table");
  const Frame g = table.curve(best.id).frame(best.s);
  MapStep step;
  step.from = f.point;
  step.to = g.point;
  step.tau = norm(g.point - f.point);
  // reflection keeps the tangential component, so r' = -<v, T'>
  const double rp = -dot(v, g.tangent);
  step.image = {best.id, best.s, rp};
  step.near_tangent = std::abs(rp) > kTangency;
  const double nup = step.image.nu();
  step.differential = differential_formula(step.tau, f.curvature, g.curvature, nu, nup);
  step.jacobian = flip_chart(step.differential);
  return step;
}

Mat2 billiard_map_differential(const Table& table, const PhasePoint& x) {
  return billiard_map(table, x).differential;
}

Mat2 phase_jacobian(const Table& table, const PhasePoint& x) { return billiard_map(table, x).jacobian; }

Mat2 finite_difference_jacobian(const Table& table, const PhasePoint& x) {
  const double hs = 1e-6 * (1.0 + std::abs(x.s));
  const double hr = 1e-6 * (1.0 + std::abs(x.r));
  auto image = [&](double ds, double dr) {
    return billiard_map(table, {x.id, x.s + ds, x.r + dr}).image;
  };
  const PhasePoint sp = image(hs, 0), sm = image(-hs, 0), rp = image(0, hr), rm = image(0, -hr);
  if (sp.id != sm.id || rp.id != rm.id || sp.id != rp.id)
    throw Error(ErrorKind::InvalidInput, "finite-difference stencil straddles two obstacles");
  const BoundaryCurve& c = table.curve(sp.id);
  return {c.offset(sm.s, sp.s) / (2 * hs), c.offset(rm.s, rp.s) / (2 * hr), (sp.r - sm.r) / (2 * hs),
          (rp.r - rm.r) / (2 * hr)};
}

GeneratingResidual check_generating_relations(const Table& table, const PhasePoint& x) {
  const MapStep step = billiard_map(table, x);
  const Site a{x.id, x.s}, b{step.image.id, step.image.s};
  const double ha = 1e-6 * (1.0 + std::abs(a.s)), hb = 1e-6 * (1.0 + std::abs(b.s));
  const double dh_ds =
      (chord_length(table, {a.id, a.s + ha}, b) - chord_length(table, {a.id, a.s - ha}, b)) / (2 * ha);
  const double dh_dsp =
      (chord_length(table, a, {b.id, b.s + hb}) - chord_length(table, a, {b.id, b.s - hb})) / (2 * hb);
  return {std::abs(x.r - dh_ds), std::abs(step.image.r + dh_dsp)};
}

double liouville_defect(const Table& table, const PhasePoint& x) {
  const MapStep step = billiard_map(table, x);
  const double hs = 1e-6 * (1.0 + std::abs(x.s));
  const double hr = 1e-6 * (1.0 + std::abs(x.r));
  const MapStep sp = billiard_map(table, {x.id, x.s + hs, x.r});
  const MapStep sm = billiard_map(table, {x.id, x.s - hs, x.r});
  const MapStep rp = billiard_map(table, {x.id, x.s, x.r + hr});
  const MapStep rm = billiard_map(table, {x.id, x.s, x.r - hr});
  const BoundaryCurve& c = table.curve(step.image.id);
  const double dsp_ds = c.offset(sm.image.s, sp.image.s) / (2 * hs);
  const double dsp_dr = c.offset(rm.image.s, rp.image.s) / (2 * hr);
  const double dtau_ds = (sp.tau - sm.tau) / (2 * hs);
  const double dtau_dr = (rp.tau - rm.tau) / (2 * hr);
  // (F* lambda - lambda)(d/ds) = -r' ds'/ds + r, (d/dr) = -r' ds'/dr
  const double rp_ = step.image.r;
  const double e_s = std::abs(-rp_ * dsp_ds + x.r - dtau_ds);
  const double e_r = std::abs(-rp_ * dsp_dr - dtau_dr);
  return std::max(e_s, e_r);
}

PerpPropagator jacobi_perp_propagator(const Table& table, const FlowPoint& start, double duration) {
  if (!(duration >= 0.0)) throw Error(ErrorKind::InvalidInput, "duration must be non-negative");
  PerpPropagator out;
  out.elapsed = duration;
  PhasePoint cur = start.base;
  double since = start.t;
  double remaining = duration;
  while (true) {
    const MapStep step = billiard_map(table, cur);
    const double to_next = step.tau - since;
    if (to_next > remaining + 1e-9) {
      out.matrix = free_flight(remaining) * out.matrix;
      break;
    }
    out.matrix = free_flight(to_next) * out.matrix;
    remaining -= to_next;
    if (step.near_tangent) throw Error(ErrorKind::Tangency, "tangential collision in propagator window");
    const double K = table.curve(step.image.id).frame(step.image.s).curvature;
    const Mat2 L{-1.0, 0.0, -2.0 * K / step.image.nu(), -1.0};
    out.matrix = L * out.matrix;
    ++out.collisions;
    cur = step.image;
    since = 0.0;
    if (remaining <= 1e-9) break;
  }
  return out;
}

}  // namespace billiards
