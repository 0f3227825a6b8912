#include "billiards/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "billiards/error.hpp"
#include "billiards/quadrature.hpp"

namespace billiards {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kPanels = 512;
constexpr int kAnalyticSmoothness = Jet::kMaxOrder;

double wrap_angle(double u) {
  double w = std::fmod(u, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double wrap_len(double s, double period) {
  double w = std::fmod(s, period);
  if (w < 0.0) w += period;
  if (w >= period) w = 0.0;
  return w;
}

const GaussRule& panel_rule() {
  static const GaussRule& g = gauss_legendre(10);
  return g;
}

bool finite_params(const ShapeParams& p) {
  auto ok = [](double v) { return std::isfinite(v); };
  bool good = ok(p.center.x) && ok(p.center.y) && ok(p.rotation) && ok(p.radius) &&
              ok(p.semi_a) && ok(p.semi_b);
  for (double c : p.cos_coeffs) good = good && ok(c);
  for (double c : p.sin_coeffs) good = good && ok(c);
  return good;
}

}  // namespace

const char* to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Circle: return "circle";
    case ShapeKind::Ellipse: return "ellipse";
    case ShapeKind::Fourier: return "fourier";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// BoundaryCurve

BoundaryCurve::BoundaryCurve(ShapeParams params, std::vector<Bump> bumps)
    : params_(std::move(params)), bumps_(std::move(bumps)) {
  if (!finite_params(params_)) throw Error(ErrorKind::InvalidInput, "shape parameters must be finite");
  switch (params_.kind) {
    case ShapeKind::Circle:
      if (!(params_.radius > 0.0)) throw Error(ErrorKind::InvalidInput, "radius must be positive");
      break;
    case ShapeKind::Ellipse:
      if (!(params_.semi_a > 0.0 && params_.semi_b > 0.0))
        throw Error(ErrorKind::InvalidInput, "semi-axes must be positive");
      break;
    case ShapeKind::Fourier:
      if (!(params_.radius > 0.0)) throw Error(ErrorKind::InvalidInput, "radius must be positive");
      if (params_.cos_coeffs.size() + 1 >= 64 || params_.sin_coeffs.size() + 1 >= 64)
        throw Error(ErrorKind::InvalidInput, "too many Fourier modes");
      break;
  }
  for (const Bump& b : bumps_) {
    if (!(b.half_width > 0.0) || !std::isfinite(b.amplitude) || b.order < 2)
      throw Error(ErrorKind::InvalidInput, "invalid bump");
  }
  cos_rot_ = std::cos(params_.rotation);
  sin_rot_ = std::sin(params_.rotation);
  circle_ = params_.kind == ShapeKind::Circle && bumps_.empty();

  if (circle_) {
    perimeter_ = base_perimeter_ = kTwoPi * params_.radius;
    return;
  }

  if (params_.kind == ShapeKind::Circle) {
    base_perimeter_ = kTwoPi * params_.radius;
  } else if (!bumps_.empty()) {
    base_table_ = build_table(true, {});
    base_perimeter_ = base_table_.total();
  }

  std::vector<double> extra;
  for (const Bump& b : bumps_) {
    for (double sb : {b.center - b.half_width, b.center + b.half_width}) {
      const double w = wrap_len(sb, base_perimeter_);
      extra.push_back(params_.kind == ShapeKind::Circle ? w / params_.radius : base_table_.u_of_s(w));
    }
  }
  table_ = build_table(bumps_.empty(), extra);
  perimeter_ = table_.total();
  if (bumps_.empty()) base_perimeter_ = perimeter_;
}

double BoundaryCurve::wrap(double s) const { return wrap_len(s, perimeter_); }

double BoundaryCurve::offset(double s0, double s1) const {
  double d = std::fmod(s1 - s0, perimeter_);
  if (d < -0.5 * perimeter_) d += perimeter_;
  if (d >= 0.5 * perimeter_) d -= perimeter_;
  return d;
}

void BoundaryCurve::base_jets(const Jet& u, Jet& x, Jet& y) const {
  switch (params_.kind) {
    case ShapeKind::Circle:
      x = params_.radius * cos(u);
      y = params_.radius * sin(u);
      return;
    case ShapeKind::Ellipse:
      x = params_.semi_a * cos(u);
      y = params_.semi_b * sin(u);
      return;
    case ShapeKind::Fourier: {
      Jet rho(u.order(), 1.0);
      for (std::size_t k = 0; k < params_.cos_coeffs.size(); ++k)
        if (params_.cos_coeffs[k] != 0.0) rho += params_.cos_coeffs[k] * cos(static_cast<double>(k + 1) * u);
      for (std::size_t k = 0; k < params_.sin_coeffs.size(); ++k)
        if (params_.sin_coeffs[k] != 0.0) rho += params_.sin_coeffs[k] * sin(static_cast<double>(k + 1) * u);
      rho *= params_.radius;
      x = rho * cos(u);
      y = rho * sin(u);
      return;
    }
  }
}

void BoundaryCurve::local_jets(const Jet& u, Jet& x, Jet& y) const {
  if (bumps_.empty()) {
    base_jets(u, x, y);
    return;
  }
  // one extra order for the base normal
  const int m = u.order();
  Jet ue(m + 1);
  for (int k = 0; k <= m; ++k) ue[k] = u[k];
  Jet xb, yb;
  base_jets(ue, xb, yb);
  const Jet dx = differentiate(xb), dy = differentiate(yb);
  const Jet sp = sqrt(dx * dx + dy * dy);
  const Jet nx = dy / sp, ny = -dx / sp;
  // base arclength along the parameter jet; ue is affine in t only when it
  // is a variable jet, which is how every caller builds it
  Jet sb = integrate(sp);
  sb[0] = base_arclength_of(u[0]);
  x = Jet(m);
  y = Jet(m);
  for (int k = 0; k <= m; ++k) {
    x[k] = xb[k];
    y[k] = yb[k];
  }
  for (const Bump& b : bumps_) {
    double off = std::fmod(sb[0] - b.center, base_perimeter_);
    if (off < -0.5 * base_perimeter_) off += base_perimeter_;
    if (off >= 0.5 * base_perimeter_) off -= base_perimeter_;
    if (std::abs(off) >= b.half_width) continue;
    Jet xi = sb * (1.0 / b.half_width);
    xi[0] = off / b.half_width;
    const Jet one_minus = Jet(m, 1.0) - xi * xi;
    Jet beta(m, 1.0);
    for (int i = 0; i <= b.order; ++i) beta = beta * one_minus;
    x += b.amplitude * beta * nx;
    y += b.amplitude * beta * ny;
  }
}

double BoundaryCurve::speed(double u, bool base) const {
  const Jet uj = Jet::variable(1, u);
  Jet x, y;
  if (base) base_jets(uj, x, y);
  else local_jets(uj, x, y);
  return std::hypot(x[1], y[1]);
}

ArclengthTable BoundaryCurve::build_table(bool base, const std::vector<double>& extra) const {
  ArclengthTable t;
  t.breaks.reserve(kPanels + 1 + extra.size());
  for (int i = 0; i <= kPanels; ++i) t.breaks.push_back(kTwoPi * i / kPanels);
  for (double u : extra) t.breaks.push_back(u);
  std::sort(t.breaks.begin(), t.breaks.end());
  std::vector<double> merged;
  for (double u : t.breaks)
    if (merged.empty() || u - merged.back() > 1e-9) merged.push_back(u);
  merged.back() = kTwoPi;
  t.breaks = std::move(merged);
  const std::size_t panels = t.breaks.size() - 1;
  t.cum.assign(panels + 1, 0.0);
  t.legendre.resize(panels);
  const GaussRule& g = panel_rule();
  constexpr int n = ArclengthTable::kNodes;
  for (std::size_t i = 0; i < panels; ++i) {
    const double a = t.breaks[i], b = t.breaks[i + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    std::array<double, n> c{};
    for (int k = 0; k < n; ++k) {
      const double x = g.nodes[k];
      const double f = g.weights[k] * speed(mid + half * x, base);
      double p0 = 1.0, p1 = x;
      c[0] += f;
      if (n > 1) c[1] += f * x;
      for (int j = 2; j < n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
        c[j] += f * p2;
      }
    }
    for (int j = 0; j < n; ++j) c[j] *= 0.5 * (2 * j + 1);
    t.legendre[i] = c;
    t.cum[i + 1] = t.cum[i] + 2.0 * c[0] * half;
  }
  return t;
}

double ArclengthTable::s_of_u(double u, double* speed) const {
  u = std::clamp(u, 0.0, kTwoPi);
  auto it = std::upper_bound(breaks.begin(), breaks.end(), u);
  std::size_t i = static_cast<std::size_t>(it - breaks.begin());
  i = std::min(i == 0 ? 0 : i - 1, legendre.size() - 1);
  const double a = breaks[i], b = breaks[i + 1];
  const double half = 0.5 * (b - a);
  const double x = (u - a) / half - 1.0;
  const auto& c = legendre[i];
  // P_0..P_n at x; the integral of P_j from -1 is (P_{j+1} - P_{j-1}) / (2j+1)
  std::array<double, kNodes + 1> P{};
  P[0] = 1.0;
  P[1] = x;
  for (int j = 2; j <= kNodes; ++j) P[j] = ((2.0 * j - 1.0) * x * P[j - 1] - (j - 1.0) * P[j - 2]) / j;
  double integral = c[0] * (x + 1.0), sp = c[0];
  for (int j = 1; j < kNodes; ++j) {
    integral += c[j] * (P[j + 1] - P[j - 1]) / (2.0 * j + 1.0);
    sp += c[j] * P[j];
  }
  if (speed) *speed = sp;
  return cum[i] + half * integral;
}

double ArclengthTable::u_of_s(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= total()) return kTwoPi;
  const auto it = std::upper_bound(cum.begin(), cum.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - cum.begin()) - 1;
  double lo = breaks[i], hi = breaks[i + 1];
  double u = lo + (hi - lo) * (s - cum[i]) / (cum[i + 1] - cum[i]);
  for (int iter = 0; iter < 60; ++iter) {
    double sp = 0.0;
    const double f = s_of_u(u, &sp) - s;
    if (f > 0.0) hi = u;
    else lo = u;
    double next = u - f / sp;
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - u);
    u = next;
    if (step < 4e-16 * (1.0 + u)) break;
  }
  return u;
}

double BoundaryCurve::base_arclength_of(double u) const {
  if (params_.kind == ShapeKind::Circle) return params_.radius * wrap_angle(u);
  if (bumps_.empty()) return arclength_of(u);
  return base_table_.s_of_u(wrap_angle(u));
}

double BoundaryCurve::param_of(double s) const {
  if (circle_) return wrap(s) / params_.radius;
  return wrap_angle(table_.u_of_s(wrap(s)));
}

double BoundaryCurve::arclength_of(double u) const {
  if (circle_) return params_.radius * wrap_angle(u);
  return wrap(table_.s_of_u(wrap_angle(u)));
}

Vec2 BoundaryCurve::place(Vec2 p) const {
  return {params_.center.x + cos_rot_ * p.x - sin_rot_ * p.y,
          params_.center.y + sin_rot_ * p.x + cos_rot_ * p.y};
}

Vec2 BoundaryCurve::place_dir(Vec2 p) const {
  return {cos_rot_ * p.x - sin_rot_ * p.y, sin_rot_ * p.x + cos_rot_ * p.y};
}

void BoundaryCurve::eval_param(double u, Vec2& p, Vec2& dp, Vec2& ddp) const {
  const Jet uj = Jet::variable(2, u);
  Jet x, y;
  local_jets(uj, x, y);
  p = place({x[0], y[0]});
  dp = place_dir({x[1], y[1]});
  ddp = place_dir({2.0 * x[2], 2.0 * y[2]});
}

Vec2 BoundaryCurve::point(double s) const { return frame(s).point; }

Frame BoundaryCurve::frame(double s) const {
  Frame f;
  if (circle_) {
    const double th = wrap(s) / params_.radius;
    const Vec2 radial = place_dir({std::cos(th), std::sin(th)});
    f.point = params_.center + params_.radius * radial;
    f.normal = radial;
    f.tangent = {-radial.y, radial.x};
    f.curvature = 1.0 / params_.radius;
    return f;
  }
  Vec2 p, dp, ddp;
  eval_param(param_of(s), p, dp, ddp);
  const double sp = norm(dp);
  f.point = p;
  f.tangent = (1.0 / sp) * dp;
  f.normal = rotate_cw(f.tangent);
  f.curvature = cross(dp, ddp) / (sp * sp * sp);
  return f;
}

int BoundaryCurve::smoothness() const {
  int k = kAnalyticSmoothness;
  for (const Bump& b : bumps_) k = std::min(k, b.order);
  return k;
}

int BoundaryCurve::max_jet_order() const { return smoothness() - 2; }

std::vector<double> BoundaryCurve::curvature_jet(double s, int order) const {
  if (order < 0) throw Error(ErrorKind::InvalidInput, "negative jet order");
  if (order > max_jet_order())
    throw Error(ErrorKind::InvalidInput, "requested order exceeds available smoothness");
  std::vector<double> out(order + 1, 0.0);
  if (circle_) {
    out[0] = 1.0 / params_.radius;
    return out;
  }
  const double u0 = param_of(s);
  Jet x, y;
  local_jets(Jet::variable(order + 2, u0), x, y);
  const Jet dx = differentiate(x), dy = differentiate(y);
  const Jet ddx = differentiate(dx), ddy = differentiate(dy);
  const Jet sp = sqrt(dx * dx + dy * dy);
  const Jet k_u = (dx * ddy - dy * ddx) / (sp * sp * sp);
  const Jet u_of_sigma = revert(integrate(sp));  // u - u0 as a series in s - s0
  const Jet k_s = compose(k_u, u_of_sigma);
  for (int j = 0; j <= order; ++j) out[j] = k_s.derivative(j);
  return out;
}

double BoundaryCurve::support(Vec2 d, double* argmax) const {
  if (circle_) {
    const double nd = norm(d);
    if (argmax) {
      const double ang = std::atan2(d.y, d.x) - params_.rotation;
      *argmax = wrap(params_.radius * ang);
    }
    return dot(d, params_.center) + params_.radius * nd;
  }
  constexpr int kCoarse = 64;
  int best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kCoarse; ++i) {
    Vec2 p, dp, ddp;
    eval_param(kTwoPi * i / kCoarse, p, dp, ddp);
    const double v = dot(d, p);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  // g(u) = <d, P'(u)> decreases through zero at the maximizer
  double lo = kTwoPi * (best - 1) / kCoarse, hi = kTwoPi * (best + 1) / kCoarse;
  double u = kTwoPi * best / kCoarse;
  for (int iter = 0; iter < 60; ++iter) {
    Vec2 p, dp, ddp;
    eval_param(u, p, dp, ddp);
    const double g = dot(d, dp), dg = dot(d, ddp);
    if (g > 0.0) lo = u;
    else hi = u;
    double next = dg < 0.0 ? u - g / dg : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - u);
    u = next;
    if (step < 1e-15) break;
  }
  Vec2 p, dp, ddp;
  eval_param(u, p, dp, ddp);
  if (argmax) *argmax = arclength_of(u);
  return std::max(dot(d, p), best_v);
}

double BoundaryCurve::min_curvature(int samples) const {
  if (circle_) return 1.0 / params_.radius;
  double kmin = std::numeric_limits<double>::infinity();
  auto probe = [&](double u) {
    Vec2 p, dp, ddp;
    eval_param(u, p, dp, ddp);
    const double sp = norm(dp);
    kmin = std::min(kmin, cross(dp, ddp) / (sp * sp * sp));
  };
  for (int i = 0; i < samples; ++i) probe(kTwoPi * (i + 0.5) / samples);
  // dense resampling inside bump supports
  for (const Bump& b : bumps_) {
    const int n = std::max(200, samples / 10);
    for (int i = 0; i <= n; ++i) {
      const double sb = b.center - b.half_width + 2.0 * b.half_width * i / n;
      const double w = wrap_len(sb, base_perimeter_);
      const double u = params_.kind == ShapeKind::Circle ? w / params_.radius : base_table_.u_of_s(w);
      probe(u);
    }
  }
  return kmin;
}

BoundaryCurve BoundaryCurve::moved(double angle, Vec2 translation) const {
  BoundaryCurve c = *this;
  c.params_.center = rotate(params_.center, angle) + translation;
  c.params_.rotation = params_.rotation + angle;
  c.cos_rot_ = std::cos(c.params_.rotation);
  c.sin_rot_ = std::sin(c.params_.rotation);
  return c;
}

// ---------------------------------------------------------------------------
// Table

Table::Table(std::string name, std::vector<Obstacle> obstacles, bool non_eclipse)
    : name_(std::move(name)), non_eclipse_(non_eclipse), obstacles_(std::move(obstacles)) {
  for (const Obstacle& o : obstacles_) {
    if (o.id < 0 || o.id > 4096) throw Error(ErrorKind::InvalidInput, "obstacle ids must lie in [0, 4096]");
    if (static_cast<std::size_t>(o.id) >= index_.size()) index_.resize(o.id + 1, -1);
    if (index_[o.id] != -1) throw Error(ErrorKind::InvalidInput, "duplicate obstacle id " + std::to_string(o.id));
    index_[o.id] = static_cast<int>(&o - obstacles_.data());
  }
}

bool Table::has(int id) const {
  return id >= 0 && static_cast<std::size_t>(id) < index_.size() && index_[id] >= 0;
}

const Obstacle& Table::obstacle(int id) const {
  if (!has(id)) throw Error(ErrorKind::InvalidInput, "unknown obstacle id " + std::to_string(id));
  return obstacles_[index_[id]];
}

std::vector<int> Table::alphabet() const {
  std::vector<int> ids;
  for (const Obstacle& o : obstacles_) ids.push_back(o.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

double Table::total_perimeter() const {
  double t = 0.0;
  for (const Obstacle& o : obstacles_) t += o.curve.perimeter();
  return t;
}

double Table::extent() const {
  double e = 0.0;
  for (const Obstacle& o : obstacles_) {
    for (int i = 0; i < 16; ++i) {
      const double a = kTwoPi * i / 16;
      // support over-estimates |P| by at most a factor 1/cos(pi/16)
      e = std::max(e, o.curve.support({std::cos(a), std::sin(a)}) / std::cos(std::numbers::pi / 16));
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// Construction and validation

namespace {

BoundaryCurve apply_bump(const BoundaryCurve& c, const BumpPerturbation& bump) {
  const double len = bump.s_b - bump.s_a;
  if (!(len > 0.0)) throw Error(ErrorKind::InvalidInput, "bump support length must be positive");
  if (len >= c.perimeter()) throw Error(ErrorKind::InvalidInput, "support wraps more than the full perimeter");
  if (!std::isfinite(bump.amplitude)) throw Error(ErrorKind::InvalidInput, "bump amplitude must be finite");
  if (bump.order < 2 || bump.order > Jet::kMaxOrder)
    throw Error(ErrorKind::InvalidInput, "bump order must lie in [2, 14]");
  double ba = c.base_arclength_of(c.param_of(bump.s_a));
  double bb = c.base_arclength_of(c.param_of(bump.s_b));
  if (bb <= ba) bb += c.base_perimeter();
  std::vector<BoundaryCurve::Bump> bumps = c.bumps();
  bumps.push_back({0.5 * (ba + bb), 0.5 * (bb - ba), bump.amplitude, bump.order});
  return BoundaryCurve(c.params(), std::move(bumps));
}

void check_convex(const BoundaryCurve& c, int id) {
  if (!(c.min_curvature() > 1e-12)) {
    throw Error(ErrorKind::Geometry, "non-convex shape (obstacle " + std::to_string(id) + ")");
  }
}

void check_disjoint(const std::vector<Obstacle>& obs) {
  for (std::size_t i = 0; i < obs.size(); ++i)
    for (std::size_t j = i + 1; j < obs.size(); ++j)
      if (!(obstacle_gap(obs[i].curve, obs[j].curve) > 0.0))
        throw Error(ErrorKind::Geometry, "overlapping obstacles " + std::to_string(obs[i].id) + " and " +
                                             std::to_string(obs[j].id));
}

void check_eclipse(const Table& t) {
  const EclipseReport rep = check_non_eclipse(t);
  if (!rep.pass)
    throw Error(ErrorKind::Geometry, "non-eclipse condition fails: hull of " + std::to_string(rep.a) + " and " +
                                         std::to_string(rep.b) + " meets " + std::to_string(rep.blocker));
}

// Maximize f over angle in [0, 2pi) by sampling then golden-section refinement.
template <class F>
double maximize_angle(F&& f, int samples, double* arg = nullptr) {
  int best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double v = f(kTwoPi * i / samples);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  double a = kTwoPi * (best - 1) / samples, b = kTwoPi * (best + 1) / samples;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
    if (f1 < f2) {
      a = x1; x1 = x2; f1 = f2; x2 = a + g * (b - a); f2 = f(x2);
    } else {
      b = x2; x2 = x1; f2 = f1; x1 = b - g * (b - a); f1 = f(x1);
    }
  }
  const double refined = std::max(f1, f2);
  if (refined >= best_v) {
    if (arg) *arg = f1 >= f2 ? x1 : x2;
    return refined;
  }
  if (arg) *arg = kTwoPi * best / samples;
  return best_v;
}

}  // namespace

double obstacle_gap(const BoundaryCurve& a, const BoundaryCurve& b) {
  if (a.is_circle() && b.is_circle())
    return norm(a.params().center - b.params().center) - a.params().radius - b.params().radius;
  auto gap = [&](double ang) {
    const Vec2 d{std::cos(ang), std::sin(ang)};
    return -b.support(-d) - a.support(d);
  };
  return maximize_angle(gap, 360);
}

EclipseReport check_non_eclipse(const Table& table) {
  EclipseReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  const auto& obs = table.obstacles();
  const double lipschitz = 2.0 * table.extent();
  for (std::size_t i = 0; i < obs.size(); ++i) {
    for (std::size_t j = i + 1; j < obs.size(); ++j) {
      for (std::size_t k = 0; k < obs.size(); ++k) {
        if (k == i || k == j) continue;
        const BoundaryCurve& A = obs[i].curve;
        const BoundaryCurve& B = obs[j].curve;
        const BoundaryCurve& C = obs[k].curve;
        // a direction d with h_C(d) < min over A u B of <d, p> separates C
        // from the hull of A and B
        auto margin = [&](double ang) {
          const Vec2 d{std::cos(ang), std::sin(ang)};
          return std::min(-A.support(-d), -B.support(-d)) - C.support(d);
        };
        int samples = 720;
        double m = maximize_angle(margin, samples);
        // margin is Lipschitz in the angle; refine while the sample grid
        // cannot decide the sign
        while (m <= 0.0 && m > -lipschitz * std::numbers::pi / samples && samples < 46080) {
          samples *= 2;
          m = std::max(m, maximize_angle(margin, samples));
        }
        rep.min_margin = std::min(rep.min_margin, m);
        if (!(m > 0.0) && rep.pass) {
          rep.pass = false;
          rep.a = std::min(obs[i].id, obs[j].id);
          rep.b = std::max(obs[i].id, obs[j].id);
          rep.blocker = obs[k].id;
        }
      }
    }
  }
  if (obs.size() < 3) rep.min_margin = 0.0;
  return rep;
}

Table build_table(const TableConfig& config) {
  if (config.obstacles.size() < 3) throw Error(ErrorKind::InvalidInput, "fewer than 3 obstacles");
  std::vector<Obstacle> obs;
  for (const ObstacleConfig& oc : config.obstacles) {
    if (!finite_params(oc.shape)) throw Error(ErrorKind::InvalidInput, "shape parameters must be finite");
    BoundaryCurve c(oc.shape);
    check_convex(c, oc.id);
    for (const BumpPerturbation& b : oc.bumps) {
      if (b.amplitude == 0.0) continue;
      c = apply_bump(c, b);
      check_convex(c, oc.id);
    }
    obs.push_back({oc.id, std::move(c)});
  }
  Table t(config.name, std::move(obs), config.non_eclipse);
  check_disjoint(t.obstacles());
  if (config.non_eclipse) check_eclipse(t);
  return t;
}

TableConfig three_disc_config(double separation, double radius) {
  TableConfig cfg;
  cfg.name = "tri" + std::to_string(static_cast<int>(std::lround(separation)));
  const double L = separation;
  const Vec2 centers[3] = {{0.0, 0.0}, {L, 0.0}, {0.5 * L, 0.5 * std::sqrt(3.0) * L}};
  for (int i = 0; i < 3; ++i) {
    ObstacleConfig oc;
    oc.id = i + 1;
    oc.shape.kind = ShapeKind::Circle;
    oc.shape.center = centers[i];
    oc.shape.radius = radius;
    cfg.obstacles.push_back(oc);
  }
  return cfg;
}

Frame boundary_frame(const Table& table, int id, double s) { return table.curve(id).frame(s); }

std::vector<double> curvature_jet(const Table& table, int id, double s, int order) {
  return table.curve(id).curvature_jet(s, order);
}

Table apply_isometry(const Table& table, double angle, Vec2 translation) {
  std::vector<Obstacle> obs;
  for (const Obstacle& o : table.obstacles()) obs.push_back({o.id, o.curve.moved(angle, translation)});
  return Table(table.name(), std::move(obs), table.non_eclipse());
}

Table relabel_table(const Table& table, const std::map<int, int>& ids) {
  std::vector<Obstacle> obs;
  std::vector<int> seen;
  for (const Obstacle& o : table.obstacles()) {
    const auto it = ids.find(o.id);
    if (it == ids.end()) throw Error(ErrorKind::InvalidInput, "relabeling misses obstacle " + std::to_string(o.id));
    if (std::find(seen.begin(), seen.end(), it->second) != seen.end())
      throw Error(ErrorKind::InvalidInput, "relabeling is not injective");
    seen.push_back(it->second);
    obs.push_back({it->second, o.curve});
  }
  return Table(table.name(), std::move(obs), table.non_eclipse());
}

Table perturb_boundary(const Table& table, const BumpPerturbation& bump, PerturbationReport* report) {
  const BoundaryCurve& old = table.curve(bump.target_id);
  if (bump.amplitude == 0.0) {
    const double len = bump.s_b - bump.s_a;
    if (!(len > 0.0)) throw Error(ErrorKind::InvalidInput, "bump support length must be positive");
    if (len >= old.perimeter()) throw Error(ErrorKind::InvalidInput, "support wraps more than the full perimeter");
    if (report) *report = {0.0, 0.0, old.min_curvature()};
    return table;
  }
  BoundaryCurve fresh = apply_bump(old, bump);
  const double kmin = fresh.min_curvature();
  if (!(kmin > 1e-12)) throw Error(ErrorKind::Geometry, "convexity lost");
  if (report) {
    report->min_curvature = kmin;
    report->perimeter_change = fresh.perimeter() - old.perimeter();
    double dev = 0.0;
    const int n = 4000;
    const double len = bump.s_b - bump.s_a;
    for (int i = 0; i <= n; ++i) {
      const double s_old = bump.s_a + len * i / n;
      const double k_old = old.frame(s_old).curvature;
      const double k_new = fresh.frame(corresponding_s(old, fresh, s_old)).curvature;
      dev = std::max(dev, std::abs(k_new - k_old));
    }
    report->max_curvature_deviation = dev;
  }
  std::vector<Obstacle> obs;
  for (const Obstacle& o : table.obstacles())
    obs.push_back({o.id, o.id == bump.target_id ? fresh : o.curve});
  Table t(table.name(), std::move(obs), table.non_eclipse());
  check_disjoint(t.obstacles());
  if (t.non_eclipse()) check_eclipse(t);
  return t;
}

double corresponding_s(const BoundaryCurve& before, const BoundaryCurve& after, double s_old) {
  return after.arclength_of(before.param_of(s_old));
}

}  // namespace billiards
