#include "billiards/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "billiards/displacement.hpp"
#include "billiards/error.hpp"
#include "billiards/parallel.hpp"

namespace billiards {

namespace {

long long mod(long long a, long long n) { return ((a % n) + n) % n; }

int mapped(int symbol, const AlphabetMap& map) {
  const auto it = map.find(symbol);
  if (it == map.end()) throw Error(ErrorKind::InvalidInput, "alphabet map misses symbol " + std::to_string(symbol));
  return it->second;
}

bool pasts_agree(const InfiniteCode& a, const InfiniteCode& b) {
  const InfiniteCode ra = a.reversed().shifted(1), rb = b.reversed().shifted(1);
  const long long K = std::max<long long>({ra.future_start(), rb.future_start(), 0}) +
                      std::lcm<long long>(static_cast<long long>(ra.future.size()),
                                          static_cast<long long>(rb.future.size()));
  for (long long k = 0; k <= K; ++k)
    if (ra.symbol(k) != rb.symbol(k)) return false;
  return true;
}

Vec2 phase_offset(const BoundaryCurve& curve, const PhasePoint& from, const PhasePoint& to) {
  return {curve.offset(from.s, to.s), to.r - from.r};
}

// Angle between the incoming and outgoing segments at bounce j.
double bounce_angle(const Table& table, const PeriodicOrbit& orbit, int j) {
  const int p = orbit.period();
  const Site prev = orbit.sites[static_cast<std::size_t>((j + p - 1) % p)];
  const Site here = orbit.sites[static_cast<std::size_t>(j)];
  const Site next = orbit.sites[static_cast<std::size_t>((j + 1) % p)];
  const Vec2 in = chord(table, prev, here).v, out = chord(table, here, next).v;
  return std::atan2(cross(in, out), dot(in, out));
}

void check_alphabet_map(const Table& a, const Table& b, const AlphabetMap& map) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidInput, "tables have different numbers of obstacles");
  std::set<int> image;
  for (int id : a.alphabet()) {
    const int t = mapped(id, map);
    if (!b.has(t)) throw Error(ErrorKind::InvalidInput, "alphabet map sends " + std::to_string(id) + " off table B");
    image.insert(t);
  }
  if (image.size() != a.size()) throw Error(ErrorKind::InvalidInput, "alphabet map is not injective");
}

}  // namespace

Word map_word(const Word& w, const AlphabetMap& map) {
  Word out = w;
  for (int& s : out.symbols) s = mapped(s, map);
  return out;
}

InfiniteCode map_code(const InfiniteCode& c, const AlphabetMap& map) {
  InfiniteCode out = c;
  out.past = map_word(c.past, map);
  out.center = map_word(c.center, map);
  out.future = map_word(c.future, map);
  return out;
}

// ---------------------------------------------------------------------------

int OrbitPairing::failures() const {
  return static_cast<int>(std::count_if(matches.begin(), matches.end(), [](const OrbitMatch& m) { return !m.ok; }));
}

OrbitPairing match_periodic_orbits(const Table& a, const Table& b, const AlphabetMap& alphabet, int max_length,
                                   int workers, const SolverOptions& opt) {
  check_alphabet_map(a, b, alphabet);
  if (max_length < 2) throw Error(ErrorKind::InvalidInput, "max length must be at least 2");
  EnumerateOptions eo;
  eo.necklaces_only = true;
  eo.primitive_only = true;
  const std::vector<Word> words = enumerate_words(a.alphabet(), max_length, eo);

  OrbitPairing pairing;
  pairing.alphabet = alphabet;
  pairing.max_length = max_length;
  pairing.matches.resize(words.size());
  parallel_for(words.size(), workers, [&](std::size_t i) {
    OrbitMatch& m = pairing.matches[i];
    m.word = words[i];
    m.word_b = map_word(words[i], alphabet);
    try {
      m.orbit_a = solve_periodic_orbit(a, m.word, opt);
      m.orbit_b = solve_periodic_orbit(b, m.word_b, opt);
      m.delta = std::abs(m.orbit_a.length - m.orbit_b.length);
      m.ok = true;
    } catch (const Error& e) {
      m.error = e.what();
    }
  });
  return pairing;
}

IsoSpectralReport iso_length_spectral_report(const OrbitPairing& pairing, double tolerance) {
  IsoSpectralReport rep;
  rep.tolerance = tolerance;
  if (pairing.matches.empty()) {
    rep.no_data = true;
    return rep;
  }
  std::vector<const OrbitMatch*> order;
  for (const OrbitMatch& m : pairing.matches) {
    if (m.ok) {
      ++rep.compared;
      rep.max_delta = std::max(rep.max_delta, m.delta);
    } else {
      ++rep.failures;
    }
    order.push_back(&m);
  }
  // failures first, then by decreasing delta; deltas equal to 1e-12 keep word order
  auto key = [](const OrbitMatch* m) { return std::llround(m->delta * 1e12); };
  std::stable_sort(order.begin(), order.end(), [&](const OrbitMatch* x, const OrbitMatch* y) {
    if (x->ok != y->ok) return !x->ok;
    return key(x) > key(y);
  });
  for (const OrbitMatch* m : order) {
    if (rep.worst.size() == 10) break;
    if (m->ok && m->delta <= tolerance) break;
    OrbitMatch slim;
    slim.word = m->word;
    slim.word_b = m->word_b;
    slim.ok = m->ok;
    slim.delta = m->delta;
    slim.error = m->error;
    slim.orbit_a.length = m->orbit_a.length;
    slim.orbit_b.length = m->orbit_b.length;
    rep.worst.push_back(std::move(slim));
  }
  rep.pass = rep.failures == 0 && rep.compared > 0 && rep.max_delta <= tolerance;
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

struct NeighborPair {
  const LeafNeighbor* plus = nullptr;
  const LeafNeighbor* minus = nullptr;
};

// Neighbours on either side whose offsets are closest to `scale` in log.
NeighborPair pick_neighbors(const std::vector<LeafNeighbor>& ns, double scale) {
  NeighborPair p;
  double best_plus = std::numeric_limits<double>::infinity(), best_minus = best_plus;
  for (const LeafNeighbor& n : ns) {
    if (n.offset == 0.0) continue;
    const double d = std::abs(std::log(std::abs(n.offset) / scale));
    if (n.offset > 0 && d < best_plus) best_plus = d, p.plus = &n;
    if (n.offset < 0 && d < best_minus) best_minus = d, p.minus = &n;
  }
  // a side more than a decade off the scale is not usable
  if (best_plus > std::log(10.0)) p.plus = nullptr;
  if (best_minus > std::log(10.0)) p.minus = nullptr;
  return p;
}

DPsiSample estimate_dpsi(const Table& A, const Table& B, const AlphabetMap& map, const Word& word, double scale) {
  DPsiSample out;
  out.word = word;
  const InfiniteCode code = InfiniteCode::periodic(word, 0);
  const PeriodicOrbit orbit = solve_periodic_orbit(A, word);
  const double chi = std::max(lyapunov_exponent(orbit), 1e-3);
  const int depth = 4 + static_cast<int>(std::ceil(std::log(1.0 / scale) / chi));

  const BoundaryCurve& ca = A.curve(code.symbol(0));
  const BoundaryCurve& cb = B.curve(mapped(code.symbol(0), map));
  out.a = code_point(A, code);
  out.b = code_point(B, map_code(code, map));

  Vec2 da[2], db[2];
  out.depth = std::numeric_limits<int>::max();
  for (int leaf = 0; leaf < 2; ++leaf) {
    const Stability which = leaf == 0 ? Stability::Stable : Stability::Unstable;
    const std::vector<LeafNeighbor> ns = leaf_neighbors(A, code, which, depth);
    const NeighborPair p = pick_neighbors(ns, scale);
    if (!p.plus && !p.minus) {
      out.error = std::string("no Cantor neighbours near scale on the ") + (leaf == 0 ? "stable" : "unstable") +
                  " leaf";
      return out;
    }
    // central difference when both sides exist, one-sided otherwise
    PhasePoint a_hi = out.a, a_lo = out.a, b_hi = out.b, b_lo = out.b;
    for (const LeafNeighbor* n : {p.plus, p.minus}) {
      if (!n) continue;
      const PhasePoint pa = code_point(A, n->code), pb = code_point(B, map_code(n->code, map));
      (n == p.plus ? a_hi : a_lo) = pa;
      (n == p.plus ? b_hi : b_lo) = pb;
      out.scale = std::max(out.scale, std::abs(n->offset));
      out.depth = std::min(out.depth, n->depth);
    }
    da[leaf] = phase_offset(ca, a_lo, a_hi);
    db[leaf] = phase_offset(cb, b_lo, b_hi);
  }
  const Mat2 X{da[0].x, da[1].x, da[0].y, da[1].y};
  const Mat2 Y{db[0].x, db[1].x, db[0].y, db[1].y};
  if (std::abs(X.det()) < 1e-300) {
    out.error = "stable and unstable differences are parallel";
    return out;
  }
  out.dpsi = Y * X.inverse();
  out.distance = max_abs(out.dpsi - Mat2::identity());
  out.a_entry = out.dpsi.a;
  out.b_entry = out.dpsi.b;
  out.r_ratio = std::abs(out.a.r) > 1e-3 ? out.a.r / out.b.r : 0.0;
  out.ok = true;
  return out;
}

}  // namespace

ConjugacyReport conjugacy_consequence_report(const Table& a, const Table& b, const OrbitPairing& pairing,
                                             double tolerance, const ConjugacyOptions& opt) {
  ConjugacyReport rep;
  const IsoSpectralReport iso = iso_length_spectral_report(pairing, tolerance);
  if (!iso.pass) {
    rep.gated = true;
    rep.gate_reason = iso.no_data ? "no data" : "iso-spectrality failed upstream";
    return rep;
  }
  for (const auto& ob : a.obstacles())
    if (opt.jet_order > ob.curve.max_jet_order())
      throw Error(ErrorKind::InvalidInput, "jet order exceeds the smoothness of table A");
  for (const auto& ob : b.obstacles())
    if (opt.jet_order > ob.curve.max_jet_order())
      throw Error(ErrorKind::InvalidInput, "jet order exceeds the smoothness of table B");

  rep.max_djet.assign(static_cast<std::size_t>(opt.jet_order + 1), 0.0);
  for (const OrbitMatch& m : pairing.matches) {
    for (int j = 0; j < m.orbit_a.period(); ++j) {
      BounceMatch bm;
      bm.word = m.word;
      bm.index = j;
      bm.a = m.orbit_a.points[static_cast<std::size_t>(j)];
      bm.b = m.orbit_b.points[static_cast<std::size_t>(j)];
      bm.dr = std::abs(bm.b.r - bm.a.r);
      bm.dtau = std::abs(m.orbit_b.segments[static_cast<std::size_t>(j)] -
                         m.orbit_a.segments[static_cast<std::size_t>(j)]);
      bm.dangle = std::abs(bounce_angle(b, m.orbit_b, j) - bounce_angle(a, m.orbit_a, j));
      const std::vector<double> ka = curvature_jet(a, bm.a.id, bm.a.s, opt.jet_order);
      const std::vector<double> kb = curvature_jet(b, bm.b.id, bm.b.s, opt.jet_order);
      for (int k = 0; k <= opt.jet_order; ++k) {
        const double d = std::abs(ka[static_cast<std::size_t>(k)] - kb[static_cast<std::size_t>(k)]);
        bm.djet.push_back(d);
        rep.max_djet[static_cast<std::size_t>(k)] = std::max(rep.max_djet[static_cast<std::size_t>(k)], d);
      }
      rep.max_dr = std::max(rep.max_dr, bm.dr);
      rep.max_dtau = std::max(rep.max_dtau, bm.dtau);
      rep.max_dangle = std::max(rep.max_dangle, bm.dangle);
      rep.bounces.push_back(std::move(bm));
    }
  }

  std::vector<Word> bases;
  for (const OrbitMatch& m : pairing.matches)
    if (static_cast<int>(bases.size()) < opt.dpsi_samples) bases.push_back(m.word);
  rep.dpsi.resize(bases.size());
  parallel_for(bases.size(), opt.workers, [&](std::size_t i) {
    try {
      rep.dpsi[i] = estimate_dpsi(a, b, pairing.alphabet, bases[i], opt.dpsi_scale);
    } catch (const Error& e) {
      rep.dpsi[i].word = bases[i];
      rep.dpsi[i].error = e.what();
    }
  });
  for (const DPsiSample& d : rep.dpsi) {
    if (!d.ok) {
      ++rep.dpsi_failures;
      continue;
    }
    rep.max_dpsi_distance = std::max(rep.max_dpsi_distance, d.distance);
    if (d.r_ratio != 0.0) rep.max_a_mismatch = std::max(rep.max_a_mismatch, std::abs(d.a_entry - d.r_ratio));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Dimension

namespace {

struct PrimitiveRates {
  int length = 0;
  double log_u = 0.0;  // log spectral radius of the monodromy
  double log_s = 0.0;  // log spectral radius of F^-1 along the reversed word
};

std::vector<PrimitiveRates> primitive_rates(const Table& table, int n_max, const std::vector<int>& lengths,
                                            int workers) {
  EnumerateOptions eo;
  eo.necklaces_only = true;
  eo.primitive_only = true;
  std::vector<Word> words;
  for (const Word& w : enumerate_words(table.alphabet(), n_max, eo))
    if (std::find(lengths.begin(), lengths.end(), static_cast<int>(w.size())) != lengths.end()) words.push_back(w);
  std::vector<PrimitiveRates> out(words.size());
  parallel_for(words.size(), workers, [&](std::size_t i) {
    const PeriodicOrbit fw = solve_periodic_orbit(table, words[i]);
    const PeriodicOrbit bw = solve_periodic_orbit(table, reversed(words[i]));
    out[i].length = static_cast<int>(words[i].size());
    out[i].log_u = std::log(spectral_radius(fw.monodromy));
    // the inverse map along the reversed orbit: adjugates (det 1) in reverse order
    Mat2 inv = Mat2::identity();
    for (const Mat2& d : bw.differentials) inv = inv * Mat2{d.d, -d.b, -d.c, d.a};
    out[i].log_s = std::log(spectral_radius(inv));
  });
  return out;
}

std::vector<int> divisors_from_two(int n) {
  std::vector<int> d;
  for (int k = 2; k <= n; ++k)
    if (n % k == 0) d.push_back(k);
  return d;
}

// Each primitive necklace u with |u| = d | n contributes d periodic points
// of period n with multiplier Lambda(u)^(n/d).
double pressure_sum(const std::vector<PrimitiveRates>& rates, int n, Stability which, double delta, int* points) {
  double z = 0.0;
  int count = 0;
  for (const PrimitiveRates& r : rates) {
    if (n % r.length != 0) continue;
    const double log_lambda = (which == Stability::Unstable ? r.log_u : r.log_s) * (n / r.length);
    z += r.length * std::exp(-delta * log_lambda);
    count += r.length;
  }
  if (points) *points = count;
  return z;
}

double pressure_root(const std::vector<PrimitiveRates>& rates, int n, Stability which, double tol) {
  int points = 0;
  pressure_sum(rates, n, which, 0.0, &points);
  if (points < 2) throw Error(ErrorKind::Insufficient, "too few periodic orbits at depth " + std::to_string(n));
  double lo = 0.0, hi = 1.0;
  while (pressure_sum(rates, n, which, hi, nullptr) > 1.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw Error(ErrorKind::NonConvergence, "pressure root not bracketed");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (pressure_sum(rates, n, which, mid, nullptr) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double bowen_root(const Table& table, int n, Stability which, int workers, double tol) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "period depth must be at least 2");
  return pressure_root(primitive_rates(table, n, divisors_from_two(n), workers), n, which, tol);
}

double stable_slice_box_dimension(const Table& table, const Word& word, int depth, int workers,
                                  std::vector<BoxCount>* curve, int* points) {
  if (depth < 6) throw Error(ErrorKind::InvalidInput, "box counting needs slice depth >= 6");
  if (!is_admissible(word, true)) throw Error(ErrorKind::Inadmissible, "base word is not admissible");
  const std::vector<int> alphabet = table.alphabet();
  const InfiniteCode base = InfiniteCode::periodic(word, 0);
  const BoundaryCurve& bc = table.curve(base.symbol(0));
  const double s0 = code_point(table, base).s;

  // pasts a_1 .. a_depth at times -1 .. -depth
  std::vector<std::vector<int>> pasts{{}};
  for (int k = 0; k < depth; ++k) {
    std::vector<std::vector<int>> next;
    for (const auto& p : pasts) {
      const int prev = p.empty() ? base.symbol(0) : p.back();
      for (int a : alphabet)
        if (a != prev) {
          next.push_back(p);
          next.back().push_back(a);
        }
    }
    pasts = std::move(next);
  }
  std::vector<double> offsets(pasts.size());
  parallel_for(pasts.size(), workers, [&](std::size_t i) {
    InfiniteCode c;
    c.center.symbols.assign(pasts[i].rbegin(), pasts[i].rend());
    c.origin = depth;
    c.future = word;
    const int first = c.center.symbols.front();
    int q = alphabet.front();
    for (int a : alphabet)
      if (a != first) { q = a; break; }
    int p = alphabet.front();
    for (int a : alphabet)
      if (a != q) { p = a; break; }
    c.past = Word{p, q};
    offsets[i] = bc.offset(s0, code_point(table, c).s);
  });
  std::sort(offsets.begin(), offsets.end());
  const double span = offsets.back() - offsets.front();
  if (!(span > 0)) throw Error(ErrorKind::Insufficient, "stable slice is degenerate");

  // fit over whole periods of the base expansion, away from both ends
  const double lambda = std::exp(lyapunov_exponent(solve_periodic_orbit(table, word)));
  const int periods = depth - 5;
  const int per_period = 8;
  const int grid_shifts = 8;
  std::vector<double> xs, ys;
  for (int i = 0; i <= periods * per_period; ++i) {
    const double eps = span / std::pow(lambda, 2.0 + static_cast<double>(i) / per_period);
    long long best = std::numeric_limits<long long>::max();
    for (int g = 0; g < grid_shifts; ++g) {
      const double origin = offsets.front() - eps * g / grid_shifts;
      long long count = 0, last = std::numeric_limits<long long>::min();
      for (double x : offsets) {
        const long long box = static_cast<long long>(std::floor((x - origin) / eps));
        if (box != last) ++count, last = box;
      }
      best = std::min(best, count);
    }
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(std::log(static_cast<double>(best)));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (curve) {
    curve->clear();
    for (std::size_t i = 0; i < xs.size(); ++i) curve->push_back({xs[i], ys[i]});
  }
  if (points) *points = static_cast<int>(offsets.size());
  return sxy / sxx;
}

DimensionEstimate bowen_dimension(const Table& table, int n_min, int n_max, const DimensionOptions& opt) {
  if (n_min < 2 || n_max < n_min) throw Error(ErrorKind::InvalidInput, "need 2 <= n_min <= n_max");
  std::vector<int> lengths;
  for (int k = 2; k <= n_max; ++k) lengths.push_back(k);
  const std::vector<PrimitiveRates> rates = primitive_rates(table, n_max, lengths, opt.workers);
  DimensionEstimate est;
  for (int n = n_min; n <= n_max; ++n) {
    DimensionLevel lv;
    lv.n = n;
    pressure_sum(rates, n, Stability::Unstable, 0.0, &lv.periodic_points);
    lv.delta_u = pressure_root(rates, n, Stability::Unstable, opt.tol);
    lv.delta_s = pressure_root(rates, n, Stability::Stable, opt.tol);
    est.levels.push_back(lv);
  }
  if (est.levels.size() >= 3)
    est.stability = std::abs(est.levels.back().delta_u - est.levels[est.levels.size() - 3].delta_u);
  if (opt.box_depth > 0) {
    const std::vector<int> alphabet = table.alphabet();
    est.box_dimension = stable_slice_box_dimension(table, Word{alphabet[0], alphabet[1]}, opt.box_depth,
                                                   opt.workers, &est.box_curve, &est.box_points);
    est.box_depth = opt.box_depth;
    est.has_box = true;
  }
  return est;
}

// ---------------------------------------------------------------------------
// Trace cover

namespace {

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

bool ray_hits_polygon(Vec2 p, Vec2 d, const std::vector<Vec2>& poly) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i], e = poly[(i + 1) % poly.size()] - a;
    const double den = cross(d, e);
    if (den == 0.0) continue;
    const Vec2 w = a - p;
    const double t = cross(w, e) / den;
    const double u = cross(w, d) / den;
    if (t > 0 && u >= 0 && u <= 1) return true;
  }
  return false;
}

// Arc of obstacle id whose outward normal ray meets the hull of the other
// obstacles, widened by one sampling step on each side.
Interval normal_hull_arc(const Table& table, int id) {
  constexpr int kHullSamples = 1024;
  constexpr int kArcSamples = 4096;
  std::vector<Vec2> pts;
  for (const Obstacle& ob : table.obstacles()) {
    if (ob.id == id) continue;
    for (int i = 0; i < kHullSamples; ++i) pts.push_back(ob.curve.point(ob.curve.perimeter() * i / kHullSamples));
  }
  const std::vector<Vec2> hull = convex_hull(pts);
  const BoundaryCurve& c = table.curve(id);
  const double step = c.perimeter() / kArcSamples;
  std::vector<char> hit(kArcSamples);
  for (int i = 0; i < kArcSamples; ++i) {
    const Frame f = c.frame(step * i);
    hit[static_cast<std::size_t>(i)] = ray_hits_polygon(f.point, f.normal, hull);
  }
  int start = -1, runs = 0;
  for (int i = 0; i < kArcSamples; ++i)
    if (hit[static_cast<std::size_t>(i)] && !hit[static_cast<std::size_t>((i + kArcSamples - 1) % kArcSamples)]) {
      start = i;
      ++runs;
    }
  if (runs != 1) throw Error(ErrorKind::Geometry, "normal-ray arc of obstacle " + std::to_string(id) + " is not a single arc");
  int len = 0;
  while (hit[static_cast<std::size_t>((start + len) % kArcSamples)]) ++len;
  auto hits = [&](double s) {
    const Frame f = c.frame(c.wrap(s));
    return ray_hits_polygon(f.point, f.normal, hull);
  };
  // bisect each end between a miss and a hit
  auto edge = [&](double miss, double in) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (miss + in);
      (hits(mid) ? in : miss) = mid;
    }
    return miss;
  };
  // the sampled hull lies inside the true one by its sagitta; widen for it
  constexpr double kWiden = 1e-4;
  Interval arc;
  arc.lo = edge(step * (start - 1), step * start) - kWiden;
  arc.hi = edge(step * (start + len), step * (start + len - 1)) + kWiden;
  const double lo = c.wrap(arc.lo);
  arc.hi += lo - arc.lo;
  arc.lo = lo;
  return arc;
}

// Outward normal of obstacle id facing the bisector of its two neighbours.
double facing_site(const Table& table, int prev, int id, int next) {
  const Vec2 c = table.curve(id).params().center;
  const Vec2 d = normalized(table.curve(prev).params().center - c) + normalized(table.curve(next).params().center - c);
  double s = 0.0;
  table.curve(id).support(norm(d) > 1e-12 ? d : table.curve(next).params().center - c, &s);
  return s;
}

}  // namespace

double ObstacleTrace::measure() const {
  double m = 0.0;
  for (const Interval& iv : intervals) m += iv.length();
  return m;
}

const ObstacleTrace& TraceCover::obstacle(int id) const {
  for (const ObstacleTrace& o : obstacles)
    if (o.id == id) return o;
  throw Error(ErrorKind::InvalidInput, "no obstacle " + std::to_string(id) + " in the cover");
}

double TraceCover::measure() const {
  double m = 0.0;
  for (const ObstacleTrace& o : obstacles) m += o.measure();
  return m;
}

bool TraceCover::covers(int id, double s, double slack) const {
  const ObstacleTrace& o = obstacle(id);
  const double P = o.perimeter;
  for (const Interval& iv : o.intervals) {
    const double rel = std::fmod(std::fmod(s - iv.lo, P) + P, P);
    if (rel <= iv.length() + slack || rel >= P - slack) return true;
  }
  return false;
}

TraceCover trace_cover(const Table& table, int m, int workers) {
  if (m < 1) throw Error(ErrorKind::InvalidInput, "trace depth must be at least 1");
  const std::vector<int> alphabet = table.alphabet();
  std::map<int, Interval> hulls;
  for (int id : alphabet) hulls[id] = normal_hull_arc(table, id);

  EnumerateOptions eo;
  eo.min_length = 2 * m + 1;
  eo.periodic = false;
  const std::vector<Word> windows = enumerate_words(alphabet, 2 * m + 1, eo);

  // central site of each window as an offset from the start of its hull arc
  std::vector<Interval> spans(windows.size());
  std::vector<char> failed(windows.size(), 0);
  parallel_for(windows.size(), workers, [&](std::size_t w) {
    const Word& win = windows[w];
    const int n = static_cast<int>(win.size());
    std::vector<int> ids(win.symbols);
    std::vector<double> s(static_cast<std::size_t>(n));
    std::vector<char> fixed(static_cast<std::size_t>(n), 0);
    fixed.front() = fixed.back() = 1;
    for (int j = 1; j + 1 < n; ++j)
      s[static_cast<std::size_t>(j)] = facing_site(table, ids[static_cast<std::size_t>(j - 1)],
                                                   ids[static_cast<std::size_t>(j)], ids[static_cast<std::size_t>(j + 1)]);
    const Interval& h0 = hulls.at(ids.front());
    const Interval& h1 = hulls.at(ids.back());
    const BoundaryCurve& cc = table.curve(ids[static_cast<std::size_t>(m)]);
    const Interval& hc = hulls.at(ids[static_cast<std::size_t>(m)]);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    try {
      for (double e0 : {h0.lo, h0.hi})
        for (double e1 : {h1.lo, h1.hi}) {
          s.front() = table.curve(ids.front()).wrap(e0);
          s.back() = table.curve(ids.back()).wrap(e1);
          const double g = minimize_chain(table, ids, s, fixed);
          if (!(g < 1e-9)) throw Error(ErrorKind::NonConvergence, "clamped chain did not converge");
          const double rel = cc.wrap(s[static_cast<std::size_t>(m)] - hc.lo);
          lo = std::min(lo, rel);
          hi = std::max(hi, rel);
        }
      spans[w] = {lo, hi};
    } catch (const Error&) {
      failed[w] = 1;
    }
  });

  TraceCover cover;
  cover.depth = m;
  cover.windows = static_cast<int>(windows.size());
  for (int id : alphabet) {
    ObstacleTrace ot;
    ot.id = id;
    ot.hull = hulls.at(id);
    const double P = table.curve(id).perimeter();
    const double hull_len = ot.hull.length();
    std::vector<Interval> rel;
    bool whole = false;
    for (std::size_t w = 0; w < windows.size(); ++w) {
      if (windows[w][static_cast<std::size_t>(m)] != id) continue;
      if (failed[w]) {
        whole = true;  // nothing certified: keep the hull arc
        continue;
      }
      constexpr double kSlack = 1e-11;
      rel.push_back({std::max(0.0, spans[w].lo - kSlack), std::min(hull_len, spans[w].hi + kSlack)});
    }
    if (whole) rel.push_back({0.0, hull_len});
    std::sort(rel.begin(), rel.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const Interval& iv : rel) {
      if (!merged.empty() && iv.lo <= merged.back().hi)
        merged.back().hi = std::max(merged.back().hi, iv.hi);
      else
        merged.push_back(iv);
    }
    double prev = 0.0;
    for (const Interval& iv : merged) {
      if (iv.lo > prev && !ot.intervals.empty()) ot.gaps.push_back({ot.hull.lo + prev, ot.hull.lo + iv.lo});
      ot.intervals.push_back({ot.hull.lo + iv.lo, ot.hull.lo + iv.hi});
      prev = iv.hi;
    }
    // the last gap wraps through the part of the obstacle outside the hull arc
    const double first = merged.empty() ? hull_len : merged.front().lo;
    ot.gaps.push_back({ot.hull.lo + prev, ot.hull.lo + P + first});
    ot.perimeter = P;
    cover.obstacles.push_back(std::move(ot));
  }
  cover.failures = static_cast<int>(std::count(failed.begin(), failed.end(), 1));
  return cover;
}

// ---------------------------------------------------------------------------
// Gap perturbation

namespace {

void compare_spectra(const std::vector<MlsEntry>& base, const std::vector<MlsEntry>& other, double& max_delta,
                     Word& worst, int& failures) {
  max_delta = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (!base[i].ok || !other[i].ok) {
      ++failures;
      continue;
    }
    const double d = std::abs(base[i].length - other[i].length);
    if (d > max_delta || worst.empty()) max_delta = std::max(max_delta, d), worst = base[i].word;
  }
}

}  // namespace

GapExperimentReport gap_perturbation_experiment(const Table& table, const GapExperimentOptions& opt) {
  if (opt.margin < 1.0) throw Error(ErrorKind::InvalidInput, "gap margin must be at least 1");
  const TraceCover cover = trace_cover(table, opt.depth, opt.workers);
  const ObstacleTrace& ot = cover.obstacle(opt.obstacle);
  if (ot.gaps.empty() || ot.intervals.empty())
    throw Error(ErrorKind::Insufficient, "no interior gap at this depth");
  const auto gaps_end = opt.interior_only ? ot.gaps.end() - 1 : ot.gaps.end();
  if (gaps_end == ot.gaps.begin()) throw Error(ErrorKind::Insufficient, "no interior gap at this depth");
  const Interval gap = *std::max_element(ot.gaps.begin(), gaps_end,
                                         [](const Interval& a, const Interval& b) { return a.length() < b.length(); });
  const Interval cov = *std::max_element(ot.intervals.begin(), ot.intervals.end(),
                                         [](const Interval& a, const Interval& b) { return a.length() < b.length(); });
  const double support = gap.length() / opt.margin;
  if (!(support > 1e-6)) throw Error(ErrorKind::InvalidInput, "gap too small for the requested support");

  GapExperimentReport rep;
  rep.obstacle = opt.obstacle;
  rep.depth = opt.depth;
  rep.gap = gap;
  const double P = table.curve(opt.obstacle).perimeter();
  auto bump_at = [&](double center) {
    BumpPerturbation b;
    b.target_id = opt.obstacle;
    b.s_a = std::fmod(center - 0.5 * support + P, P);
    b.s_b = b.s_a + support;
    b.amplitude = opt.amplitude;
    b.order = opt.bump_order;
    return b;
  };
  rep.bump = bump_at(0.5 * (gap.lo + gap.hi));
  rep.control = bump_at(0.5 * (cov.lo + cov.hi));

  MlsOptions mo;
  mo.workers = opt.workers;
  const std::vector<MlsEntry> base = marked_length_spectrum(table, opt.max_length, mo);
  const std::vector<MlsEntry> bumped = marked_length_spectrum(perturb_boundary(table, rep.bump), opt.max_length, mo);
  const std::vector<MlsEntry> control =
      marked_length_spectrum(perturb_boundary(table, rep.control), opt.max_length, mo);
  rep.words = static_cast<int>(base.size());
  compare_spectra(base, bumped, rep.max_delta, rep.worst, rep.failures);
  compare_spectra(base, control, rep.control_max_delta, rep.control_worst, rep.failures);
  return rep;
}

// ---------------------------------------------------------------------------
// Unstable densities

std::vector<double> unstable_contractions(const Table& table, const InfiniteCode& z, int depth) {
  if (depth < 1) throw Error(ErrorKind::InvalidInput, "density depth must be positive");
  const int W = default_window(z) + depth + 2;
  const CodeTrajectory t = solve_code_point(table, z, W);

  // unstable direction of the past orbit at time -W, pushed forward
  const long long k0 = -W;
  const long long raw = k0 + z.origin;
  if (raw >= 0) throw Error(ErrorKind::InvalidInput, "window does not reach the periodic past");
  const int phase = static_cast<int>(mod(raw, static_cast<long long>(z.past.size())));
  const PeriodicOrbit past = solve_periodic_orbit(table, rotated(z.past, phase));
  Vec2 v = eigen(past.phase_monodromy).v_large;

  std::vector<double> growth(static_cast<std::size_t>(depth + 2), 0.0);  // growth at time -k, k = 1..depth+1
  for (long long k = k0; k <= -2; ++k) {
    const Mat2 J = flip_chart(chord_differential(chord(table, t.site(k), t.site(k + 1))));
    const Vec2 w = J * v;
    const double g = norm(w);
    if (-k <= depth + 1) growth[static_cast<std::size_t>(-k)] = g;
    v = (1.0 / g) * w;
  }
  // |DF^-1 at F^-k z on E^u| = 1 / (growth of DF at F^-k-1 z)
  std::vector<double> out(static_cast<std::size_t>(depth));
  for (int k = 1; k <= depth; ++k) out[static_cast<std::size_t>(k - 1)] = 1.0 / growth[static_cast<std::size_t>(k + 1)];
  return out;
}

DensityRatio unstable_density_ratio(const Table& table, const InfiniteCode& x, const InfiniteCode& y, double delta,
                                    int depth) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::InvalidInput, "delta must lie in (0, 1)");
  if (!pasts_agree(x, y)) throw Error(ErrorKind::InvalidInput, "pasts disagree");
  const std::vector<double> cx = unstable_contractions(table, x, depth);
  const std::vector<double> cy = unstable_contractions(table, y, depth);
  std::vector<double> terms(static_cast<std::size_t>(depth));
  for (int k = 0; k < depth; ++k)
    terms[static_cast<std::size_t>(k)] = std::log(cy[static_cast<std::size_t>(k)]) - std::log(cx[static_cast<std::size_t>(k)]);
  DensityRatio d;
  d.depth = depth;
  double acc = 0.0;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) acc += *it;
  d.log_value = delta * acc;
  d.value = std::exp(d.log_value);
  const double q = std::exp(-lyapunov_exponent(solve_periodic_orbit(table, x.past)));
  if (depth >= 2) {
    const double last = std::max(std::abs(terms[static_cast<std::size_t>(depth - 1)]),
                                 std::abs(terms[static_cast<std::size_t>(depth - 2)]) * q);
    d.tail = delta * last * q / (1.0 - q);
  }
  return d;
}

}  // namespace billiards
