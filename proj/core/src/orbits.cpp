#include "billiards/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "billiards/error.hpp"
#include "billiards/parallel.hpp"

namespace billiards {

namespace {

long long mod(long long a, long long m) {
  const long long r = a % m;
  return r < 0 ? r + m : r;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

void check_ids(const Table& table, const std::vector<int>& ids) {
  for (int id : ids)
    if (!table.has(id)) throw Error(ErrorKind::InvalidInput, "symbol " + std::to_string(id) + " is not an obstacle id");
}

// Boundary point of obstacle `id` facing the segment between the centers of
// its two neighbours.
double initial_site(const Table& table, int prev, int id, int next) {
  const Vec2 a = table.curve(prev).params().center, b = table.curve(next).params().center;
  const Vec2 c = table.curve(id).params().center;
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(c - a, ab) / len2, 0.0, 1.0) : 0.0;
  Vec2 d = a + t * ab - c;
  if (norm(d) < 1e-12) d = 0.5 * (a + b) - c;
  double s = 0.0;
  table.curve(id).support(normalized(d), &s);
  return s;
}

// Newton iteration on the total length of a broken line. Cyclic problems
// close the line; fixed sites keep their value.
class LengthProblem {
 public:
  LengthProblem(const Table& table, const std::vector<int>& ids, bool cyclic, const std::vector<char>* fixed)
      : table_(table), ids_(ids), cyclic_(cyclic), fixed_(fixed) {
    n_ = ids.size();
    m_ = cyclic ? n_ : n_ - 1;
    double min_perimeter = std::numeric_limits<double>::infinity();
    for (int id : ids) min_perimeter = std::min(min_perimeter, table.curve(id).perimeter());
    clamp_ = min_perimeter / 25.0;
  }

  double length(const std::vector<double>& s) const {
    double total = 0.0;
    for (std::size_t j = 0; j < m_; ++j) total += chord_length(table_, site(s, j), site(s, (j + 1) % n_));
    return total;
  }

  // Fills gradient and Hessian; returns the gradient infinity norm.
  double assemble(const std::vector<double>& s) {
    chords_.resize(m_);
    for (std::size_t j = 0; j < m_; ++j) chords_[j] = chord(table_, site(s, j), site(s, (j + 1) % n_));
    g_.assign(n_, 0.0);
    diag_.assign(n_, 0.0);
    lower_.assign(n_, 0.0);
    upper_.assign(n_, 0.0);
    double gnorm = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (is_fixed(j)) {
        diag_[j] = 1.0;
        continue;
      }
      const bool has_prev = cyclic_ || j > 0, has_next = cyclic_ || j + 1 < n_;
      const std::size_t jp = (j + n_ - 1) % n_;
      if (has_prev) {
        const Chord& c = chords_[cyclic_ ? jp : j - 1];
        g_[j] += c.d2;
        diag_[j] += c.d22;
        if (!is_fixed(jp)) lower_[j] = c.d12;
      }
      if (has_next) {
        const Chord& c = chords_[j];
        g_[j] += c.d1;
        diag_[j] += c.d11;
        if (!is_fixed((j + 1) % n_)) upper_[j] = c.d12;
      }
      gnorm = std::max(gnorm, std::abs(g_[j]));
    }
    return gnorm;
  }

  std::vector<double> newton_direction() const {
    std::vector<double> rhs(n_);
    for (std::size_t j = 0; j < n_; ++j) rhs[j] = -g_[j];
    if (cyclic_ && n_ == 2) {
      const double a = diag_[0], d = diag_[1], b = upper_[0] + lower_[0];
      const double det = a * d - b * b;
      return {(d * rhs[0] - b * rhs[1]) / det, (a * rhs[1] - b * rhs[0]) / det};
    }
    if (cyclic_) return solve_cyclic_tridiagonal(lower_, diag_, upper_, rhs);
    return solve_tridiagonal(lower_, diag_, upper_, rhs);
  }

  // Returns the number of iterations; throws NonConvergence at the cap.
  int solve(std::vector<double>& s, const SolverOptions& opt, double& residual) {
    for (int it = 0; it < opt.max_iter; ++it) {
      residual = assemble(s);
      if (residual < opt.tol) return it;
      std::vector<double> step = newton_direction();
      double slope = 0.0;
      bool finite = true;
      for (std::size_t j = 0; j < n_; ++j) {
        slope += g_[j] * step[j];
        finite = finite && std::isfinite(step[j]);
      }
      if (!finite || slope >= 0.0) {
        // Gauss-Seidel style fallback: independent one-site Newton moves
        slope = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
          step[j] = diag_[j] > 0.0 ? -g_[j] / diag_[j] : -g_[j];
          slope += g_[j] * step[j];
        }
      }
      double biggest = 0.0;
      for (double d : step) biggest = std::max(biggest, std::abs(d));
      if (biggest > clamp_) {
        const double k = clamp_ / biggest;
        for (double& d : step) d *= k;
        slope *= k;
      }
      std::vector<double> trial(n_);
      double alpha = 1.0;
      if (residual > 1e-6) {
        const double l0 = length(s);
        for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
          for (std::size_t j = 0; j < n_; ++j) trial[j] = s[j] + alpha * step[j];
          if (length(trial) <= l0 + 1e-4 * alpha * slope) break;
        }
      }
      for (std::size_t j = 0; j < n_; ++j)
        if (!is_fixed(j)) s[j] = table_.curve(ids_[j]).wrap(s[j] + alpha * step[j]);
    }
    residual = assemble(s);
    if (residual < opt.tol) return opt.max_iter;
    throw Error(ErrorKind::NonConvergence, "length functional stalled at residual " + fmt(residual));
  }

  const std::vector<Chord>& chords() const { return chords_; }

 private:
  Site site(const std::vector<double>& s, std::size_t j) const { return {ids_[j], s[j]}; }
  bool is_fixed(std::size_t j) const { return fixed_ && (*fixed_)[j]; }

  const Table& table_;
  const std::vector<int>& ids_;
  bool cyclic_;
  const std::vector<char>* fixed_;
  std::size_t n_ = 0, m_ = 0;
  double clamp_ = 1.0;
  std::vector<Chord> chords_;
  std::vector<double> g_, diag_, lower_, upper_;
};

}  // namespace

Mat2 chord_differential(const Chord& c) {
  const double nu0 = dot(c.v, c.f0.normal), nu1 = -dot(c.v, c.f1.normal);
  return differential_formula(c.h, c.f0.curvature, c.f1.curvature, nu0, nu1);
}

PeriodicOrbit solve_periodic_orbit(const Table& table, const Word& word, const SolverOptions& opt,
                                   const std::vector<double>* initial) {
  if (word.size() < 2 || !is_admissible(word, true))
    throw Error(ErrorKind::Inadmissible, "word '" + to_string(word) + "' is not admissible");
  const std::vector<int>& ids = word.symbols;
  check_ids(table, ids);
  const std::size_t p = ids.size();
  std::vector<double> s(p);
  if (initial) {
    if (initial->size() != p) throw Error(ErrorKind::InvalidInput, "initial sites do not match the word length");
    s = *initial;
  } else {
    for (std::size_t j = 0; j < p; ++j) s[j] = initial_site(table, ids[(j + p - 1) % p], ids[j], ids[(j + 1) % p]);
  }

  LengthProblem problem(table, ids, true, nullptr);
  PeriodicOrbit orbit;
  orbit.code = word;
  orbit.iterations = problem.solve(s, opt, orbit.residual);
  problem.assemble(s);
  const std::vector<Chord>& chords = problem.chords();
  orbit.monodromy = Mat2::identity();
  for (std::size_t j = 0; j < p; ++j) {
    orbit.sites.push_back({ids[j], s[j]});
    orbit.points.push_back({ids[j], s[j], chords[j].d1});
    orbit.segments.push_back(chords[j].h);
    orbit.length += chords[j].h;
    const Mat2 m = chord_differential(chords[j]);
    orbit.differentials.push_back(m);
    orbit.monodromy = m * orbit.monodromy;
  }
  orbit.phase_monodromy = flip_chart(orbit.monodromy);
  return orbit;
}

double lyapunov_exponent(const PeriodicOrbit& orbit) {
  if (!(std::abs(orbit.monodromy.trace()) > 2.0))
    throw Error(ErrorKind::InvalidInput, "monodromy is not hyperbolic (|trace| <= 2)");
  return std::log(spectral_radius(orbit.monodromy)) / orbit.period();
}

PerpPropagator period_perp_propagator(const Table& table, const PeriodicOrbit& orbit) {
  PerpPropagator out;
  const int p = orbit.period();
  for (int k = 0; k < p; ++k) {
    const PhasePoint& next = orbit.points[static_cast<std::size_t>((k + 1) % p)];
    const double K = table.curve(next.id).frame(next.s).curvature;
    out.matrix = Mat2{1.0, orbit.segments[static_cast<std::size_t>(k)], 0.0, 1.0} * out.matrix;
    out.matrix = Mat2{-1.0, 0.0, -2.0 * K / next.nu(), -1.0} * out.matrix;
  }
  out.elapsed = orbit.length;
  out.collisions = p;
  return out;
}

std::vector<MlsEntry> marked_length_spectrum(const Table& table, int max_length, const MlsOptions& opt) {
  EnumerateOptions eo;
  eo.necklaces_only = true;
  eo.primitive_only = opt.primitive_only;
  const std::vector<Word> words = enumerate_words(table.alphabet(), max_length, eo);
  std::vector<MlsEntry> out(words.size());
  parallel_for(words.size(), opt.workers, [&](std::size_t i) {
    MlsEntry& e = out[i];
    e.word = words[i];
    try {
      const PeriodicOrbit orbit = solve_periodic_orbit(table, words[i], opt.solver);
      e.length = orbit.length;
      e.residual = orbit.residual;
      e.lyapunov = lyapunov_exponent(orbit);
      e.ok = true;
    } catch (const Error& err) {
      e.error = err.what();
    }
  });
  return out;
}

double minimize_chain(const Table& table, const std::vector<int>& ids, std::vector<double>& s,
                      const std::vector<char>& fixed, const SolverOptions& opt) {
  if (ids.size() != s.size() || fixed.size() != s.size() || ids.size() < 2)
    throw Error(ErrorKind::InvalidInput, "chain: inconsistent sizes");
  check_ids(table, ids);
  for (std::size_t j = 1; j < ids.size(); ++j)
    if (ids[j] == ids[j - 1]) throw Error(ErrorKind::Inadmissible, "chain repeats an obstacle");
  LengthProblem problem(table, ids, false, &fixed);
  double residual = 0.0;
  problem.solve(s, opt, residual);
  return residual;
}

// ---------------------------------------------------------------------------
// Codes

namespace {

struct Tails {
  PeriodicOrbit past, future;
};

Tails solve_tails(const Table& table, const InfiniteCode& code) {
  return {solve_periodic_orbit(table, code.past), solve_periodic_orbit(table, code.future)};
}

// Site at time k taken from the periodic orbit the code follows there.
double tail_site(const InfiniteCode& code, const Tails& tails, long long k) {
  if (k >= code.future_start()) {
    const long long i = mod(k + code.origin - static_cast<long long>(code.center.size()),
                            static_cast<long long>(code.future.size()));
    return tails.future.sites[static_cast<std::size_t>(i)].s;
  }
  const long long i = mod(k + code.origin, static_cast<long long>(code.past.size()));
  return tails.past.sites[static_cast<std::size_t>(i)].s;
}

// Initial sites for times lo..hi.
std::vector<double> initial_chain(const Table& table, const InfiniteCode& code, const Tails& tails, long long lo,
                                  long long hi) {
  std::vector<double> s;
  for (long long k = lo; k <= hi; ++k) {
    if (k >= code.future_start() || k < code.past_end()) s.push_back(tail_site(code, tails, k));
    else s.push_back(initial_site(table, code.symbol(k - 1), code.symbol(k), code.symbol(k + 1)));
  }
  return s;
}

void check_code(const Table& table, const InfiniteCode& code) {
  if (!code.admissible()) throw Error(ErrorKind::Inadmissible, "code " + to_string(code) + " is not admissible");
  check_ids(table, code.past.symbols);
  check_ids(table, code.center.symbols);
  check_ids(table, code.future.symbols);
}

}  // namespace

int default_window(const InfiniteCode& code) {
  return static_cast<int>(std::max<long long>({code.future_start(), -code.past_end(), 0})) + 40;
}

PhasePoint CodeTrajectory::at(const Table& table, long long k) const {
  const Site a = site(k), b = site(k + 1);
  return {a.id, a.s, chord(table, a, b).d1};
}

double CodeTrajectory::tau(const Table& table, long long k) const {
  return chord_length(table, site(k), site(k + 1));
}

CodeTrajectory solve_code_point(const Table& table, const InfiniteCode& code, int W, const SolverOptions& opt) {
  check_code(table, code);
  if (W < 0) W = default_window(code);
  if (W < std::max<long long>(code.future_start(), -code.past_end()))
    throw Error(ErrorKind::InvalidInput, "window ends inside the non-periodic part of the code");
  const Tails tails = solve_tails(table, code);
  const long long lo = -static_cast<long long>(W) - 1, hi = static_cast<long long>(W) + 1;
  std::vector<int> ids;
  for (long long k = lo; k <= hi; ++k) ids.push_back(code.symbol(k));
  std::vector<double> s = initial_chain(table, code, tails, lo, hi);
  std::vector<char> fixed(ids.size(), 0);
  fixed[0] = fixed[ids.size() - 1] = 1;
  CodeTrajectory t;
  t.code = code;
  t.W = W;
  t.residual = minimize_chain(table, ids, s, fixed, opt);
  for (std::size_t j = 0; j < s.size(); ++j) t.sites.push_back({ids[j], s[j]});
  return t;
}

LeafPoint leaf_point(const Table& table, const InfiniteCode& code, Stability which, double s0, int W,
                     const std::vector<double>* warm) {
  check_code(table, code);
  if (W < 0) W = default_window(code);
  const bool stable = which == Stability::Stable;
  if (stable ? W + 1 < code.future_start() : -W - 1 >= code.past_end())
    throw Error(ErrorKind::InvalidInput, "leaf window ends inside the non-periodic part of the code");
  const Tails tails = solve_tails(table, code);
  const long long lo = stable ? 0 : -static_cast<long long>(W) - 1;
  const long long hi = stable ? static_cast<long long>(W) + 1 : 0;
  std::vector<int> ids;
  for (long long k = lo; k <= hi; ++k) ids.push_back(code.symbol(k));
  std::vector<double> s;
  if (warm && warm->size() == ids.size()) s = *warm;
  else s = initial_chain(table, code, tails, lo, hi);
  std::vector<char> fixed(ids.size(), 0);
  fixed[0] = fixed[ids.size() - 1] = 1;
  const std::size_t i0 = stable ? 0 : s.size() - 1;
  s[i0] = table.curve(ids[i0]).wrap(s0);
  if (stable) s.back() = tail_site(code, tails, hi);
  else s.front() = tail_site(code, tails, lo);
  minimize_chain(table, ids, s, fixed);
  LeafPoint out;
  for (std::size_t j = 0; j < s.size(); ++j) out.sites.push_back({ids[j], s[j]});
  const double r = stable ? chord(table, out.sites[0], out.sites[1]).d1
                          : -chord(table, out.sites[s.size() - 2], out.sites[s.size() - 1]).d2;
  out.point = {ids[i0], s[i0], r};
  return out;
}

InfiniteCode HeteroclinicCode::infinite() const {
  if (bridge.center.empty()) throw Error(ErrorKind::InvalidInput, "bridge needs a center symbol");
  InfiniteCode c;
  c.past = past;
  c.future = future;
  c.center = concat(concat(bridge.minus, bridge.center), bridge.plus);
  c.origin = static_cast<int>(bridge.minus.size());
  return c;
}

OrbitSegment solve_anchored_segment(const Table& table, const HeteroclinicCode& code, int window) {
  const InfiniteCode c = code.infinite();
  if (!c.admissible()) throw Error(ErrorKind::Inadmissible, "inadmissible splice " + to_string(c));
  if (window < std::max<long long>(c.future_start(), -c.past_end()))
    throw Error(ErrorKind::InvalidInput, "anchors fall inside the bridge blocks");
  const CodeTrajectory t = solve_code_point(table, c, window);
  OrbitSegment seg;
  seg.code = c;
  seg.window = window;
  seg.sites = t.sites;
  seg.center = t.at(table, 0);
  seg.residual = t.residual;
  return seg;
}

CodedPoint make_coded_point(const Table& table, const InfiniteCode& code, int W) {
  return {code, code_point(table, code, W)};
}

CodedPoint product_point(const Table& table, const CodedPoint& x, const CodedPoint& y, int W) {
  if (x.code.symbol(0) != y.code.symbol(0))
    throw Error(ErrorKind::Inadmissible, "points lie on different obstacles");
  const InfiniteCode c = InfiniteCode::splice(x.code, y.code);
  if (!c.admissible()) throw Error(ErrorKind::Inadmissible, "points do not share a rectangle");
  return make_coded_point(table, c, W);
}

// ---------------------------------------------------------------------------
// Invariant curves

double InvariantCurve::r_at(double param) const {
  if (samples.empty()) throw Error(ErrorKind::Insufficient, "empty curve");
  if (samples.size() == 1 || param <= samples.front().param) return samples.front().point.r;
  if (param >= samples.back().param) return samples.back().point.r;
  const auto it = std::lower_bound(samples.begin(), samples.end(), param,
                                   [](const CurveSample& a, double p) { return a.param < p; });
  const CurveSample& b = *it;
  const CurveSample& a = *(it - 1);
  const double t = (param - a.param) / (b.param - a.param);
  return (1.0 - t) * a.point.r + t * b.point.r;
}

InvariantCurve trace_invariant_curve(const Table& table, const Word& word, int phase, Stability which,
                                     double radius, int samples_per_domain) {
  if (!(radius >= 0.0)) throw Error(ErrorKind::InvalidInput, "radius must be non-negative");
  if (samples_per_domain < 1) throw Error(ErrorKind::InvalidInput, "need at least one sample per domain");
  const PeriodicOrbit orbit = solve_periodic_orbit(table, word);
  const int p = orbit.period();
  phase = static_cast<int>(mod(phase, p));
  InvariantCurve curve;
  curve.base = orbit.points[static_cast<std::size_t>(phase)];
  curve.orbit_code = word;
  curve.phase = phase;
  curve.stability = which;
  Mat2 g = Mat2::identity();
  for (int i = 0; i < p; ++i) g = flip_chart(orbit.differentials[static_cast<std::size_t>((phase + i) % p)]) * g;
  const Eigen2 e = eigen(g);
  if (!e.real || std::abs(e.lambda_large) <= 1.0) throw Error(ErrorKind::InvalidInput, "orbit is not hyperbolic");
  const bool unstable = which == Stability::Unstable;
  Vec2 dir = unstable ? e.v_large : e.v_small;
  if (dir.x < 0.0) dir = -dir;
  curve.direction = dir;
  curve.eigenvalue = unstable ? e.lambda_large : e.lambda_small;
  curve.samples.push_back({0.0, curve.base});
  if (radius == 0.0) return curve;

  const double mu = std::abs(e.lambda_large);
  const BoundaryCurve& own = table.curve(curve.base.id);
  const Direction step_dir = unstable ? Direction::Forward : Direction::Backward;
  // the whole seed domain [eps, mu eps] stays where the tangent line is accurate to rounding
  const double eps = std::min(1e-7, radius) / mu;
  for (int sign : {-1, 1}) {
    for (int i = 0; i < samples_per_domain; ++i) {
      const double t = sign * eps * std::pow(mu, static_cast<double>(i) / samples_per_domain);
      PhasePoint x{curve.base.id, own.wrap(curve.base.s + t * dir.x), curve.base.r + t * dir.y};
      double param = own.offset(curve.base.s, x.s);
      for (int iter = 0; iter < 200 && std::abs(param) <= radius; ++iter) {
        curve.samples.push_back({param, x});
        // one period, checking the itinerary against the orbit
        bool on_leaf = true;
        try {
          for (int b = 0; b < p && on_leaf; ++b) {
            x = billiard_map(table, x, step_dir).image;
            const int expect = unstable ? (phase + b + 1) % p : static_cast<int>(mod(phase - b - 1, p));
            on_leaf = x.id == orbit.sites[static_cast<std::size_t>(expect)].id;
          }
        } catch (const Error& err) {
          if (err.kind() != ErrorKind::Escape && err.kind() != ErrorKind::Tangency) throw;
          on_leaf = false;
        }
        if (!on_leaf) {
          if (mu * std::abs(param) < radius)
            throw Error(ErrorKind::Tangency, "tracing radius leaves the region clear of escapes and tangencies");
          break;
        }
        param = own.offset(curve.base.s, x.s);
      }
    }
  }
  std::sort(curve.samples.begin(), curve.samples.end(),
            [](const CurveSample& a, const CurveSample& b) { return a.param < b.param; });
  return curve;
}

double invariance_defect(const Table& table, const InvariantCurve& curve) {
  const bool unstable = curve.stability == Stability::Unstable;
  const int p = static_cast<int>(curve.orbit_code.size());
  // push in the contracting direction so every sample stays near the orbit
  const int next = static_cast<int>(mod(curve.phase + (unstable ? -1 : 1), p));
  const InfiniteCode code = InfiniteCode::periodic(curve.orbit_code, next);
  double worst = 0.0;
  std::vector<double> warm;
  for (const CurveSample& c : curve.samples) {
    const MapStep step = billiard_map(table, c.point, unstable ? Direction::Backward : Direction::Forward);
    const LeafPoint lp = leaf_point(table, code, curve.stability, step.image.s, -1, warm.empty() ? nullptr : &warm);
    warm.clear();
    for (const Site& s : lp.sites) warm.push_back(s.s);
    worst = std::max(worst, std::abs(lp.point.r - step.image.r));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Sampling

Word random_periodic_word(const std::vector<int>& alphabet, int length, std::mt19937_64& rng) {
  if (alphabet.size() < 3 && length % 2 == 1)
    throw Error(ErrorKind::InvalidInput, "two symbols admit no odd periodic word");
  if (length < 2) throw Error(ErrorKind::InvalidInput, "periodic words need length >= 2");
  const auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  while (true) {
    Word w;
    w.symbols.push_back(alphabet[pick(alphabet.size())]);
    for (int i = 1; i < length; ++i) {
      // uniform over the symbols different from the previous one
      std::size_t k = pick(alphabet.size() - 1);
      const int prev = w.symbols.back();
      int sym = alphabet[k];
      if (sym == prev) sym = alphabet.back();
      w.symbols.push_back(sym);
    }
    if (w.symbols.front() != w.symbols.back()) return w;
  }
}

std::vector<PhasePoint> sample_trapped_points(const Table& table, int count, int word_length, unsigned seed) {
  std::mt19937_64 rng(seed);
  const std::vector<int> alphabet = table.alphabet();
  std::vector<PhasePoint> out;
  while (static_cast<int>(out.size()) < count) {
    const PeriodicOrbit orbit = solve_periodic_orbit(table, random_periodic_word(alphabet, word_length, rng));
    for (const PhasePoint& x : orbit.points) {
      if (static_cast<int>(out.size()) == count) break;
      out.push_back(x);
    }
  }
  return out;
}

}  // namespace billiards
