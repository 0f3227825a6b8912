#pragma once

#include <random>
#include <string>
#include <vector>

#include "billiards/dynamics.hpp"
#include "billiards/geometry.hpp"
#include "billiards/symbolic.hpp"

namespace billiards {

struct SolverOptions {
  double tol = 1e-12;   // gradient infinity norm
  int max_iter = 200;
};

struct PeriodicOrbit {
  Word code;                       // as requested (rotation preserved)
  std::vector<Site> sites;
  std::vector<PhasePoint> points;  // r from the generating relation
  std::vector<double> segments;    // chord j joins site j and j+1
  std::vector<Mat2> differentials; // negative-twist differential of bounce j -> j+1
  double length = 0.0;
  Mat2 monodromy;                  // product of the negative-twist differentials
  Mat2 phase_monodromy;            // the same product in (s, r)
  double residual = 0.0;
  int iterations = 0;
  int period() const { return static_cast<int>(sites.size()); }
};

/// Critical point of the cyclic length functional with the given code.
/// `initial` overrides the default start (sites facing the neighbours).
PeriodicOrbit solve_periodic_orbit(const Table& table, const Word& word, const SolverOptions& opt = {},
                                   const std::vector<double>* initial = nullptr);

/// Per-bounce exponent (1/p) log rho(monodromy).
double lyapunov_exponent(const PeriodicOrbit& orbit);

/// Jacobi propagator over one period, starting just after the bounce at
/// points[0]. Flights and collisions come from the solved orbit rather than
/// from re-tracing the flow, which drifts off long unstable orbits.
PerpPropagator period_perp_propagator(const Table& table, const PeriodicOrbit& orbit);

struct MlsEntry {
  Word word;  // least rotation
  bool ok = false;
  double length = 0.0;
  double lyapunov = 0.0;
  double residual = 0.0;
  std::string error;
};
struct MlsOptions {
  bool primitive_only = true;
  int workers = 1;
  SolverOptions solver;
};
/// One entry per admissible necklace of length 2..max_length, in (length,
/// lexicographic) word order.
std::vector<MlsEntry> marked_length_spectrum(const Table& table, int max_length, const MlsOptions& opt = {});

// ---------------------------------------------------------------------------
// Open chains and points with infinite codes

/// Minimizes sum_j h(s_j, s_{j+1}) over the sites whose `fixed` flag is 0.
/// Returns the gradient infinity norm over free sites.
double minimize_chain(const Table& table, const std::vector<int>& ids, std::vector<double>& s,
                      const std::vector<char>& fixed, const SolverOptions& opt = {});

/// Orbit segment with sites at times -W-1 .. W+1; the outer two are
/// clamped to the periodic orbits that the code's tails describe.
struct CodeTrajectory {
  InfiniteCode code;
  int W = 0;
  std::vector<Site> sites;
  double residual = 0.0;

  Site site(long long k) const { return sites[static_cast<std::size_t>(k + W + 1)]; }
  /// Phase point at time k, -W-1 <= k <= W.
  PhasePoint at(const Table& table, long long k) const;
  /// Return time tau(F^k x) = h(site k, site k+1).
  double tau(const Table& table, long long k) const;
};

/// The point whose code is `code`. W defaults to the depth of the
/// non-periodic part plus a margin that puts the clamping error far below
/// roundoff.
CodeTrajectory solve_code_point(const Table& table, const InfiniteCode& code, int W = -1,
                                const SolverOptions& opt = {});
inline PhasePoint code_point(const Table& table, const InfiniteCode& code, int W = -1) {
  const CodeTrajectory t = solve_code_point(table, code, W);
  return t.at(table, 0);
}
int default_window(const InfiniteCode& code);

enum class Stability { Stable, Unstable };

/// Point of the local stable (unstable) leaf through the point with code
/// `code`, at arclength `s` on obstacle code.symbol(0): future (past)
/// sites follow the code, site 0 is clamped to s.
struct LeafPoint {
  PhasePoint point;
  std::vector<Site> sites;  // times 0..W+1 (stable) or -W-1..0 (unstable)
};
LeafPoint leaf_point(const Table& table, const InfiniteCode& code, Stability which, double s, int W = -1,
                     const std::vector<double>* warm = nullptr);

/// Anchored heteroclinic segment: past periodic word, bridge, future word.
struct HeteroclinicCode {
  Word past;
  Bridge bridge;  // the center bounce is bridge.center[0]
  Word future;
  InfiniteCode infinite() const;
};
struct OrbitSegment {
  InfiniteCode code;
  int window = 0;
  std::vector<Site> sites;
  PhasePoint center;
  double residual = 0.0;
};
OrbitSegment solve_anchored_segment(const Table& table, const HeteroclinicCode& code, int window);

/// [x, y]: future of x, past of y.
struct CodedPoint {
  InfiniteCode code;
  PhasePoint point;
};
CodedPoint make_coded_point(const Table& table, const InfiniteCode& code, int W = -1);
CodedPoint product_point(const Table& table, const CodedPoint& x, const CodedPoint& y, int W = -1);

// ---------------------------------------------------------------------------
// Invariant curves

struct CurveSample {
  double param = 0.0;  // signed s offset from the base point
  PhasePoint point;
};
struct InvariantCurve {
  PhasePoint base;
  Word orbit_code;
  int phase = 0;
  Stability stability = Stability::Unstable;
  Vec2 direction;  // eigen-direction at the base in (s, r)
  double eigenvalue = 0.0;
  std::vector<CurveSample> samples;  // sorted by param
  /// Linear interpolation of r at a given s offset.
  double r_at(double param) const;
};
/// Local leaf through the periodic point at `phase` of the orbit of `word`,
/// traced from its eigen-direction by iterating the period map.
InvariantCurve trace_invariant_curve(const Table& table, const Word& word, int phase, Stability which,
                                     double radius, int samples_per_domain = 64);
/// Largest |r| mismatch between the traced curve and the variational leaf
/// through the same point, after pushing each sample one bounce along the
/// contracting direction (backward for unstable, forward for stable).
double invariance_defect(const Table& table, const InvariantCurve& curve);

// ---------------------------------------------------------------------------
// Sampling

/// Points of the trapped set: bounces of periodic orbits of random
/// admissible words of the given length.
std::vector<PhasePoint> sample_trapped_points(const Table& table, int count, int word_length, unsigned seed);

/// Random admissible periodic word.
Word random_periodic_word(const std::vector<int>& alphabet, int length, std::mt19937_64& rng);

/// Differential of one chord in the reflected chart, from the chord data
/// alone (nu at both ends from the chord direction).
Mat2 chord_differential(const Chord& c);

}  // namespace billiards
