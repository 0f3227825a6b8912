#pragma once

#include <map>
#include <string>
#include <vector>

#include "billiards/orbits.hpp"

namespace billiards {

using AlphabetMap = std::map<int, int>;

Word map_word(const Word& w, const AlphabetMap& map);
InfiniteCode map_code(const InfiniteCode& c, const AlphabetMap& map);

// ---------------------------------------------------------------------------
// Iso-length-spectral comparison

struct OrbitMatch {
  Word word;     // primitive necklace on table A
  Word word_b;   // its image under the alphabet map (same rotation)
  bool ok = false;
  PeriodicOrbit orbit_a, orbit_b;
  double delta = 0.0;  // |L_A - L_B|
  std::string error;
};

struct OrbitPairing {
  AlphabetMap alphabet;
  int max_length = 0;
  std::vector<OrbitMatch> matches;  // (length, lexicographic) order
  int failures() const;
};

/// Solves every primitive admissible necklace of length 2..max_length on
/// A and its mapped word on B. Solver failures are recorded per entry.
OrbitPairing match_periodic_orbits(const Table& a, const Table& b, const AlphabetMap& alphabet, int max_length,
                                   int workers = 1, const SolverOptions& opt = {});

struct IsoSpectralReport {
  bool pass = false;
  bool no_data = false;
  double tolerance = 0.0;
  double max_delta = 0.0;
  std::size_t compared = 0;
  std::size_t failures = 0;          // solver failures (count as mismatches)
  std::vector<OrbitMatch> worst;     // up to 10, largest delta first (orbits dropped)
};
IsoSpectralReport iso_length_spectral_report(const OrbitPairing& pairing, double tolerance);

// ---------------------------------------------------------------------------
// Conjugacy consequences

struct BounceMatch {
  Word word;
  int index = 0;
  PhasePoint a, b;
  double dr = 0.0;      // |r_B - r_A|
  double dtau = 0.0;    // |tau_B - tau_A| of the outgoing segment
  double dangle = 0.0;  // |angle_B - angle_A| between incoming and outgoing segments
  std::vector<double> djet;  // |K_A^(j)(s_A) - K_B^(j)(s_B)|, j = 0..order
};

struct DPsiSample {
  Word word;
  int phase = 0;
  PhasePoint a, b;
  bool ok = false;
  std::string error;
  Mat2 dpsi;
  double distance = 0.0;    // max-entry distance to the identity
  double scale = 0.0;       // largest neighbour offset used
  int depth = 0;            // smallest cylinder depth of the neighbours
  double a_entry = 0.0;     // dpsi(0,0)
  double b_entry = 0.0;     // dpsi(0,1)
  double r_ratio = 0.0;     // r_A / r_B, 0 when r_A vanishes
};

struct ConjugacyOptions {
  int jet_order = 1;
  double dpsi_scale = 1e-4;
  int dpsi_samples = 8;   // base points: first bounces of the shortest words
  int workers = 1;
};

struct ConjugacyReport {
  bool gated = false;  // the pairing was not iso-spectral
  std::string gate_reason;
  std::vector<BounceMatch> bounces;
  double max_dr = 0.0, max_dtau = 0.0, max_dangle = 0.0;
  std::vector<double> max_djet;
  std::vector<DPsiSample> dpsi;
  double max_dpsi_distance = 0.0;
  double max_a_mismatch = 0.0;  // |a - r_A/r_B| where |r_A| > 1e-3
  int dpsi_failures = 0;
};

/// Compares matched bounces of a pairing and estimates DPsi from central
/// differences over Cantor neighbours on both leaves. A pairing that fails
/// the iso-spectral test at `tolerance` yields a gated report.
ConjugacyReport conjugacy_consequence_report(const Table& a, const Table& b, const OrbitPairing& pairing,
                                             double tolerance, const ConjugacyOptions& opt = {});

// ---------------------------------------------------------------------------
// Dimension

struct DimensionLevel {
  int n = 0;
  double delta_u = 0.0;
  double delta_s = 0.0;
  int periodic_points = 0;  // admissible periodic words of length n
};

struct BoxCount {
  double log_inv_eps = 0.0;
  double log_count = 0.0;
};

struct DimensionEstimate {
  std::vector<DimensionLevel> levels;
  double stability = 0.0;  // |delta_u(n_max) - delta_u(n_max - 2)|
  bool has_box = false;
  double box_dimension = 0.0;
  int box_points = 0;
  int box_depth = 0;
  std::vector<BoxCount> box_curve;  // points inside the fit range
};

struct DimensionOptions {
  int workers = 1;
  int box_depth = 0;  // slice depth for box counting; 0 skips it
  double tol = 1e-12;
};

/// Root of sum over period-n points of Lambda^(-delta) = 1. Unstable uses the
/// spectral radius of each monodromy; Stable solves the reversed words and
/// uses the spectral radius of the inverse map along them.
double bowen_root(const Table& table, int n, Stability which, int workers = 1, double tol = 1e-12);

DimensionEstimate bowen_dimension(const Table& table, int n_min, int n_max, const DimensionOptions& opt = {});

/// Box-counting dimension of the Cantor set on the local stable leaf of the
/// periodic point (word, 0): all admissible pasts of length `depth`.
double stable_slice_box_dimension(const Table& table, const Word& word, int depth, int workers = 1,
                                  std::vector<BoxCount>* curve = nullptr, int* points = nullptr);

// ---------------------------------------------------------------------------
// Trace of the trapped set

struct Interval {
  double lo = 0.0;  // arclength; hi may exceed the perimeter to wrap
  double hi = 0.0;
  double length() const { return hi - lo; }
};

struct ObstacleTrace {
  int id = 0;
  Interval hull;                    // arc where the normal ray meets the hull of the others
  std::vector<Interval> intervals;  // disjoint, increasing, inside hull
  std::vector<Interval> gaps;       // complement on the circle; the last one wraps
  double perimeter = 0.0;
  double measure() const;
};

struct TraceCover {
  int depth = 0;
  std::vector<ObstacleTrace> obstacles;
  int windows = 0;
  int failures = 0;  // windows whose chain did not converge (the hull is kept)
  const ObstacleTrace& obstacle(int id) const;
  double measure() const;
  /// True when s on obstacle id lies in a cover interval (up to slack).
  bool covers(int id, double s, double slack = 1e-12) const;
};

/// For each admissible window of length 2m+1 the central site of the
/// clamped chain is monotone in the two end sites, so the four chains with
/// ends at the extremes of the hull arcs bound the central bounce of every
/// trapped orbit carrying that window.
TraceCover trace_cover(const Table& table, int m, int workers = 1);

// ---------------------------------------------------------------------------
// Gap perturbation

struct GapExperimentOptions {
  int obstacle = 1;
  int depth = 4;
  double amplitude = 1e-3;
  int max_length = 8;
  int bump_order = 6;
  double margin = 3.0;   // gap length >= margin * support
  bool interior_only = false;  // skip the gap through the back of the obstacle
  int workers = 1;
};

struct GapExperimentReport {
  int obstacle = 0;
  int depth = 0;
  Interval gap;
  BumpPerturbation bump, control;
  double max_delta = 0.0;
  Word worst;
  double control_max_delta = 0.0;
  Word control_worst;
  int words = 0;
  int failures = 0;
};

/// Bumps the widest gap of the depth-m cover (support = gap / margin,
/// centered) and, as a control, the same bump centered on the widest cover
/// interval; reports the largest MLS change of each.
GapExperimentReport gap_perturbation_experiment(const Table& table, const GapExperimentOptions& opt = {});

// ---------------------------------------------------------------------------
// Unstable densities

struct DensityRatio {
  double value = 1.0;
  double log_value = 0.0;
  double tail = 0.0;  // bound on |log| of the omitted factors
  int depth = 0;
};

/// prod_{k=1}^{depth} (|DF^-1 at F^-k y on E^u| / |DF^-1 at F^-k x on E^u|)^delta
/// with norms in the Euclidean (s, r) metric.
DensityRatio unstable_density_ratio(const Table& table, const InfiniteCode& x, const InfiniteCode& y, double delta,
                                    int depth = 40);

/// |DF^-1 at F^-k z restricted to E^u| for k = 1..depth.
std::vector<double> unstable_contractions(const Table& table, const InfiniteCode& z, int depth);

}  // namespace billiards
