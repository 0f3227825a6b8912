#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "billiards/error.hpp"
#include "billiards/rigidity.hpp"

using namespace billiards;

namespace {

const Table& tri6() {
  static const Table t = build_table(three_disc_config());
  return t;
}

const AlphabetMap kIdentity{{1, 1}, {2, 2}, {3, 3}};

Table radius_perturbed() {
  TableConfig cfg = three_disc_config();
  cfg.obstacles[1].shape.radius = 1.1;
  return build_table(cfg);
}

const OrbitMatch& entry(const OrbitPairing& p, const std::string& w) {
  for (const OrbitMatch& m : p.matches)
    if (to_string(m.word) == w) return m;
  throw std::runtime_error("missing word " + w);
}

}  // namespace

TEST(AlphabetMap, MapsWordsAndCodes) {
  const AlphabetMap rot{{1, 2}, {2, 3}, {3, 1}};
  EXPECT_EQ(to_string(map_word(parse_word("1213"), rot)), "2321");
  const InfiniteCode c = InfiniteCode::splice(InfiniteCode::periodic(Word{1, 2}), InfiniteCode::periodic(Word{1, 3}));
  const InfiniteCode m = map_code(c, rot);
  for (int k = -6; k <= 6; ++k) EXPECT_EQ(m.symbol(k), rot.at(c.symbol(k)));
  EXPECT_THROW(map_word(Word{1, 4}, rot), Error);
}

TEST(MatchPeriodicOrbits, RejectsBadMaps) {
  EXPECT_THROW(match_periodic_orbits(tri6(), tri6(), {{1, 1}, {2, 2}}, 3), Error);
  EXPECT_THROW(match_periodic_orbits(tri6(), tri6(), {{1, 1}, {2, 1}, {3, 3}}, 3), Error);
  EXPECT_THROW(match_periodic_orbits(tri6(), tri6(), {{1, 1}, {2, 2}, {3, 7}}, 3), Error);
  EXPECT_THROW(match_periodic_orbits(tri6(), tri6(), kIdentity, 1), Error);
}

TEST(MatchPeriodicOrbits, SelfPairingIsExactAndComplete) {
  const OrbitPairing p = match_periodic_orbits(tri6(), tri6(), kIdentity, 6, 4);
  EnumerateOptions eo;
  eo.necklaces_only = true;
  eo.primitive_only = true;
  const std::vector<Word> words = enumerate_words({1, 2, 3}, 6, eo);
  ASSERT_EQ(p.matches.size(), words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    EXPECT_EQ(p.matches[i].word, words[i]);
    EXPECT_TRUE(p.matches[i].ok);
    EXPECT_EQ(p.matches[i].delta, 0.0);
  }
  EXPECT_EQ(p.failures(), 0);
}

TEST(MatchPeriodicOrbits, IsometricImageIsIsoSpectral) {
  const Table moved = apply_isometry(tri6(), 0.7, {1.3, -2.1});
  const OrbitPairing p = match_periodic_orbits(tri6(), moved, kIdentity, 6, 4);
  const IsoSpectralReport rep = iso_length_spectral_report(p, 1e-9);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.max_delta, 1e-10);
  EXPECT_TRUE(rep.worst.empty());
}

TEST(MatchPeriodicOrbits, RelabelingWithMatchingMapIsExact) {
  const AlphabetMap ids{{1, 3}, {2, 1}, {3, 2}};
  const OrbitPairing p = match_periodic_orbits(tri6(), relabel_table(tri6(), ids), ids, 5, 4);
  for (const OrbitMatch& m : p.matches) EXPECT_EQ(m.delta, 0.0) << to_string(m.word);
}

TEST(IsoSpectralReport, RadiusPerturbationFails) {
  const Table b = radius_perturbed();
  const OrbitPairing p2 = match_periodic_orbits(tri6(), b, kIdentity, 2);
  const IsoSpectralReport r2 = iso_length_spectral_report(p2, 1e-9);
  EXPECT_FALSE(r2.pass);
  ASSERT_FALSE(r2.worst.empty());
  EXPECT_EQ(to_string(r2.worst.front().word), "12");
  EXPECT_NEAR(r2.worst.front().delta, 0.2, 1e-10);

  const OrbitPairing p6 = match_periodic_orbits(tri6(), b, kIdentity, 6, 4);
  const IsoSpectralReport r6 = iso_length_spectral_report(p6, 1e-9);
  EXPECT_FALSE(r6.pass);
  EXPECT_EQ(r6.worst.size(), 10u);
  for (std::size_t i = 1; i < r6.worst.size(); ++i) EXPECT_GE(r6.worst[i - 1].delta, r6.worst[i].delta - 1e-12);
  EXPECT_NEAR(entry(p6, "12").delta, 0.2, 1e-10);
  EXPECT_LT(entry(p6, "13").delta, 1e-12);
}

TEST(IsoSpectralReport, EmptyPairingHasNoData) {
  const IsoSpectralReport rep = iso_length_spectral_report(OrbitPairing{}, 1e-9);
  EXPECT_FALSE(rep.pass);
  EXPECT_TRUE(rep.no_data);
}

TEST(ConjugacyReport, IsometricPairSatisfiesAllConsequences) {
  const Table moved = apply_isometry(tri6(), 0.7, {1.3, -2.1});
  const OrbitPairing p = match_periodic_orbits(tri6(), moved, kIdentity, 6, 4);
  ConjugacyOptions opt;
  opt.workers = 4;
  const ConjugacyReport rep = conjugacy_consequence_report(tri6(), moved, p, 1e-10, opt);
  ASSERT_FALSE(rep.gated);
  EXPECT_LT(rep.max_dr, 1e-10);
  EXPECT_LT(rep.max_dtau, 1e-10);
  EXPECT_LT(rep.max_dangle, 1e-10);
  ASSERT_EQ(rep.max_djet.size(), 2u);
  EXPECT_LT(rep.max_djet[0], 1e-8);
  EXPECT_LT(rep.max_djet[1], 1e-8);
  EXPECT_EQ(rep.dpsi_failures, 0);
  ASSERT_EQ(rep.dpsi.size(), 8u);
  for (const DPsiSample& d : rep.dpsi) {
    EXPECT_GT(d.scale, 1e-5);
    EXPECT_LT(d.scale, 1e-3);
  }
  EXPECT_LT(rep.max_dpsi_distance, 1e-4);
  EXPECT_LT(rep.max_a_mismatch, 1e-6);
}

TEST(ConjugacyReport, RotationSymmetryShiftsArclength) {
  // rotating tri6 by 2pi/3 about its center sends obstacle 1 to 2, 2 to 3, 3 to 1
  const AlphabetMap rot{{1, 2}, {2, 3}, {3, 1}};
  const OrbitPairing p = match_periodic_orbits(tri6(), tri6(), rot, 5, 4);
  ConjugacyOptions opt;
  opt.dpsi_samples = 4;
  const ConjugacyReport rep = conjugacy_consequence_report(tri6(), tri6(), p, 1e-10, opt);
  ASSERT_FALSE(rep.gated);
  EXPECT_LT(rep.max_dr, 1e-10);
  EXPECT_LT(rep.max_dtau, 1e-10);
  EXPECT_LT(rep.max_dpsi_distance, 1e-4);
  const double two_pi = 2 * std::numbers::pi;
  for (const BounceMatch& b : rep.bounces) {
    EXPECT_EQ(b.b.id, rot.at(b.a.id));
    const double shift = std::remainder(b.b.s - b.a.s - two_pi / 3, two_pi);
    EXPECT_NEAR(shift, 0.0, 1e-10);
  }
}

TEST(ConjugacyReport, PerturbedRadiusIsGated) {
  const Table b = radius_perturbed();
  const OrbitPairing p = match_periodic_orbits(tri6(), b, kIdentity, 4);
  const ConjugacyReport rep = conjugacy_consequence_report(tri6(), b, p, 1e-9);
  EXPECT_TRUE(rep.gated);
  EXPECT_TRUE(rep.bounces.empty());
  EXPECT_TRUE(conjugacy_consequence_report(tri6(), b, OrbitPairing{}, 1e-9).gated);
}

TEST(ConjugacyReport, GapBumpedTableMatchesOnTheTrappedSet) {
  // a bump on the back of obstacle 1 is invisible to every orbit
  const double P = tri6().curve(1).perimeter();
  BumpPerturbation bump{1, 0.5 * P, 0.5 * P + 1.0, 1e-3, 3};
  const Table b = perturb_boundary(tri6(), bump);
  const OrbitPairing p = match_periodic_orbits(tri6(), b, kIdentity, 5, 4);
  ConjugacyOptions opt;
  opt.dpsi_samples = 3;
  const ConjugacyReport rep = conjugacy_consequence_report(tri6(), b, p, 1e-10, opt);
  ASSERT_FALSE(rep.gated);
  EXPECT_LT(rep.max_dr, 1e-10);
  EXPECT_LT(rep.max_djet[1], 1e-8);
  opt.jet_order = 2;  // beyond the C^3 bump
  EXPECT_THROW(conjugacy_consequence_report(tri6(), b, p, 1e-10, opt), Error);
}

TEST(BowenDimension, SymmetricStableAndMatchesBoxCounting) {
  DimensionOptions opt;
  opt.workers = 4;
  opt.box_depth = 12;
  const DimensionEstimate est = bowen_dimension(tri6(), 2, 10, opt);
  ASSERT_EQ(est.levels.size(), 9u);
  for (const DimensionLevel& lv : est.levels) {
    EXPECT_NEAR(lv.delta_u, lv.delta_s, 1e-9) << lv.n;
    EXPECT_GT(lv.delta_u, 0.0);
    EXPECT_LT(lv.delta_u, 1.0);
    // 2^n + 2 (-1)^n admissible periodic words
    EXPECT_EQ(lv.periodic_points, (1 << lv.n) + (lv.n % 2 ? -2 : 2));
  }
  EXPECT_LT(est.stability, 1e-3);
  // successive even and odd levels approach each other
  const auto& L = est.levels;
  for (std::size_t i = 3; i < L.size(); ++i)
    EXPECT_LT(std::abs(L[i].delta_u - L[i - 1].delta_u), std::abs(L[i - 2].delta_u - L[i - 3].delta_u));
  ASSERT_TRUE(est.has_box);
  EXPECT_EQ(est.box_points, 4096);
  EXPECT_LT(std::abs(est.box_dimension / L.back().delta_u - 1.0), 0.05);
}

TEST(BowenDimension, LargerSeparationLowersDimension) {
  const Table wide = build_table(three_disc_config(12.0));
  EXPECT_LT(bowen_root(wide, 8, Stability::Unstable), bowen_root(tri6(), 8, Stability::Unstable));
  EXPECT_THROW(bowen_root(tri6(), 1, Stability::Unstable), Error);
}

TEST(TraceCover, DepthOneHasMirrorSymmetricClusters) {
  const TraceCover c = trace_cover(tri6(), 1);
  EXPECT_EQ(c.windows, 12);
  EXPECT_EQ(c.failures, 0);
  const ObstacleTrace& o = c.obstacle(1);
  // (2,1,3) and (3,1,2) carry the same bounces, so four windows give three intervals
  ASSERT_EQ(o.intervals.size(), 3u);
  // the mirror swapping obstacles 2 and 3 acts on obstacle 1 as s -> pi/3 - s
  const double two_pi = 2 * std::numbers::pi;
  for (std::size_t i = 0; i < 3; ++i) {
    const Interval& a = o.intervals[i];
    const Interval& b = o.intervals[2 - i];
    EXPECT_NEAR(std::remainder(std::numbers::pi / 3 - a.hi - b.lo, two_pi), 0.0, 1e-6);
    EXPECT_NEAR(std::remainder(std::numbers::pi / 3 - a.lo - b.hi, two_pi), 0.0, 1e-6);
  }
  // the 12 and 13 orbits bounce at the centers of the outer clusters
  EXPECT_TRUE(c.covers(1, 0.0));
  EXPECT_TRUE(c.covers(1, std::numbers::pi / 3));
  EXPECT_FALSE(c.covers(1, std::numbers::pi));
  EXPECT_THROW(trace_cover(tri6(), 0), Error);
}

TEST(TraceCover, NestedAndContainsPeriodicBounces) {
  std::vector<TraceCover> covers;
  for (int m = 1; m <= 4; ++m) covers.push_back(trace_cover(tri6(), m, 4));
  for (std::size_t i = 1; i < covers.size(); ++i) {
    EXPECT_LE(covers[i].measure(), covers[i - 1].measure());
    for (const ObstacleTrace& o : covers[i].obstacles) {
      const ObstacleTrace& prev = covers[i - 1].obstacle(o.id);
      for (const Interval& iv : o.intervals) {
        bool inside = false;
        for (const Interval& pv : prev.intervals)
          inside |= iv.lo >= pv.lo - 1e-12 && iv.hi <= pv.hi + 1e-12;
        EXPECT_TRUE(inside) << "obstacle " << o.id << " depth " << i + 1;
      }
    }
  }
  for (const TraceCover& c : covers) {
    for (const ObstacleTrace& o : c.obstacles) {
      for (std::size_t k = 1; k < o.intervals.size(); ++k) EXPECT_LT(o.intervals[k - 1].hi, o.intervals[k].lo);
      double total = o.measure();
      for (const Interval& g : o.gaps) total += g.length();
      EXPECT_NEAR(total, o.perimeter, 1e-9);
    }
  }
  EnumerateOptions eo;
  eo.necklaces_only = true;
  for (const Word& w : enumerate_words({1, 2, 3}, 9, eo)) {
    const PeriodicOrbit orbit = solve_periodic_orbit(tri6(), w);
    for (const PhasePoint& x : orbit.points)
      for (const TraceCover& c : covers) EXPECT_TRUE(c.covers(x.id, x.s)) << to_string(w) << " depth " << c.depth;
  }
}

TEST(GapExperiment, GapBumpIsInvisibleAndControlIsNot) {
  GapExperimentOptions opt;
  opt.workers = 4;
  const GapExperimentReport rep = gap_perturbation_experiment(tri6(), opt);
  EXPECT_EQ(rep.words, 71);
  EXPECT_EQ(rep.failures, 0);
  EXPECT_GE(rep.gap.length(), 3.0 * (rep.bump.s_b - rep.bump.s_a) - 1e-12);
  EXPECT_LT(rep.max_delta, 1e-9);
  EXPECT_GT(rep.control_max_delta, 1e-6);
}

TEST(GapExperiment, InteriorCantorGap) {
  GapExperimentOptions opt;
  opt.workers = 4;
  opt.interior_only = true;
  opt.margin = 1.5;
  opt.bump_order = 2;
  const GapExperimentReport rep = gap_perturbation_experiment(tri6(), opt);
  const TraceCover cover = trace_cover(tri6(), 4);
  // the chosen gap lies between two cover intervals
  EXPECT_TRUE(cover.covers(1, rep.gap.lo));
  EXPECT_TRUE(cover.covers(1, rep.gap.hi));
  EXPECT_FALSE(cover.covers(1, 0.5 * (rep.gap.lo + rep.gap.hi)));
  EXPECT_LT(rep.gap.length(), 1.0);
  EXPECT_LT(rep.max_delta, 1e-9);
  EXPECT_GT(rep.control_max_delta, 1e-6);
}

TEST(GapExperiment, ZeroAmplitudeAndBadMargin) {
  GapExperimentOptions opt;
  opt.amplitude = 0.0;
  opt.max_length = 5;
  const GapExperimentReport rep = gap_perturbation_experiment(tri6(), opt);
  EXPECT_LT(rep.max_delta, 1e-12);
  EXPECT_LT(rep.control_max_delta, 1e-12);
  opt.margin = 0.5;
  EXPECT_THROW(gap_perturbation_experiment(tri6(), opt), Error);
}

namespace {

InfiniteCode past_of_12(const Word& future) {
  return InfiniteCode::splice(InfiniteCode::periodic(future), InfiniteCode::periodic(Word{1, 2}));
}

}  // namespace

TEST(DensityRatio, IdentityMultiplicativityEquivariance) {
  const double delta = 0.29;
  const InfiniteCode x = InfiniteCode::periodic(Word{1, 2});
  const InfiniteCode y = past_of_12(Word{1, 3});
  const InfiniteCode z = past_of_12(Word{1, 2, 3});
  EXPECT_EQ(unstable_density_ratio(tri6(), y, y, delta).value, 1.0);

  const DensityRatio xy = unstable_density_ratio(tri6(), x, y, delta);
  const DensityRatio yz = unstable_density_ratio(tri6(), y, z, delta);
  const DensityRatio xz = unstable_density_ratio(tri6(), x, z, delta);
  EXPECT_NE(xy.value, 1.0);
  EXPECT_LT(xy.tail, 1e-12);
  EXPECT_NEAR(xy.value * yz.value, xz.value, 1e-8);

  // rho(y, z) = rho(F^-1 y, F^-1 z) (c_z / c_y)^delta with c the first backward contraction
  const DensityRatio back = unstable_density_ratio(tri6(), y.shifted(-1), z.shifted(-1), delta);
  const double cy = unstable_contractions(tri6(), y, 1)[0];
  const double cz = unstable_contractions(tri6(), z, 1)[0];
  EXPECT_NEAR(back.value * std::pow(cz / cy, delta), yz.value, 1e-8);
}

TEST(DensityRatio, Preconditions) {
  const InfiniteCode x = InfiniteCode::periodic(Word{1, 2});
  const InfiniteCode other = InfiniteCode::splice(x, InfiniteCode::periodic(Word{1, 3}));
  EXPECT_THROW(unstable_density_ratio(tri6(), x, other, 0.3), Error);
  EXPECT_THROW(unstable_density_ratio(tri6(), x, x, 1.5), Error);
}

TEST(DensityRatio, ContractionsMatchThePeriodicOrbit) {
  // on a periodic orbit the contractions are periodic and multiply to the
  // inverse of the unstable eigenvalue over a period
  const InfiniteCode x = InfiniteCode::periodic(Word{1, 2, 3});
  const std::vector<double> c = unstable_contractions(tri6(), x, 9);
  for (int k = 3; k < 9; ++k) EXPECT_NEAR(c[static_cast<std::size_t>(k)], c[static_cast<std::size_t>(k - 3)], 1e-12);
  const PeriodicOrbit orbit = solve_periodic_orbit(tri6(), Word{1, 2, 3});
  EXPECT_NEAR(c[0] * c[1] * c[2] * spectral_radius(orbit.monodromy), 1.0, 1e-10);
}
