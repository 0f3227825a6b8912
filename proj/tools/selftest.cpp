#include "selftest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "billiards/displacement.hpp"
#include "billiards/error.hpp"
#include "billiards/rigidity.hpp"

namespace billiards::cli {

namespace {

SuiteResult verdict(std::string name, double value, double tol, std::string detail = {}) {
  SuiteResult r;
  r.name = std::move(name);
  r.value = value;
  r.tolerance = tol;
  r.pass = value <= tol;
  r.detail = std::move(detail);
  return r;
}

InfiniteCode periodic(int a, int b) { return InfiniteCode::periodic(Word{a, b}); }

}  // namespace

std::vector<SuiteResult> run_selftest(const Table& table, unsigned seed, int workers) {
  const std::vector<int> al = table.alphabet();
  if (al.size() < 3) throw Error(ErrorKind::InvalidInput, "selftest needs at least three obstacles");
  std::vector<SuiteResult> out;

  const std::vector<PhasePoint> pts = sample_trapped_points(table, 1000, 8, seed);
  double det = 0.0, twist = -std::numeric_limits<double>::infinity(), gen = 0.0;
  for (const PhasePoint& x : pts) {
    det = std::max(det, std::abs(phase_jacobian(table, x).det() - 1.0));
    twist = std::max(twist, billiard_map_differential(table, x).b);
    gen = std::max(gen, check_generating_relations(table, x).max());
  }
  out.push_back(verdict("symplectic_det", det, 1e-9, std::to_string(pts.size()) + " trapped points"));
  {
    SuiteResult t = verdict("negative_twist", twist, 0.0, "largest upper-right entry");
    t.pass = twist < 0.0;
    out.push_back(t);
  }
  out.push_back(verdict("generating_relations", gen, 1e-7));

  double pal = 0.0;
  int centers = 0;
  EnumerateOptions eo;
  eo.necklaces_only = true;
  for (const Word& w : enumerate_words(al, 7, eo)) {
    const PeriodicOrbit o = solve_periodic_orbit(table, w);
    for (int c = 0; c < o.period(); ++c)
      if (is_palindromic_periodic(w, c).palindromic) {
        pal = std::max(pal, std::abs(o.points[static_cast<std::size_t>(c)].r));
        ++centers;
      }
  }
  out.push_back(verdict("palindromic_perpendicular", pal, 1e-10, std::to_string(centers) + " centers"));

  std::mt19937_64 rng(seed);
  double jac = 0.0;
  for (int k = 0; k < 10; ++k) {
    const PeriodicOrbit o = solve_periodic_orbit(table, random_periodic_word(al, 2 + k % 6, rng));
    const Mat2 j = period_perp_propagator(table, o).matrix;
    jac = std::max({jac, std::abs(spectral_radius(j) / spectral_radius(o.monodromy) - 1.0),
                    std::abs(j.trace() / o.monodromy.trace() - 1.0)});
  }
  out.push_back(verdict("jacobi_monodromy", jac, 1e-6, "10 orbits"));

  double sym = 0.0;
  for (const DimensionLevel& lv : bowen_dimension(table, 2, 8, {workers, 0, 1e-12}).levels)
    sym = std::max(sym, std::abs(lv.delta_u - lv.delta_s));
  out.push_back(verdict("bowen_symmetry", sym, 1e-9, "n = 2..8"));

  const int a = al[0], b = al[1], c = al[2];
  const InfiniteCode x0 = periodic(a, b);
  double hol = 0.0;
  for (const bool stable : {true, false}) {
    // shares the future (stable) or the past (unstable) of x0
    const InfiniteCode z = stable ? InfiniteCode::splice(x0, periodic(a, c)) : InfiniteCode::splice(periodic(a, c), x0);
    auto h = [&](int depth) {
      return stable ? stable_holonomy(table, x0, z, depth).value : unstable_holonomy(table, x0, z, depth).value;
    };
    hol = std::max(hol, std::abs(h(60) - h(30)));
  }
  out.push_back(verdict("holonomy_convergence", hol, 1e-10, "depth 30 vs 60"));

  const Quadrilateral q = periodic_quadrilateral(table, Word{a, b}, Word{a, c});
  const DisplacementReport d = temporal_displacement(table, q);
  const AreaResult area = quadrilateral_area(table, q);
  out.push_back(verdict("area_identity", std::abs(area.area + d.H), std::max(1e-7, area.error + d.tail)));
  return out;
}

Json to_json(const std::vector<SuiteResult>& results) {
  bool all = true;
  Json suites = Json::array();
  for (const SuiteResult& r : results) {
    all = all && r.pass;
    Json j{{"name", r.name}, {"pass", r.pass}, {"value", r.value}, {"tolerance", r.tolerance}};
    if (!r.detail.empty()) j["detail"] = r.detail;
    suites.push_back(j);
  }
  return {{"verdict", all ? "PASS" : "FAIL"}, {"suites", suites}};
}

}  // namespace billiards::cli
