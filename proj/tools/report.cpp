#include "report.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace billiards::cli {

std::string num(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Csv::Csv(std::vector<std::string> header) : width_(header.size()) { row(header); }

Csv& Csv::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::logic_error("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
    if (!quote) {
      text_ += cells[i];
      continue;
    }
    text_ += '"';
    for (char c : cells[i]) text_ += c == '"' ? std::string("\"\"") : std::string(1, c);
    text_ += '"';
  }
  text_ += '\n';
  return *this;
}

Json to_json(const PhasePoint& x) { return {{"id", x.id}, {"s", x.s}, {"r", x.r}}; }

Json to_json(const Mat2& m) { return Json::array({Json::array({m.a, m.b}), Json::array({m.c, m.d})}); }

Json to_json(const PeriodicOrbit& orbit, double solver_tol) {
  Json j;
  j["word"] = to_string(orbit.code);
  j["period"] = orbit.period();
  j["length"] = orbit.length;
  j["lyapunov"] = lyapunov_exponent(orbit);
  j["residual"] = orbit.residual;
  j["solver_tol"] = solver_tol;
  j["iterations"] = orbit.iterations;
  Json bounces = Json::array();
  for (int k = 0; k < orbit.period(); ++k) {
    Json b = to_json(orbit.points[static_cast<std::size_t>(k)]);
    b["segment"] = orbit.segments[static_cast<std::size_t>(k)];
    bounces.push_back(b);
  }
  j["bounces"] = bounces;
  j["monodromy"] = to_json(orbit.monodromy);
  j["phase_monodromy"] = to_json(orbit.phase_monodromy);
  const Eigen2 e = eigen(orbit.monodromy);
  j["eigenvalues"] = {e.lambda_large, e.lambda_small};
  return j;
}

Json to_json(const Quadrilateral& q) {
  Json corners = Json::array();
  for (int i = 0; i < 4; ++i) {
    Json c = to_json(q[i].point);
    c["code"] = to_string(q[i].code);
    corners.push_back(c);
  }
  return {{"obstacle", q.obstacle}, {"corners", corners}};
}

Json to_json(const DisplacementReport& d) {
  return {{"holonomies", {{"Hs(x0,x1)", d.holonomies[0]},
                          {"Hu(x1,x2)", d.holonomies[1]},
                          {"Hs(x2,x3)", d.holonomies[2]},
                          {"Hu(x3,x0)", d.holonomies[3]}}},
          {"H", d.H},
          {"tail_bound", d.tail},
          {"depth", d.depth},
          {"H_symmetric", d.H_symmetric},
          {"symmetric_change", d.symmetric_change},
          {"symmetric_n", d.symmetric_n}};
}

Json to_json(const AreaResult& a) {
  return {{"area", a.area},
          {"error", a.error},
          {"panels", a.panels},
          {"arcs", {a.arcs[0], a.arcs[1], a.arcs[2], a.arcs[3]}}};
}

Json to_json(const IsoSpectralReport& r) {
  Json worst = Json::array();
  for (const OrbitMatch& m : r.worst) {
    Json w{{"word", to_string(m.word)}, {"word_b", to_string(m.word_b)}, {"ok", m.ok}};
    if (m.ok) {
      w["length_a"] = m.orbit_a.length;
      w["length_b"] = m.orbit_b.length;
      w["delta"] = m.delta;
    } else {
      w["error"] = m.error;
    }
    worst.push_back(w);
  }
  return {{"pass", r.pass},       {"no_data", r.no_data},   {"tolerance", r.tolerance}, {"max_delta", r.max_delta},
          {"compared", r.compared}, {"failures", r.failures}, {"worst", worst}};
}

Json to_json(const ConjugacyReport& r) {
  Json j;
  j["gated"] = r.gated;
  if (r.gated) {
    j["gate_reason"] = r.gate_reason;
    return j;
  }
  j["bounces"] = r.bounces.size();
  j["max_dr"] = r.max_dr;
  j["max_dtau"] = r.max_dtau;
  j["max_dangle"] = r.max_dangle;
  j["max_djet"] = r.max_djet;
  j["dpsi_samples"] = r.dpsi.size();
  j["dpsi_failures"] = r.dpsi_failures;
  j["max_dpsi_distance"] = r.max_dpsi_distance;
  j["max_a_mismatch"] = r.max_a_mismatch;
  return j;
}

Json to_json(const DimensionEstimate& d) {
  Json j;
  Json levels = Json::array();
  for (const DimensionLevel& lv : d.levels)
    levels.push_back({{"n", lv.n}, {"delta_u", lv.delta_u}, {"delta_s", lv.delta_s},
                      {"periodic_points", lv.periodic_points}});
  j["levels"] = levels;
  j["stability"] = d.stability;
  if (d.has_box) {
    j["box_dimension"] = d.box_dimension;
    j["box_points"] = d.box_points;
    j["box_depth"] = d.box_depth;
    j["box_relative_gap"] = d.levels.empty() ? 0.0 : d.box_dimension / d.levels.back().delta_u - 1.0;
    Json curve = Json::array();
    for (const BoxCount& b : d.box_curve) curve.push_back({b.log_inv_eps, b.log_count});
    j["box_curve"] = curve;
  }
  return j;
}

namespace {

Json intervals(const std::vector<Interval>& ivs) {
  Json a = Json::array();
  for (const Interval& iv : ivs) a.push_back({iv.lo, iv.hi});
  return a;
}

}  // namespace

Json to_json(const TraceCover& c) {
  Json obs = Json::array();
  for (const ObstacleTrace& o : c.obstacles)
    obs.push_back({{"id", o.id},
                   {"hull", {o.hull.lo, o.hull.hi}},
                   {"measure", o.measure()},
                   {"intervals", intervals(o.intervals)},
                   {"gaps", intervals(o.gaps)}});
  return {{"depth", c.depth}, {"windows", c.windows}, {"failures", c.failures}, {"measure", c.measure()},
          {"obstacles", obs}};
}

Json to_json(const GapExperimentReport& g) {
  auto bump = [](const BumpPerturbation& b) {
    return Json{{"obstacle", b.target_id}, {"s_a", b.s_a}, {"s_b", b.s_b}, {"amplitude", b.amplitude},
                {"order", b.order}};
  };
  return {{"obstacle", g.obstacle},
          {"depth", g.depth},
          {"gap", {g.gap.lo, g.gap.hi}},
          {"words", g.words},
          {"failures", g.failures},
          {"bump", bump(g.bump)},
          {"max_delta", g.max_delta},
          {"worst", to_string(g.worst)},
          {"control", bump(g.control)},
          {"control_max_delta", g.control_max_delta},
          {"control_worst", to_string(g.control_worst)}};
}

std::string mls_csv(const std::vector<MlsEntry>& entries, double solver_tol) {
  Csv csv({"word", "period", "length", "lyapunov", "residual", "solver_tol", "status"});
  char len[40];
  for (const MlsEntry& e : entries) {
    std::snprintf(len, sizeof len, "%.12f", e.length);
    csv.row({to_string(e.word), std::to_string(e.word.size()), e.ok ? len : "", e.ok ? num(e.lyapunov) : "",
             e.ok ? num(e.residual) : "", num(solver_tol), e.ok ? "ok" : e.error});
  }
  return csv.str();
}

std::string pairing_csv(const OrbitPairing& p, double tol) {
  Csv csv({"word", "word_b", "length_a", "length_b", "delta", "tolerance", "status"});
  for (const OrbitMatch& m : p.matches)
    csv.row({to_string(m.word), to_string(m.word_b), m.ok ? num(m.orbit_a.length) : "",
             m.ok ? num(m.orbit_b.length) : "", m.ok ? num(m.delta) : "", num(tol), m.ok ? "ok" : m.error});
  return csv.str();
}

std::string bounces_csv(const ConjugacyReport& r) {
  std::vector<std::string> header{"word", "index", "id_a", "s_a", "r_a", "id_b", "s_b", "r_b", "dr", "dtau", "dangle"};
  const std::size_t jets = r.bounces.empty() ? 0 : r.bounces.front().djet.size();
  for (std::size_t k = 0; k < jets; ++k) header.push_back("djet" + std::to_string(k));
  Csv csv(header);
  for (const BounceMatch& b : r.bounces) {
    std::vector<std::string> row{to_string(b.word), std::to_string(b.index), std::to_string(b.a.id), num(b.a.s),
                                 num(b.a.r), std::to_string(b.b.id), num(b.b.s), num(b.b.r), num(b.dr), num(b.dtau),
                                 num(b.dangle)};
    for (double d : b.djet) row.push_back(num(d));
    csv.row(row);
  }
  return csv.str();
}

std::string dpsi_csv(const ConjugacyReport& r, double scale) {
  Csv csv({"word", "s_a", "r_a", "target_scale", "scale", "depth", "d11", "d12", "d21", "d22", "distance", "a",
           "b", "r_ratio", "status"});
  for (const DPsiSample& d : r.dpsi)
    csv.row({to_string(d.word), num(d.a.s), num(d.a.r), num(scale), num(d.scale), std::to_string(d.ok ? d.depth : 0),
             num(d.dpsi.a), num(d.dpsi.b), num(d.dpsi.c), num(d.dpsi.d), num(d.distance), num(d.a_entry),
             num(d.b_entry), num(d.r_ratio), d.ok ? "ok" : d.error});
  return csv.str();
}

std::string dimension_csv(const DimensionEstimate& d, double root_tol) {
  Csv csv({"n", "delta_u", "delta_s", "periodic_points", "root_tol"});
  for (const DimensionLevel& lv : d.levels)
    csv.row({std::to_string(lv.n), num(lv.delta_u), num(lv.delta_s), std::to_string(lv.periodic_points),
             num(root_tol)});
  return csv.str();
}

std::string trace_csv(const TraceCover& c) {
  Csv csv({"obstacle", "kind", "lo", "hi", "length", "depth"});
  for (const ObstacleTrace& o : c.obstacles) {
    for (const Interval& iv : o.intervals)
      csv.row({std::to_string(o.id), "cover", num(iv.lo), num(iv.hi), num(iv.length()), std::to_string(c.depth)});
    for (const Interval& iv : o.gaps)
      csv.row({std::to_string(o.id), "gap", num(iv.lo), num(iv.hi), num(iv.length()), std::to_string(c.depth)});
  }
  return csv.str();
}

}  // namespace billiards::cli
