// billiards: command line front end for the billiards core library.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "billiards/displacement.hpp"
#include "billiards/error.hpp"
#include "billiards/parallel.hpp"
#include "billiards/rigidity.hpp"
#include "billiards/table_io.hpp"
#include "report.hpp"
#include "selftest.hpp"

using namespace billiards;
using namespace billiards::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitSelftest = 3;

struct Options {
  std::string table, table_b, out;
  int max_len = 6;
  int depth = -1;  // per-command default
  int n_max = 8;
  double tol = -1.0;
  int workers = 0;
  unsigned seed = 1;
  std::string word, x0 = "12", x2 = "13", map;
  double amplitude = 1e-3;
  double margin = 3.0;
  int obstacle = 1;
  bool interior = false;
};

/// Named outputs of one command. The first is the primary one and is
/// printed when no output directory is given.
struct Artifacts {
  std::vector<std::pair<std::string, std::string>> files;
  void add(std::string name, std::string content) { files.emplace_back(std::move(name), std::move(content)); }
};

void emit(const Artifacts& a, const std::string& out) {
  if (out.empty()) {
    std::cout << a.files.front().second;
    return;
  }
  std::filesystem::create_directories(out);
  for (const auto& [name, content] : a.files) {
    std::ofstream f(std::filesystem::path(out) / name, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + name + " in '" + out + "'");
    f << content;
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Table load(const std::string& path) {
  if (path.empty()) throw Error(ErrorKind::InvalidInput, "--table is required");
  return build_table(load_table_config(path));
}

int workers(const Options& o) { return o.workers > 0 ? o.workers : default_workers(); }

double tol_or(const Options& o, double fallback) {
  if (o.tol < 0) return fallback;
  if (!(o.tol > 0)) throw Error(ErrorKind::InvalidInput, "--tol must be positive");
  return o.tol;
}

AlphabetMap parse_map(const std::string& text, const Table& a) {
  AlphabetMap m;
  if (text.empty()) {
    for (int id : a.alphabet()) m[id] = id;
    return m;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::InvalidInput, "--map entries look like 1:2");
    try {
      m[std::stoi(item.substr(0, colon))] = std::stoi(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "bad --map entry '" + item + "'");
    }
  }
  return m;
}

Artifacts cmd_mls(const Options& o) {
  const Table t = load(o.table);
  MlsOptions mo;
  mo.workers = workers(o);
  mo.solver.tol = tol_or(o, 1e-12);
  Artifacts a;
  a.add("mls.csv", mls_csv(marked_length_spectrum(t, o.max_len, mo), mo.solver.tol));
  return a;
}

Artifacts cmd_orbit(const Options& o) {
  const Table t = load(o.table);
  if (o.word.empty()) throw Error(ErrorKind::InvalidInput, "--word is required");
  SolverOptions so;
  so.tol = tol_or(o, 1e-12);
  Artifacts a;
  a.add("orbit.json", dump(to_json(solve_periodic_orbit(t, parse_word(o.word), so), so.tol)));
  return a;
}

Artifacts cmd_quad(const Options& o) {
  const Table t = load(o.table);
  const int depth = o.depth < 0 ? 60 : o.depth;
  if (o.n_max < 1) throw Error(ErrorKind::InvalidInput, "--n-max must be positive");
  const Quadrilateral q = periodic_quadrilateral(t, parse_word(o.x0), parse_word(o.x2));
  const DisplacementReport d = temporal_displacement(t, q, depth);
  const AreaResult area = quadrilateral_area(t, q);
  Json j;
  j["table"] = t.name();
  j["x0"] = o.x0;
  j["x2"] = o.x2;
  j["quadrilateral"] = to_json(q);
  j["displacement"] = to_json(d);
  j["area"] = to_json(area);
  j["area_plus_H"] = area.area + d.H;

  Csv sweep({"n", "blocks", "bounces", "length", "value", "error", "residual", "H", "holonomy_depth"});
  for (int n = 1; n <= o.n_max; ++n) {
    const Approximant ap = periodic_approx_displacement(t, q, n);
    sweep.row({std::to_string(n), std::to_string(ap.blocks), std::to_string(ap.bounces), num(ap.length),
               num(ap.value), num(std::abs(ap.value - d.H)), num(ap.residual), num(d.H), std::to_string(depth)});
  }
  Artifacts a;
  a.add("quad.json", dump(j));
  a.add("quad_sweep.csv", sweep.str());
  return a;
}

Artifacts cmd_compare(const Options& o) {
  const Table ta = load(o.table);
  if (o.table_b.empty()) throw Error(ErrorKind::InvalidInput, "--table-b is required");
  const Table tb = load(o.table_b);
  const double tol = tol_or(o, 1e-10);
  const AlphabetMap map = parse_map(o.map, ta);
  const OrbitPairing p = match_periodic_orbits(ta, tb, map, o.max_len, workers(o));
  const IsoSpectralReport iso = iso_length_spectral_report(p, tol);
  ConjugacyOptions co;
  co.workers = workers(o);
  const ConjugacyReport cr = conjugacy_consequence_report(ta, tb, p, tol, co);

  Json j;
  j["verdict"] = iso.pass ? "PASS" : "FAIL";
  Json m = Json::object();
  for (const auto& [k, v] : map) m[std::to_string(k)] = v;
  j["pairing"] = {{"table_a", ta.name()}, {"table_b", tb.name()}, {"alphabet", m}, {"max_length", o.max_len},
                  {"words", p.matches.size()}, {"failures", p.failures()}};
  j["iso_spectral"] = to_json(iso);
  j["consequences"] = to_json(cr);

  DimensionOptions d;
  d.workers = workers(o);
  const DimensionEstimate da = bowen_dimension(ta, 2, o.n_max, d);
  const DimensionEstimate db = bowen_dimension(tb, 2, o.n_max, d);
  j["dimension"] = {{"table_a", to_json(da)}, {"table_b", to_json(db)}};
  Artifacts a;
  a.add("compare.json", dump(j));
  a.add("pairing.csv", pairing_csv(p, tol));
  if (!cr.gated) {
    a.add("bounces.csv", bounces_csv(cr));
    a.add("dpsi.csv", dpsi_csv(cr, co.dpsi_scale));
  }
  a.add("dimension_a.csv", dimension_csv(da, d.tol));
  a.add("dimension_b.csv", dimension_csv(db, d.tol));
  return a;
}

Artifacts cmd_dimension(const Options& o) {
  const Table t = load(o.table);
  DimensionOptions d;
  d.workers = workers(o);
  d.box_depth = o.depth < 0 ? 12 : o.depth;
  d.tol = tol_or(o, 1e-12);
  const DimensionEstimate est = bowen_dimension(t, 2, o.n_max, d);
  Artifacts a;
  a.add("dimension.csv", dimension_csv(est, d.tol));
  a.add("dimension.json", dump(to_json(est)));
  return a;
}

Artifacts cmd_trace(const Options& o) {
  const Table t = load(o.table);
  const TraceCover c = trace_cover(t, o.depth < 0 ? 3 : o.depth, workers(o));
  Artifacts a;
  a.add("trace.json", dump(to_json(c)));
  a.add("trace.csv", trace_csv(c));
  return a;
}

Artifacts cmd_gap(const Options& o) {
  const Table t = load(o.table);
  GapExperimentOptions g;
  g.obstacle = o.obstacle;
  g.depth = o.depth < 0 ? 4 : o.depth;
  g.amplitude = o.amplitude;
  g.max_length = o.max_len;
  g.margin = o.margin;
  g.interior_only = o.interior;
  g.workers = workers(o);
  Artifacts a;
  a.add("gap.json", dump(to_json(gap_perturbation_experiment(t, g))));
  return a;
}

int run(CLI::App& app, const Options& o) {
  const std::string name = app.get_subcommands().front()->get_name();
  if (name == "selftest") {
    const std::vector<SuiteResult> res = run_selftest(load(o.table), o.seed, workers(o));
    Artifacts a;
    const Json j = to_json(res);
    a.add("selftest.json", dump(j));
    emit(a, o.out);
    return j["verdict"] == "PASS" ? kExitOk : kExitSelftest;
  }
  Artifacts a;
  if (name == "mls") a = cmd_mls(o);
  else if (name == "orbit") a = cmd_orbit(o);
  else if (name == "quad") a = cmd_quad(o);
  else if (name == "compare") a = cmd_compare(o);
  else if (name == "dimension") a = cmd_dimension(o);
  else if (name == "trace") a = cmd_trace(o);
  else a = cmd_gap(o);
  emit(a, o.out);
  return kExitOk;
}

void error_record(const std::string& kind, const std::string& message) {
  const Json j{{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open dispersing billiards: length spectra, displacements, rigidity checks"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--table", o.table, "table description (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory (primary output goes to stdout when absent)");
    sub->add_option("--workers", o.workers, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", o.tol, "tolerance")->check(CLI::PositiveNumber);
  };

  CLI::App* mls = app.add_subcommand("mls", "marked length spectrum table");
  common(mls);
  mls->add_option("--max-len", o.max_len, "longest word")->check(CLI::Range(2, 16));

  CLI::App* orbit = app.add_subcommand("orbit", "single periodic orbit report");
  common(orbit);
  orbit->add_option("--word", o.word, "periodic word, e.g. 1213")->required();

  CLI::App* quad = app.add_subcommand("quad", "temporal displacement of the quadrilateral of two periodic orbits");
  common(quad);
  quad->add_option("--x0", o.x0, "block of the x0 orbit");
  quad->add_option("--x2", o.x2, "block of the x2 orbit (same first symbol)");
  quad->add_option("--depth", o.depth, "holonomy truncation depth")->check(CLI::Range(1, 200));
  quad->add_option("--n-max", o.n_max, "largest periodic approximant")->check(CLI::Range(1, 12));

  CLI::App* compare = app.add_subcommand("compare", "iso-length-spectral test and conjugacy consequences");
  common(compare);
  compare->add_option("--table-b", o.table_b, "second table")->required()->check(CLI::ExistingFile);
  compare->add_option("--max-len", o.max_len, "longest word")->check(CLI::Range(2, 12));
  compare->add_option("--n-max", o.n_max, "largest period for the Bowen roots")->check(CLI::Range(2, 14));
  compare->add_option("--map", o.map, "alphabet map a:b,... (identity by default)");

  CLI::App* dim = app.add_subcommand("dimension", "Bowen roots and box counting");
  common(dim);
  dim->add_option("--n-max", o.n_max, "largest period")->check(CLI::Range(2, 14));
  dim->add_option("--depth", o.depth, "stable-slice depth for box counting (0 skips)")->check(CLI::Range(0, 16));

  CLI::App* trace = app.add_subcommand("trace", "certified cover of the trace and its gaps");
  common(trace);
  trace->add_option("--depth", o.depth, "half-width m of the windows")->check(CLI::Range(1, 7));

  CLI::App* gap = app.add_subcommand("gap-experiment", "bump inside a gap and on the cover, compare spectra");
  common(gap);
  gap->add_option("--depth", o.depth, "cover depth")->check(CLI::Range(1, 7));
  gap->add_option("--max-len", o.max_len, "longest word")->check(CLI::Range(2, 12));
  gap->add_option("--amplitude", o.amplitude, "bump amplitude");
  gap->add_option("--margin", o.margin, "gap length / bump support")->check(CLI::Range(1.0, 100.0));
  gap->add_option("--obstacle", o.obstacle, "obstacle id");
  gap->add_flag("--interior", o.interior, "only gaps between cover intervals");

  CLI::App* self = app.add_subcommand("selftest", "invariant suites on one table");
  common(self);
  self->add_option("--seed", o.seed, "seed for sampled points and words");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_record(to_string(ErrorKind::InvalidInput), e.what());
    return kExitInvalid;
  }

  try {
    return run(app, o);
  } catch (const Error& e) {
    error_record(to_string(e.kind()), e.what());
    switch (e.kind()) {
      case ErrorKind::InvalidInput:
      case ErrorKind::Geometry:
      case ErrorKind::Inadmissible:
        return kExitInvalid;
      default:
        return kExitNumeric;
    }
  } catch (const std::exception& e) {
    error_record("internal", e.what());
    return kExitNumeric;
  }
}
