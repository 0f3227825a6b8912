#pragma once

#include <string>
#include <vector>

#include "billiards/geometry.hpp"
#include "report.hpp"

namespace billiards::cli {

struct SuiteResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // worst observed defect
  double tolerance = 0.0;
  std::string detail;
};

/// Table-independent invariants: symplecticity and twist of the map,
/// generating relations, perpendicular bounces at palindromic centers,
/// Jacobi propagator against the monodromy, stable/unstable Bowen roots,
/// holonomy convergence and the area identity on one quadrilateral.
std::vector<SuiteResult> run_selftest(const Table& table, unsigned seed, int workers);

Json to_json(const std::vector<SuiteResult>& results);

}  // namespace billiards::cli
