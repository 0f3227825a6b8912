#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "billiards/displacement.hpp"
#include "billiards/rigidity.hpp"

namespace billiards::cli {

using Json = nlohmann::ordered_json;

Json to_json(const PhasePoint& x);
Json to_json(const Mat2& m);
Json to_json(const PeriodicOrbit& orbit, double solver_tol);
Json to_json(const Quadrilateral& q);
Json to_json(const DisplacementReport& d);
Json to_json(const AreaResult& a);
Json to_json(const IsoSpectralReport& r);
Json to_json(const ConjugacyReport& r);
Json to_json(const DimensionEstimate& d);
Json to_json(const TraceCover& c);
Json to_json(const GapExperimentReport& g);

/// Shortest round-trip decimal form of a double.
std::string num(double x);

/// Minimal CSV builder: header once, then rows of preformatted cells.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  Csv& row(const std::vector<std::string>& cells);
  std::string str() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

std::string mls_csv(const std::vector<MlsEntry>& entries, double solver_tol);
std::string pairing_csv(const OrbitPairing& p, double tol);
std::string bounces_csv(const ConjugacyReport& r);
std::string dpsi_csv(const ConjugacyReport& r, double scale);
std::string dimension_csv(const DimensionEstimate& d, double root_tol);
std::string trace_csv(const TraceCover& c);

}  // namespace billiards::cli
