#pragma once

#include <string>

#include "billiards/geometry.hpp"

namespace billiards {

/// Table description files are JSON:
///
///   {
///     "name": "tri6",
///     "non_eclipse": true,
///     "obstacles": [
///       {"id": 1, "kind": "circle", "center": [0, 0], "radius": 1},
///       {"id": 2, "kind": "ellipse", "center": [6, 0], "semi_axes": [1.2, 0.9],
///        "rotation": 0.3},
///       {"id": 3, "kind": "fourier", "center": [3, 5.2], "radius": 1,
///        "cos": [0.0, 0.02], "sin": [0.01],
///        "bumps": [{"s_a": 0.1, "s_b": 0.4, "amplitude": 1e-3, "order": 6}]}
///     ]
///   }
///
/// "cos"/"sin" list the Fourier amplitudes of modes 1, 2, ...; "rotation"
/// (radians) and "bumps" are optional for every kind.
TableConfig parse_table_config(const std::string& json_text);
TableConfig load_table_config(const std::string& path);
std::string dump_table_config(const TableConfig& config);

/// Reconstructs a description from a built table. Bumps are expressed in
/// the base arclength of the unperturbed shape.
TableConfig describe_table(const Table& table);

}  // namespace billiards
