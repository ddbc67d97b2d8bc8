#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "opalg/complementarity.hpp"
#include "opalg/gns.hpp"
#include "opalg/matrix_algebra.hpp"
#include "opalg/sectors.hpp"
#include "opalg/states.hpp"
#include "opalg/weyl.hpp"

// JSON forms of the library's values. Readers validate shape and then hand
// the data to the validating constructors, so malformed input surfaces as
// ValidationError.
namespace opalg::io {

using nlohmann::json;

/// Missing or unreadable files and unwritable outputs.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"rows": n, "cols": m, "entries": [[re, im], ...]} row-major.
json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

/// [[re, im], ...]
json to_json(const Vector& v);
Vector vector_from_json(const json& j);

Complex complex_from_json(const json& j);

json to_json(const StarAlgebra& alg);
StarAlgebra algebra_from_json(const json& j);

json to_json(const State& s);
State state_from_json(const json& j);

json to_json(const GnsTriple& t);
GnsTriple gns_from_json(const json& j);

json to_json(const SectorDecomposition& d);
SectorDecomposition decomposition_from_json(const json& j);

json to_json(const DiscreteWeylSystem& sys);
DiscreteWeylSystem weyl_system_from_json(const json& j);

json to_json(const BoundReport& r);
json to_json(const MeasurementRecord& r);
json to_json(const CStarLawReport& r);
json to_json(const RepresentationReport& r);
json to_json(const IntertwinerResult& r);
json to_json(const WeylRelationReport& r);

/// Reads a whole file; throws IoError when it cannot be opened.
std::string read_file(const std::string& path);

/// Problem document {"version": "1", "task": "...", "inputs": {...}}. Returns
/// the inputs. "task" is optional; when present it must equal `task`.
json read_problem(const std::string& path, const std::string& task);

/// Typed access to a required member, with the member name in the error.
const json& member(const json& j, const std::string& key);

}  // namespace opalg::io
