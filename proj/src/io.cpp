#include "opalg/io.hpp"

#include <fstream>
#include <sstream>

namespace opalg::io {

namespace {

int int_member(const json& j, const std::string& key) {
  const json& v = member(j, key);
  if (!v.is_number_integer()) throw ValidationError("'" + key + "' must be an integer");
  return v.get<int>();
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ValidationError(what + " must be a number");
  return j.get<double>();
}

}  // namespace

const json& member(const json& j, const std::string& key) {
  if (!j.is_object()) throw ValidationError("expected an object holding '" + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError("missing field '" + key + "'");
  return *it;
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ValidationError("complex entries are [re, im] pairs");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

json to_json(const Matrix& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Matrix matrix_from_json(const json& j) {
  const int rows = int_member(j, "rows");
  const int cols = int_member(j, "cols");
  if (rows < 1 || cols < 1) throw ValidationError("matrix dimensions must be positive");
  const json& entries = member(j, "entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw ValidationError("matrix 'entries' must hold rows*cols values");
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) m(i, k) = complex_from_json(entries[static_cast<std::size_t>(i * cols + k)]);
  require_finite(m, "matrix");
  return m;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("vectors are nonempty arrays of [re, im] pairs");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

json to_json(const StarAlgebra& alg) {
  json basis = json::array();
  for (const Matrix& b : alg.basis()) basis.push_back(to_json(b));
  return {{"ambient_dim", alg.ambient_dim()}, {"basis", basis}, {"tol", alg.tol()}};
}

StarAlgebra algebra_from_json(const json& j) {
  const int n = int_member(j, "ambient_dim");
  const json& basis = member(j, "basis");
  if (!basis.is_array()) throw ValidationError("'basis' must be an array of matrices");
  std::vector<Matrix> mats;
  for (const json& b : basis) mats.push_back(matrix_from_json(b));
  const double tol = j.contains("tol") ? number(j["tol"], "'tol'") : 1e-10;
  return StarAlgebra(n, std::move(mats), tol);
}

json to_json(const State& s) { return {{"rho", to_json(s.rho())}}; }

State state_from_json(const json& j) { return State(matrix_from_json(member(j, "rho"))); }

json to_json(const GnsTriple& t) {
  json rep = json::object();
  for (std::size_t k = 0; k < t.rep.size(); ++k) rep[std::to_string(k)] = to_json(t.rep[k]);
  return {{"space_dim", t.space_dim},
          {"rep", rep},
          {"cyclic_vector", to_json(t.cyclic_vector)},
          {"embedding", to_json(t.embedding)}};
}

GnsTriple gns_from_json(const json& j) {
  GnsTriple t;
  t.space_dim = int_member(j, "space_dim");
  if (t.space_dim < 1) throw ValidationError("'space_dim' must be positive");
  const json& rep = member(j, "rep");
  if (!rep.is_object()) throw ValidationError("'rep' must map basis indices to matrices");
  t.rep.resize(rep.size());
  std::vector<bool> seen(rep.size(), false);
  for (const auto& [key, value] : rep.items()) {
    std::size_t idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoul(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ValidationError("'rep' key '" + key + "' is not a basis index");
    }
    if (idx >= rep.size() || seen[idx]) throw ValidationError("'rep' keys must be 0..size-1, each once");
    seen[idx] = true;
    t.rep[idx] = matrix_from_json(value);
    if (t.rep[idx].rows() != t.space_dim || t.rep[idx].cols() != t.space_dim)
      throw ValidationError("'rep' matrices must be space_dim x space_dim");
  }
  t.cyclic_vector = vector_from_json(member(j, "cyclic_vector"));
  if (t.cyclic_vector.size() != t.space_dim) throw ValidationError("'cyclic_vector' has the wrong length");
  t.embedding = matrix_from_json(member(j, "embedding"));
  if (t.embedding.rows() != t.space_dim) throw ValidationError("'embedding' must have space_dim rows");
  return t;
}

json to_json(const SectorDecomposition& d) {
  json blocks = json::array();
  for (const auto& [off, size] : d.blocks) blocks.push_back({off, size});
  return {{"basis_change", to_json(d.basis_change)}, {"blocks", blocks}, {"kind", to_string(d.kind)}};
}

SectorDecomposition decomposition_from_json(const json& j) {
  SectorDecomposition d;
  d.basis_change = matrix_from_json(member(j, "basis_change"));
  require_square(d.basis_change, "decomposition");
  const json& kind = member(j, "kind");
  if (!kind.is_string()) throw ValidationError("'kind' must be a string");
  d.kind = sector_kind_from_string(kind.get<std::string>());
  const json& blocks = member(j, "blocks");
  if (!blocks.is_array()) throw ValidationError("'blocks' must be an array of [offset, size]");
  int expected = 0;
  for (const json& b : blocks) {
    if (!b.is_array() || b.size() != 2 || !b[0].is_number_integer() || !b[1].is_number_integer())
      throw ValidationError("each block is [offset, size]");
    const int off = b[0].get<int>(), size = b[1].get<int>();
    if (off != expected || size < 1) throw ValidationError("blocks must tile the space in order");
    d.blocks.emplace_back(off, size);
    expected += size;
  }
  if (expected != d.basis_change.rows()) throw ValidationError("blocks do not cover the space");
  return d;
}

json to_json(const DiscreteWeylSystem& sys) {
  return {{"modulus", sys.modulus}, {"u", to_json(sys.u)}, {"v", to_json(sys.v)}};
}

DiscreteWeylSystem weyl_system_from_json(const json& j) {
  return DiscreteWeylSystem(int_member(j, "modulus"), matrix_from_json(member(j, "u")),
                            matrix_from_json(member(j, "v")));
}

json to_json(const BoundReport& r) {
  json out = {{"kind", to_string(r.kind)},
              {"objective", r.objective_name},
              {"infimum_estimate", r.infimum_estimate},
              {"argmin_state", to_json(r.argmin_state)},
              {"starts", r.starts},
              {"converged_starts", r.converged_starts},
              {"iterations_total", r.iterations_total},
              {"seed", r.seed},
              {"rng", kRngName}};
  out["grid_infimum"] = r.grid_infimum ? json(*r.grid_infimum) : json(nullptr);
  out["grid_gap"] = r.grid_gap ? json(*r.grid_gap) : json(nullptr);
  return out;
}

json to_json(const MeasurementRecord& r) {
  return {{"seed", r.seed},
          {"rng", kRngName},
          {"sample_count", r.sample_count},
          {"empirical_mean", r.empirical_mean},
          {"outcomes", r.outcomes}};
}

json to_json(const CStarLawReport& r) {
  return {{"samples", r.samples}, {"seed", r.seed}, {"rng", r.rng}, {"max_residual", r.max_residual}};
}

json to_json(const RepresentationReport& r) {
  return {{"linearity", r.linearity},
          {"multiplicativity", r.multiplicativity},
          {"star", r.star},
          {"expectation", r.expectation},
          {"cyclicity_rank", r.cyclicity_rank},
          {"space_dim", r.space_dim},
          {"cyclic_norm_defect", r.cyclic_norm_defect}};
}

json to_json(const IntertwinerResult& r) {
  return {{"w", to_json(r.w)},
          {"nullity", r.nullity},
          {"u_residual", r.u_residual},
          {"v_residual", r.v_residual},
          {"unitarity_residual", r.unitarity_residual},
          {"gap", r.gap}};
}

json to_json(const WeylRelationReport& r) {
  return {{"u_power", r.u_power},         {"v_power", r.v_power},
          {"exchange", r.exchange},       {"u_unitarity", r.u_unitarity},
          {"v_unitarity", r.v_unitarity}, {"group_law", r.group_law}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return ss.str();
}

json read_problem(const std::string& path, const std::string& task) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
  const json& version = member(doc, "version");
  if (!version.is_string() || version.get<std::string>() != "1")
    throw ValidationError("unsupported problem document version (expected \"1\")");
  if (doc.contains("task")) {
    if (!doc["task"].is_string() || doc["task"].get<std::string>() != task)
      throw ValidationError("problem document is for task '" + doc["task"].dump() + "', not '" + task + "'");
  }
  const json& inputs = member(doc, "inputs");
  if (!inputs.is_object()) throw ValidationError("'inputs' must be an object");
  return inputs;
}

}  // namespace opalg::io
