// opalg: command-line front end for the operator-algebra workbench.
//
// Exit codes: 0 ok, 1 validation error (bad input, usage), 2 numerical
// failure (residual above tolerance), 3 I/O error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "opalg/complementarity.hpp"
#include "opalg/gns.hpp"
#include "opalg/io.hpp"
#include "opalg/matrix_algebra.hpp"
#include "opalg/poisson_lambda.hpp"
#include "opalg/sectors.hpp"
#include "opalg/states.hpp"
#include "opalg/weyl.hpp"

using namespace opalg;
using io::json;
namespace lam = opalg::poisson;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

struct Result {
  std::string body;
  int code = kExitOk;
};

struct Options {
  std::string file;
  std::string format = "text";
  std::string output;
  std::uint64_t seed = 0;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string num(Complex z) {
  if (z.imag() == 0.0) return num(z.real());
  return num(z.real()) + (z.imag() < 0 ? " - " : " + ") + num(std::abs(z.imag())) + "i";
}

class TextReport {
 public:
  TextReport& line(const std::string& key, const std::string& value) {
    out_ << key << ": " << value << "\n";
    return *this;
  }
  TextReport& line(const std::string& key, double value) { return line(key, num(value)); }
  TextReport& line(const std::string& key, int value) { return line(key, std::to_string(value)); }
  TextReport& line(const std::string& key, bool value) { return line(key, std::string(value ? "true" : "false")); }
  TextReport& raw(const std::string& text) {
    out_ << text;
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string matrix_text(const Matrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += "  ";
      out += "(" + num(m(i, j).real()) + "," + num(m(i, j).imag()) + ")";
    }
    out += "\n";
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void require_format(const Options& o, std::initializer_list<const char*> allowed, const std::string& cmd) {
  for (const char* f : allowed)
    if (o.format == f) return;
  throw ValidationError("format '" + o.format + "' is not supported by '" + cmd + "'");
}

json problem(const Options& o, const std::string& task) {
  if (o.file.empty()) throw ValidationError("'" + task + "' needs --file <problem.json>");
  return io::read_problem(o.file, task);
}

StarAlgebra load_algebra(const json& in) {
  if (in.contains("algebra")) return io::algebra_from_json(in["algebra"]);
  if (in.contains("generators")) {
    const json& g = in["generators"];
    if (!g.is_array()) throw ValidationError("'generators' must be an array of matrices");
    std::vector<Matrix> gens;
    for (const json& m : g) gens.push_back(io::matrix_from_json(m));
    const int n = in.contains("ambient_dim") ? in["ambient_dim"].get<int>() : 1;
    const double tol = in.contains("tol") ? in["tol"].get<double>() : 1e-10;
    return generate_algebra(gens, tol, n);
  }
  throw ValidationError("inputs need 'algebra' or 'generators'");
}

std::vector<State> load_states(const json& in) {
  const json& arr = io::member(in, "states");
  if (!arr.is_array()) throw ValidationError("'states' must be an array");
  std::vector<State> out;
  for (const json& s : arr) out.push_back(io::state_from_json(s));
  return out;
}

Matrix load_matrix(const json& in, const std::string& key) { return io::matrix_from_json(io::member(in, key)); }

void add_file(CLI::App* sub, Options& o) {
  sub->add_option("--file", o.file, "Problem document (JSON: version, task, inputs)");
}

void add_seed(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Seed for the mt19937_64 generator")->required();
}

// ---------------------------------------------------------------------------
// algebra

Result algebra_generate(const Options& o) {
  require_format(o, {"text", "json"}, "algebra generate");
  const StarAlgebra alg = load_algebra(problem(o, "algebra generate"));
  if (o.format == "json") return {dump(io::to_json(alg))};
  return {TextReport().line("ambient_dim", alg.ambient_dim()).line("dimension", alg.size()).str()};
}

Result algebra_verify(const Options& o, int samples, double threshold) {
  require_format(o, {"text", "json"}, "algebra verify");
  const StarAlgebra alg = load_algebra(problem(o, "algebra verify"));
  const CStarLawReport r = verify_cstar_laws(alg, samples, o.seed);
  const int code = r.all_below(threshold) ? kExitOk : kExitNumerical;
  if (o.format == "json") {
    json j = io::to_json(r);
    j["threshold"] = threshold;
    j["pass"] = code == kExitOk;
    return {dump(j), code};
  }
  TextReport t;
  t.line("samples", r.samples).line("seed", std::to_string(r.seed)).line("rng", r.rng);
  for (const auto& [law, v] : r.max_residual) t.line(law, v);
  t.line("threshold", threshold).line("pass", code == kExitOk);
  return {t.str(), code};
}

Result algebra_commutant(const Options& o) {
  require_format(o, {"text", "json"}, "algebra commutant");
  const StarAlgebra alg = load_algebra(problem(o, "algebra commutant"));
  const StarAlgebra comm = commutant(alg);
  const StarAlgebra cent = center(alg);
  if (o.format == "json")
    return {dump({{"commutant", io::to_json(comm)}, {"center_dimension", cent.size()}, {"irreducible", comm.size() == 1}})};
  return {TextReport()
              .line("algebra_dimension", alg.size())
              .line("commutant_dimension", comm.size())
              .line("center_dimension", cent.size())
              .line("irreducible", comm.size() == 1)
              .line("factor", cent.size() == 1)
              .str()};
}

// ---------------------------------------------------------------------------
// state

Result state_expect(const Options& o) {
  require_format(o, {"text", "json"}, "state expect");
  const json in = problem(o, "state expect");
  const Complex e = expectation(io::state_from_json(io::member(in, "state")), load_matrix(in, "observable"));
  if (o.format == "json") return {dump({{"expectation", {e.real(), e.imag()}}})};
  return {TextReport().line("expectation", num(e)).str()};
}

Result state_deviate(const Options& o) {
  require_format(o, {"text", "json"}, "state deviate");
  const json in = problem(o, "state deviate");
  const State s = io::state_from_json(io::member(in, "state"));
  const Matrix a = load_matrix(in, "observable");
  const double d = deviation(s, a);
  if (o.format == "json") return {dump({{"deviation", d}, {"expectation", expectation(s, a).real()}})};
  return {TextReport().line("expectation", expectation(s, a).real()).line("deviation", d).str()};
}

Result state_measure(const Options& o, std::size_t samples) {
  const json in = problem(o, "state measure");
  const State s = io::state_from_json(io::member(in, "state"));
  const Matrix a = load_matrix(in, "observable");
  const MeasurementRecord rec = simulate_measurements(s, a, samples, o.seed);
  if (o.format == "csv") return {rec.to_csv()};
  json j = io::to_json(rec);
  const double mean = expectation(s, a).real();
  const double se = deviation(s, a) / std::sqrt(static_cast<double>(samples));
  if (o.format == "json") {
    j["expectation"] = mean;
    j["standard_error"] = se;
    return {dump(j)};
  }
  return {TextReport()
              .line("samples", std::to_string(rec.sample_count))
              .line("seed", std::to_string(rec.seed))
              .line("rng", std::string(kRngName))
              .line("empirical_mean", rec.empirical_mean)
              .line("expectation", mean)
              .line("standard_error", se)
              .str()};
}

Result state_separates(const Options& o) {
  require_format(o, {"text", "json"}, "state separates");
  const json in = problem(o, "state separates");
  const StarAlgebra alg = load_algebra(in);
  const std::vector<State> states = load_states(in);
  const bool sep = separates(states, alg);
  if (o.format == "json") return {dump({{"separates", sep}, {"states", states.size()}, {"algebra_dimension", alg.size()}})};
  return {TextReport().line("algebra_dimension", alg.size()).line("states", static_cast<int>(states.size())).line("separates", sep).str()};
}

// ---------------------------------------------------------------------------
// gns

Result gns_build(const Options& o) {
  require_format(o, {"text", "json"}, "gns build");
  const json in = problem(o, "gns build");
  const StarAlgebra alg = load_algebra(in);
  const GnsTriple t = gns_construct(alg, io::state_from_json(io::member(in, "state")));
  if (o.format == "json") return {dump(io::to_json(t))};
  return {TextReport()
              .line("space_dim", t.space_dim)
              .line("algebra_dimension", alg.size())
              .line("structure_residual", t.structure_residual)
              .raw("cyclic_vector:\n" + matrix_text(t.cyclic_vector))
              .str()};
}

Result gns_direct_sum_cmd(const Options& o) {
  require_format(o, {"text", "json"}, "gns direct-sum");
  const json in = problem(o, "gns direct-sum");
  const StarAlgebra alg = load_algebra(in);
  const std::vector<State> states = load_states(in);
  const DirectSumRepresentation d = gns_direct_sum(alg, states);
  if (o.format == "json")
    return {dump({{"space_dim", d.space_dim},
                  {"summand_dims", d.summand_dims},
                  {"separating", d.separating},
                  {"max_norm_deficit", d.max_norm_deficit},
                  {"norm_preserving", d.norm_preserving}})};
  std::string dims;
  for (std::size_t k = 0; k < d.summand_dims.size(); ++k) dims += (k ? "," : "") + std::to_string(d.summand_dims[k]);
  return {TextReport()
              .line("space_dim", d.space_dim)
              .line("summand_dims", dims)
              .line("separating", d.separating)
              .line("max_norm_deficit", d.max_norm_deficit)
              .line("norm_preserving", d.norm_preserving)
              .str()};
}

Result gns_verify(const Options& o, const std::string& triple_path, double threshold) {
  require_format(o, {"text", "json"}, "gns verify");
  const json in = problem(o, "gns verify");
  const StarAlgebra alg = load_algebra(in);
  json triple_json;
  if (!triple_path.empty()) {
    try {
      triple_json = json::parse(io::read_file(triple_path));
    } catch (const json::parse_error& e) {
      throw ValidationError("'" + triple_path + "' is not valid JSON: " + e.what());
    }
  } else {
    triple_json = io::member(in, "triple");
  }
  const GnsTriple t = io::gns_from_json(triple_json);
  if (static_cast<int>(t.rep.size()) != alg.size())
    throw ValidationError("triple has " + std::to_string(t.rep.size()) + " represented basis elements, algebra has " +
                          std::to_string(alg.size()));
  std::optional<State> s;
  if (in.contains("state")) s = io::state_from_json(in["state"]);
  const RepresentationReport r = verify_representation(t, alg, s);
  const bool pass = r.max_residual() < threshold && r.cyclicity_rank == r.space_dim;
  const int code = pass ? kExitOk : kExitNumerical;
  if (o.format == "json") {
    json j = io::to_json(r);
    j["threshold"] = threshold;
    j["pass"] = pass;
    return {dump(j), code};
  }
  return {TextReport()
              .line("space_dim", r.space_dim)
              .line("linearity", r.linearity)
              .line("multiplicativity", r.multiplicativity)
              .line("star", r.star)
              .line("expectation", r.expectation)
              .line("cyclicity_rank", r.cyclicity_rank)
              .line("cyclic_norm_defect", r.cyclic_norm_defect)
              .line("threshold", threshold)
              .line("pass", pass)
              .str(),
          code};
}

// ---------------------------------------------------------------------------
// sectors

Result sectors_decompose(const Options& o, const std::string& kind) {
  require_format(o, {"text", "json"}, "sectors decompose");
  const StarAlgebra alg = load_algebra(problem(o, "sectors decompose"));
  const SectorDecomposition d = decompose(alg, sector_kind_from_string(kind), o.seed);
  const double off = off_block_residual(d, alg);
  if (o.format == "json") {
    json j = io::to_json(d);
    j["off_block_residual"] = off;
    return {dump(j)};
  }
  std::string blocks;
  for (const auto& [off_, size] : d.blocks) blocks += (blocks.empty() ? "" : " ") + std::to_string(size);
  return {TextReport()
              .line("kind", to_string(d.kind))
              .line("block_sizes", blocks)
              .line("off_block_residual", off)
              .str()};
}

Result sectors_phase_check(const Options& o, int n_phases) {
  require_format(o, {"text", "json"}, "sectors phase-check");
  if (n_phases < 2) throw ValidationError("--phases must be at least 2");
  const json in = problem(o, "sectors phase-check");
  const StarAlgebra alg = load_algebra(in);
  const SectorDecomposition d = decompose(alg, SectorKind::irreducible, o.seed);
  const std::size_t b1 = in.contains("block1") ? in["block1"].get<std::size_t>() : 0;
  const std::size_t b2 = in.contains("block2") ? in["block2"].get<std::size_t>() : 1;
  if (d.blocks.size() < 2 && !(in.contains("block1") || in.contains("block2")))
    throw ValidationError("the algebra has a single sector; there is no relative phase to test");
  const Vector psi1 = in.contains("psi1") ? io::vector_from_json(in["psi1"]) : Vector(d.block_basis(b1).col(0));
  const Vector psi2 = in.contains("psi2") ? io::vector_from_json(in["psi2"]) : Vector(d.block_basis(b2).col(0));
  const Complex c1 = in.contains("c1") ? io::complex_from_json(in["c1"]) : Complex(1.0 / std::sqrt(2.0));
  const Complex c2 = in.contains("c2") ? io::complex_from_json(in["c2"]) : Complex(1.0 / std::sqrt(2.0));
  std::vector<double> phases;
  for (int k = 0; k < n_phases; ++k) phases.push_back(2.0 * std::numbers::pi * k / n_phases);
  const PhaseReport r = phase_observability(alg, d, b1, b2, psi1, psi2, c1, c2, phases);
  if (o.format == "json") return {dump({{"variation", r.variation}, {"mixture_deviation", r.mixture_deviation}})};
  return {TextReport()
              .line("sectors", static_cast<int>(d.blocks.size()))
              .line("phases", n_phases)
              .line("variation", r.variation)
              .line("mixture_deviation", r.mixture_deviation)
              .str()};
}

Result sectors_charge_check(const Options& o, double tol) {
  require_format(o, {"text", "json"}, "sectors charge-check");
  const json in = problem(o, "sectors charge-check");
  const StarAlgebra alg = load_algebra(in);
  const bool ok = is_superselected(load_matrix(in, "charge"), alg, tol);
  if (o.format == "json") return {dump({{"superselected", ok}})};
  return {TextReport().line("superselected", ok).str()};
}

// ---------------------------------------------------------------------------
// bounds

struct Pair {
  Matrix a;
  std::optional<Matrix> b;
};

Pair load_pair(const json& in, bool b_required) {
  Pair p{load_matrix(in, "a"), std::nullopt};
  if (in.contains("b")) p.b = io::matrix_from_json(in["b"]);
  else if (b_required) throw ValidationError("missing field 'b'");
  return p;
}

std::string trace_csv(const BoundReport& r) {
  std::string out = "start,iteration,objective\n";
  for (const TraceRow& t : r.trace)
    out += std::to_string(t.start) + "," + std::to_string(t.iteration) + "," + num(t.objective) + "\n";
  return out;
}

void bound_text(TextReport& t, const BoundReport& r) {
  t.line("infimum", r.infimum_estimate)
      .line("objective", r.objective_name)
      .line("starts", r.starts)
      .line("converged_starts", r.converged_starts)
      .line("iterations", std::to_string(r.iterations_total))
      .line("seed", std::to_string(r.seed))
      .line("rng", std::string(kRngName));
  if (r.grid_infimum) t.line("grid_infimum", *r.grid_infimum).line("grid_gap", *r.grid_gap);
}

Result bounds_robertson(const Options& o) {
  require_format(o, {"text", "json"}, "bounds robertson");
  const json in = problem(o, "bounds robertson");
  const State s = io::state_from_json(io::member(in, "state"));
  const Pair p = load_pair(in, true);
  const double bound = robertson_bound(s, p.a, *p.b);
  const double product = deviation(s, p.a) * deviation(s, *p.b);
  if (o.format == "json") return {dump({{"bound", bound}, {"deviation_product", product}, {"slack", product - bound}})};
  return {TextReport().line("bound", bound).line("deviation_product", product).line("slack", product - bound).str()};
}

Result bounds_minimize(const Options& o, const std::string& kind_name, OptimizerConfig cfg) {
  require_format(o, {"text", "json", "csv"}, "bounds minimize");
  const ObjectiveKind kind = objective_kind_from_string(kind_name);
  const Pair p = load_pair(problem(o, "bounds minimize"), kind != ObjectiveKind::single);
  cfg.seed = o.seed;
  cfg.record_trace = o.format == "csv";
  const BoundReport r = minimize_deviation_functional(p.a, p.b ? &*p.b : nullptr, kind, cfg);
  if (o.format == "csv") return {trace_csv(r)};
  if (o.format == "json") return {dump(io::to_json(r))};
  TextReport t;
  bound_text(t, r);
  return {t.str()};
}

Result bounds_certify(const Options& o, OptimizerConfig cfg) {
  require_format(o, {"text", "json"}, "bounds certify");
  const Pair p = load_pair(problem(o, "bounds certify"), true);
  cfg.seed = o.seed;
  const Certification c = certify_complementarity(p.a, *p.b, cfg);
  if (o.format == "json")
    return {dump({{"complementary", c.complementary}, {"threshold", c.threshold}, {"report", io::to_json(c.report)}})};
  TextReport t;
  t.line("complementary", c.complementary).line("threshold", c.threshold);
  bound_text(t, c.report);
  return {t.str()};
}

Result bounds_weyl_cosine(const Options& o, int n, double s, double hbar, bool half, OptimizerConfig cfg) {
  require_format(o, {"text", "json", "csv"}, "bounds weyl-cosine");
  cfg.seed = o.seed;
  cfg.record_trace = o.format == "csv";
  const WeylCosineReport r = weyl_cosine_experiment(build_oscillator(n, s, hbar), cfg, half);
  if (o.format == "csv") return {trace_csv(r.main)};
  if (o.format == "json") {
    json j = {{"truncation", n},
              {"scale", s},
              {"hbar", hbar},
              {"main", io::to_json(r.main)},
              {"reference", r.reference},
              {"squeezed_grid_value", r.squeezed_grid_value}};
    if (r.half) {
      j["half"] = io::to_json(*r.half);
      j["relative_change"] = r.relative_change();
    }
    return {dump(j)};
  }
  TextReport t;
  t.line("truncation", n).line("scale", s).line("hbar", hbar);
  bound_text(t, r.main);
  t.line("squeezed_grid_value", r.squeezed_grid_value);
  if (r.half) t.line("infimum_half_truncation", r.half->infimum_estimate).line("relative_change", r.relative_change());
  t.line("reference_small_argument_estimate", r.reference);
  return {t.str()};
}

Result bounds_collapse(const Options& o, OptimizerConfig cfg) {
  require_format(o, {"text", "json"}, "bounds collapse");
  const Pair p = load_pair(problem(o, "bounds collapse"), true);
  cfg.seed = o.seed;
  const CollapseReport r = bounded_product_collapse(p.a, *p.b, cfg);
  if (o.format == "json")
    return {dump({{"product_infimum", r.product_infimum},
                  {"single_infimum", r.single_infimum},
                  {"bound", r.bound},
                  {"holds", r.holds}})};
  return {TextReport()
              .line("product_infimum", r.product_infimum)
              .line("single_infimum", r.single_infimum)
              .line("bound", r.bound)
              .line("holds", r.holds)
              .str()};
}

// ---------------------------------------------------------------------------
// lambda

Result lambda_parse(const Options& o, const std::string& expr, int coords) {
  require_format(o, {"text", "json"}, "lambda parse");
  const lam::LambdaElement e = lam::parse(expr, coords);
  if (o.format == "json") return {dump({{"canonical", e.str()}, {"degree", e.degree()}, {"coords", coords}})};
  return {e.str() + "\n"};
}

Result lambda_check(const Options& o, int degree, int pairs, int coords) {
  require_format(o, {"text", "json"}, "lambda check");
  if (degree < 0 || pairs < 1 || coords < 1) throw ValidationError("--degree >= 0, --pairs >= 1, --coords >= 1 required");
  std::mt19937_64 rng(o.seed);
  int theorem = 0, dirac = 0, jacobi = 0, involution = 0;
  for (int k = 0; k < pairs; ++k) {
    const lam::RandomElementConfig cfg{1 + k % coords, degree, 3};
    const auto a = lam::random_element(rng, cfg), b = lam::random_element(rng, cfg);
    const auto c = lam::random_element(rng, cfg), d = lam::random_element(rng, cfg);
    theorem += lam::commutator_bracket_check(a, b);
    dirac += lam::dirac_identity_check(a, b, c, d);
    jacobi += lam::jacobi_check(a, b, c);
    involution += lam::lie_bracket(lam::adjoint(a), lam::adjoint(b)) == lam::adjoint(lam::lie_bracket(a, b));
  }
  const bool pass = theorem == pairs && dirac == pairs && jacobi == pairs && involution == pairs;
  const int code = pass ? kExitOk : kExitNumerical;
  if (o.format == "json")
    return {dump({{"pairs", pairs},
                  {"seed", o.seed},
                  {"commutator_is_z_bracket", theorem},
                  {"dirac_identity", dirac},
                  {"jacobi", jacobi},
                  {"involution", involution},
                  {"pass", pass}}),
            code};
  auto row = [&](const char* name, int ok) {
    return std::string(name) + ": " + std::to_string(ok) + "/" + std::to_string(pairs) + (ok == pairs ? " pass" : " FAIL") + "\n";
  };
  return {row("commutator_is_z_bracket", theorem) + row("dirac_identity", dirac) + row("jacobi", jacobi) +
              row("involution", involution),
          code};
}

Result lambda_classical(const Options& o, const std::string& a_text, const std::string& b_text, int coords) {
  require_format(o, {"text", "json"}, "lambda classical");
  const auto a = lam::parse(a_text, coords), b = lam::parse(b_text, coords);
  const auto lhs = lam::specialize_classical(lam::lie_bracket(a, b));
  const auto rhs = lam::classical_poisson(lam::specialize_classical(a), lam::specialize_classical(b));
  const bool eq = lhs == rhs;
  if (o.format == "json") return {dump({{"specialized_bracket", lhs.str()}, {"formal_poisson", rhs.str()}, {"equal", eq}}), eq ? kExitOk : kExitNumerical};
  return {TextReport().line("specialized_bracket", lhs.str()).line("formal_poisson", rhs.str()).line("equal", eq).str(),
          eq ? kExitOk : kExitNumerical};
}

lam::UnivariatePolynomial parse_psi(const std::string& text) {
  lam::UnivariatePolynomial psi;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto e = lam::parse(item, 1);
    if (!e.is_scalar()) throw ValidationError("--psi takes comma-separated rational coefficients");
    psi.coefficients.push_back(e.as_scalar());
  }
  if (psi.coefficients.empty()) throw ValidationError("--psi is empty");
  return psi;
}

Result lambda_quantum(const Options& o, const std::string& a_text, const std::string& b_text,
                      const std::string& hbar_text, const std::string& psi_text) {
  require_format(o, {"text", "json"}, "lambda quantum");
  const auto a = lam::parse(a_text, 1), b = lam::parse(b_text, 1);
  const auto hb = lam::parse(hbar_text, 1);
  if (!hb.is_scalar() || !hb.as_scalar().is_real()) throw ValidationError("--hbar must be a real rational");
  const lam::Rational hbar = hb.as_scalar().re();
  const auto psi = parse_psi(psi_text);
  const auto lhs = lam::specialize_quantum(lam::commutator(a, b), hbar, psi);
  auto rhs = lam::specialize_quantum(lam::lie_bracket(a, b), hbar, psi);
  rhs *= lam::GaussianRational(0, hbar);
  const bool eq = lhs == rhs;
  const int code = eq ? kExitOk : kExitNumerical;
  if (o.format == "json") return {dump({{"commutator_action", lhs.str()}, {"i_hbar_bracket_action", rhs.str()}, {"equal", eq}}), code};
  return {TextReport().line("commutator_action", lhs.str()).line("i_hbar_bracket_action", rhs.str()).line("equal", eq).str(), code};
}

// ---------------------------------------------------------------------------
// weyl

DiscreteWeylSystem system_from(const Options& o, int n, const std::string& task, const char* key) {
  if (!o.file.empty()) return io::weyl_system_from_json(io::member(problem(o, task), key));
  if (n < 2) throw ValidationError("--n must be >= 2 (or give --file)");
  return schrodinger_system(n);
}

Result weyl_build(const Options& o, int n) {
  require_format(o, {"text", "json"}, "weyl build");
  const DiscreteWeylSystem sys = schrodinger_system(n);
  if (o.format == "json") return {dump(io::to_json(sys))};
  const WeylRelationReport r = verify_weyl_relations(sys);
  return {TextReport().line("modulus", n).line("max_residual", r.max_residual()).raw("u:\n" + matrix_text(sys.u) + "v:\n" + matrix_text(sys.v)).str()};
}

Result weyl_intertwine(const Options& o, int n, double tol) {
  require_format(o, {"text", "json"}, "weyl intertwine");
  DiscreteWeylSystem r1 = schrodinger_system(2);
  DiscreteWeylSystem r2 = r1;
  if (!o.file.empty()) {
    const json in = problem(o, "weyl intertwine");
    r1 = io::weyl_system_from_json(io::member(in, "from"));
    r2 = io::weyl_system_from_json(io::member(in, "to"));
  } else {
    if (n < 2) throw ValidationError("--n must be >= 2 (or give --file)");
    Rng rng(o.seed);
    r1 = schrodinger_system(n);
    r2 = conjugated_system(r1, random_unitary(rng, n));
  }
  const IntertwinerResult r = find_intertwiner(r1, r2, tol);
  if (o.format == "json") return {dump(io::to_json(r))};
  return {TextReport()
              .line("modulus", r1.modulus)
              .line("nullity", r.nullity)
              .line("u_residual", r.u_residual)
              .line("v_residual", r.v_residual)
              .line("unitarity_residual", r.unitarity_residual)
              .line("gap", r.gap)
              .raw("w:\n" + matrix_text(r.w))
              .str()};
}

Result weyl_verify(const Options& o, int n, double threshold) {
  require_format(o, {"text", "json"}, "weyl verify");
  WeylRelationReport r;
  int modulus = n;
  if (!o.file.empty()) {
    // Raw residuals: the matrices need not form a valid system.
    const json& sys = io::member(problem(o, "weyl verify"), "system");
    modulus = io::member(sys, "modulus").get<int>();
    r = verify_weyl_relations(modulus, io::matrix_from_json(io::member(sys, "u")), io::matrix_from_json(io::member(sys, "v")));
  } else {
    r = verify_weyl_relations(system_from(o, n, "weyl verify", "system"));
  }
  const bool pass = r.max_residual() < threshold;
  const int code = pass ? kExitOk : kExitNumerical;
  if (o.format == "json") {
    json j = io::to_json(r);
    j["modulus"] = modulus;
    j["pass"] = pass;
    return {dump(j), code};
  }
  return {TextReport()
              .line("modulus", modulus)
              .line("u_power", r.u_power)
              .line("v_power", r.v_power)
              .line("exchange", r.exchange)
              .line("u_unitarity", r.u_unitarity)
              .line("v_unitarity", r.v_unitarity)
              .line("group_law", r.group_law)
              .line("pass", pass)
              .str(),
          code};
}

void emit(const Options& o, const std::string& body) {
  if (o.output.empty()) {
    std::cout << body;
    std::cout.flush();
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw io::IoError("cannot open '" + o.output + "' for writing");
  out << body;
  if (!out) throw io::IoError("error writing '" + o.output + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opalg: finite-dimensional operator-algebra workbench"};
  app.require_subcommand(1);
  Options o;
  std::function<Result()> action;

  auto leaf = [&](CLI::App* group, const std::string& name, const std::string& help) {
    CLI::App* sub = group->add_subcommand(name, help);
    sub->add_option("--format", o.format, "Output format: text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--output", o.output, "Write the report to this path instead of stdout");
    return sub;
  };

  OptimizerConfig cfg;
  auto add_optimizer = [&](CLI::App* sub) {
    sub->add_option("--starts", cfg.starts, "Random starts for the multistart optimizer");
    sub->add_option("--max-iterations", cfg.max_iterations, "Iteration cap per start");
    sub->add_option("--grad-tol", cfg.grad_tol, "Riemannian gradient tolerance");
  };

  // algebra
  CLI::App* algebra = app.add_subcommand("algebra", "Finite-dimensional *-algebras of matrices");
  algebra->require_subcommand(1);
  {
    CLI::App* s = leaf(algebra, "generate", "Generate the *-algebra spanned by inputs.generators (with identity)");
    add_file(s, o);
    s->callback([&] { action = [&] { return algebra_generate(o); }; });
  }
  int law_samples = 100;
  double law_threshold = 1e-9;
  {
    CLI::App* s = leaf(algebra, "verify", "Check the C*-norm laws on random elements of an algebra");
    add_file(s, o);
    add_seed(s, o);
    s->add_option("--samples", law_samples, "Random elements to test");
    s->add_option("--threshold", law_threshold, "Largest acceptable residual");
    s->callback([&] { action = [&] { return algebra_verify(o, law_samples, law_threshold); }; });
  }
  {
    CLI::App* s = leaf(algebra, "commutant", "Commutant and center of an algebra (irreducibility test)");
    add_file(s, o);
    s->callback([&] { action = [&] { return algebra_commutant(o); }; });
  }

  // state
  CLI::App* state = app.add_subcommand("state", "States as density matrices");
  state->require_subcommand(1);
  {
    CLI::App* s = leaf(state, "expect", "Expectation Tr(rho A) of inputs.observable in inputs.state");
    add_file(s, o);
    s->callback([&] { action = [&] { return state_expect(o); }; });
  }
  {
    CLI::App* s = leaf(state, "deviate", "Standard deviation of a hermitian observable in a state");
    add_file(s, o);
    s->callback([&] { action = [&] { return state_deviate(o); }; });
  }
  std::size_t measure_samples = 1000;
  {
    CLI::App* s = leaf(state, "measure", "Simulate repeated projective measurements (Born rule)");
    add_file(s, o);
    add_seed(s, o);
    s->add_option("--samples", measure_samples, "Number of simulated outcomes");
    s->callback([&] { action = [&] { return state_measure(o, measure_samples); }; });
  }
  {
    CLI::App* s = leaf(state, "separates", "Does inputs.states separate the elements of the algebra?");
    add_file(s, o);
    s->callback([&] { action = [&] { return state_separates(o); }; });
  }

  // gns
  CLI::App* gns = app.add_subcommand("gns", "GNS representations");
  gns->require_subcommand(1);
  {
    CLI::App* s = leaf(gns, "build", "GNS triple for (inputs.algebra, inputs.state)");
    add_file(s, o);
    s->callback([&] { action = [&] { return gns_build(o); }; });
  }
  {
    CLI::App* s = leaf(gns, "direct-sum", "Direct sum of GNS representations of inputs.states; faithfulness check");
    add_file(s, o);
    s->callback([&] { action = [&] { return gns_direct_sum_cmd(o); }; });
  }
  std::string triple_path;
  double gns_threshold = 1e-8;
  {
    CLI::App* s = leaf(gns, "verify", "Verify a GNS triple (from --triple or inputs.triple) against its algebra");
    add_file(s, o);
    s->add_option("--triple", triple_path, "JSON written by 'gns build --format json'");
    s->add_option("--threshold", gns_threshold, "Largest acceptable residual");
    s->callback([&] { action = [&] { return gns_verify(o, triple_path, gns_threshold); }; });
  }

  // sectors
  CLI::App* sectors = app.add_subcommand("sectors", "Superselection sectors");
  sectors->require_subcommand(1);
  std::string sector_kind = "irreducible";
  {
    CLI::App* s = leaf(sectors, "decompose", "Block-diagonalize the algebra into sectors");
    add_file(s, o);
    add_seed(s, o);
    s->add_option("--kind", sector_kind, "irreducible or isotypic")->check(CLI::IsMember({"irreducible", "isotypic"}));
    s->callback([&] { action = [&] { return sectors_decompose(o, sector_kind); }; });
  }
  int n_phases = 64;
  {
    CLI::App* s = leaf(sectors, "phase-check", "Relative-phase (in)visibility between two sectors");
    add_file(s, o);
    add_seed(s, o);
    s->add_option("--phases", n_phases, "Number of equally spaced relative phases");
    s->callback([&] { action = [&] { return sectors_phase_check(o, n_phases); }; });
  }
  double charge_tol = 1e-10;
  {
    CLI::App* s = leaf(sectors, "charge-check", "Is inputs.charge central for the algebra (superselected)?");
    add_file(s, o);
    s->add_option("--tol", charge_tol, "Commutator norm tolerance");
    s->callback([&] { action = [&] { return sectors_charge_check(o, charge_tol); }; });
  }

  // bounds
  CLI::App* bounds = app.add_subcommand("bounds", "Uncertainty bounds and complementarity");
  bounds->require_subcommand(1);
  {
    CLI::App* s = leaf(bounds, "robertson", "Robertson bound (1/2)|w([a,b])| versus the deviation product");
    add_file(s, o);
    s->callback([&] { action = [&] { return bounds_robertson(o); }; });
  }
  std::string kind = "sum";
  {
    CLI::App* s = leaf(bounds, "minimize", "Infimum over pure states of a deviation functional of (a, b)");
    add_file(s, o);
    add_seed(s, o);
    add_optimizer(s);
    s->add_option("--kind", kind, "sum, sum_of_squares, product or single")
        ->check(CLI::IsMember({"sum", "sum_of_squares", "product", "single"}));
    s->callback([&] { action = [&] { return bounds_minimize(o, kind, cfg); }; });
  }
  {
    CLI::App* s = leaf(bounds, "certify", "Certify complementarity: state-independent positive bound on the deviation sum");
    add_file(s, o);
    add_seed(s, o);
    add_optimizer(s);
    s->callback([&] { action = [&] { return bounds_certify(o, cfg); }; });
  }
  int osc_n = 40;
  double osc_s = 1.0, osc_hbar = 1.0;
  bool no_half = false;
  {
    CLI::App* s = leaf(bounds, "weyl-cosine", "Deviation infimum of cos(q~)^2 + cos(p~)^2 on a truncated oscillator");
    add_seed(s, o);
    add_optimizer(s);
    s->add_option("--n", osc_n, "Truncation dimension (>= 4)");
    s->add_option("--scale", osc_s, "Scale s of the oscillator");
    s->add_option("--hbar", osc_hbar, "Planck constant");
    s->add_flag("--no-half", no_half, "Skip the comparison run at truncation n/2");
    s->callback([&] { action = [&] { return bounds_weyl_cosine(o, osc_n, osc_s, osc_hbar, !no_half, cfg); }; });
  }
  {
    CLI::App* s = leaf(bounds, "collapse", "Product infimum is controlled by the single-observable infimum");
    add_file(s, o);
    add_seed(s, o);
    add_optimizer(s);
    s->callback([&] { action = [&] { return bounds_collapse(o, cfg); }; });
  }

  // lambda
  CLI::App* lambda = app.add_subcommand("lambda", "Exact canonical Poisson algebra with central Z");
  lambda->require_subcommand(1);
  std::string expr, expr_b, hbar_text = "1", psi_text = "1,1,1";
  int coords = 1, degree = 4, pairs = 200, check_coords = 3;
  {
    CLI::App* s = leaf(lambda, "parse", "Parse an expression and print its normal form");
    s->add_option("--expr", expr, "Expression, e.g. \"[q1, p1^2] + 3/2*Z\"")->required();
    s->add_option("--coords", coords, "Number of canonical pairs s");
    s->callback([&] { action = [&] { return lambda_parse(o, expr, coords); }; });
  }
  {
    CLI::App* s = leaf(lambda, "check", "Random battery: [A,B] = Z{A,B}, Dirac identity, Jacobi, involution");
    add_seed(s, o);
    s->add_option("--degree", degree, "Maximal degree of random elements (Z counts 2)");
    s->add_option("--pairs", pairs, "Number of random cases per identity");
    s->add_option("--coords", check_coords, "Cases cycle through s = 1..coords");
    s->callback([&] { action = [&] { return lambda_check(o, degree, pairs, check_coords); }; });
  }
  {
    CLI::App* s = leaf(lambda, "classical", "Z -> 0 specialization of {A,B} versus the formal Poisson bracket");
    s->add_option("--a", expr, "Element A")->required();
    s->add_option("--b", expr_b, "Element B")->required();
    s->add_option("--coords", coords, "Number of canonical pairs s");
    s->callback([&] { action = [&] { return lambda_classical(o, expr, expr_b, coords); }; });
  }
  {
    CLI::App* s = leaf(lambda, "quantum", "Schroedinger action: [A,B] psi versus i hbar {A,B} psi (s = 1)");
    s->add_option("--a", expr, "Element A")->required();
    s->add_option("--b", expr_b, "Element B")->required();
    s->add_option("--hbar", hbar_text, "Rational hbar");
    s->add_option("--psi", psi_text, "Coefficients of psi(x), constant term first");
    s->callback([&] { action = [&] { return lambda_quantum(o, expr, expr_b, hbar_text, psi_text); }; });
  }

  // weyl
  CLI::App* weyl = app.add_subcommand("weyl", "Finite clock/shift Weyl systems");
  weyl->require_subcommand(1);
  int weyl_n = 0;
  double weyl_tol = 1e-9;
  {
    CLI::App* s = leaf(weyl, "build", "Clock and shift pair U V = e^{2 pi i/n} V U");
    s->add_option("--n", weyl_n, "Modulus n >= 2")->required();
    s->callback([&] { action = [&] { return weyl_build(o, weyl_n); }; });
  }
  {
    CLI::App* s = leaf(weyl, "intertwine",
                       "Unitary intertwiner between two irreducible Weyl systems (finite uniqueness theorem)");
    add_file(s, o);
    add_seed(s, o);
    s->add_option("--n", weyl_n, "Modulus; intertwines the clock/shift pair with a random unitary conjugate");
    s->add_option("--tol", weyl_tol, "Null-space and residual tolerance");
    s->callback([&] { action = [&] { return weyl_intertwine(o, weyl_n, weyl_tol); }; });
  }
  {
    CLI::App* s = leaf(weyl, "verify", "Residuals of the Weyl relations for --n or inputs.system");
    add_file(s, o);
    s->add_option("--n", weyl_n, "Modulus of the clock/shift pair to check");
    s->add_option("--threshold", weyl_tol, "Largest acceptable residual");
    s->callback([&] { action = [&] { return weyl_verify(o, weyl_n, weyl_tol); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    const Result r = action();
    emit(o, r.body);
    return r.code;
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
