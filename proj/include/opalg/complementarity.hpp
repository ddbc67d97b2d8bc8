#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "opalg/matrix.hpp"
#include "opalg/states.hpp"

namespace opalg {

enum class ObjectiveKind { sum, sum_of_squares, product, single };

std::string to_string(ObjectiveKind kind);
ObjectiveKind objective_kind_from_string(const std::string& name);

struct OptimizerConfig {
  int starts = 32;
  double grad_tol = 1e-10;
  int max_iterations = 10000;
  double backtrack = 0.5;
  std::uint64_t seed = 0;
  /// Also start from the eigenvectors of the observables involved.
  bool eigenvector_starts = true;
  /// Cross-check against a dense parameter grid when the dimension is <= 4.
  bool grid_check = true;
  /// Grid points per angle; 0 picks a dimension-dependent default.
  int grid_resolution = 0;
  /// Certification threshold; defaults to 1e-6 * (||a|| + ||b||).
  std::optional<double> threshold;
  bool record_trace = false;
};

struct TraceRow {
  int start = 0;
  int iteration = 0;
  double objective = 0.0;
};

struct BoundReport {
  ObjectiveKind kind = ObjectiveKind::single;
  std::string objective_name;
  double infimum_estimate = 0.0;
  Vector argmin_state;
  int starts = 0;
  int converged_starts = 0;
  long iterations_total = 0;
  std::uint64_t seed = 0;
  std::optional<double> grid_infimum;
  /// infimum_estimate - grid_infimum.
  std::optional<double> grid_gap;
  std::vector<TraceRow> trace;
};

/// A smooth-enough function on the unit sphere of C^n. `gradient` returns the
/// real Euclidean gradient packed as a complex vector (2 dF/d conj(psi)).
struct SphereObjective {
  std::function<double(const Vector&)> value;
  std::function<double(const Vector&, Vector&)> value_and_gradient;
};

/// Multistart projected gradient descent with Armijo backtracking on the unit
/// sphere. `extra_starts` are tried after the seeded random starts.
BoundReport minimize_on_sphere(const SphereObjective& objective, int dim, const OptimizerConfig& cfg,
                               const std::vector<Vector>& extra_starts = {});

/// Dense grid in hyperspherical coordinates followed by a compass search from
/// the best grid points. Independent of the gradient machinery.
double grid_oracle_infimum(const std::function<double(const Vector&)>& value, int dim, int resolution);

/// Variance of hermitian a in the pure state psi, as ||(a - <a>) psi||^2.
double pure_variance(const Matrix& a, const Vector& psi);

SphereObjective deviation_objective(const Matrix& a, const Matrix* b, ObjectiveKind kind);

double robertson_bound(const State& s, const Matrix& a, const Matrix& b);

BoundReport minimize_deviation_functional(const Matrix& a, const Matrix* b, ObjectiveKind kind,
                                          const OptimizerConfig& cfg);

struct Certification {
  bool complementary = false;
  double threshold = 0.0;
  BoundReport report;
};

Certification certify_complementarity(const Matrix& a, const Matrix& b, const OptimizerConfig& cfg);

struct SharpState {
  std::optional<Vector> vector;
  double commutator_norm = 0.0;
};

/// Joint eigenvector of a commuting pair, or the commutator norm when they do not commute.
SharpState common_sharp_state(const Matrix& a, const Matrix& b, double tol = 1e-10);

struct OscillatorModel {
  int truncation_dim = 0;
  double scale_s = 1.0;
  double hbar = 1.0;
  Matrix q_matrix;
  Matrix p_matrix;
};

OscillatorModel build_oscillator(int n, double s, double hbar);

/// Var(cos q~) + Var(cos p~) where q~ = sqrt(s/hbar)(q - <q>) and
/// p~ = (hbar s)^{-1/2}(p - <p>) are recentred on psi's own means.
class WeylCosineObjective {
 public:
  explicit WeylCosineObjective(const OscillatorModel& model);
  double value(const Vector& psi) const;
  double value_and_gradient(const Vector& psi, Vector& grad) const;
  SphereObjective as_sphere_objective() const;
  int dim() const { return static_cast<int>(q_values_.size()); }

 private:
  double term(const Eigen::VectorXd& values, const Matrix& vectors, double scale, const Vector& psi,
              Vector* grad) const;
  Eigen::VectorXd q_values_, p_values_;
  Matrix q_vectors_, p_vectors_;
  double q_scale_, p_scale_;
};

/// Squeezed vacuum exp((r/2)(a^2 - a^dag^2))|0> in the truncated number basis.
Vector squeezed_vacuum(int n, double r);

struct WeylCosineReport {
  BoundReport main;
  std::optional<BoundReport> half;  // same experiment at truncation N/2
  double reference = 0.125;        // small-argument estimate (1/2)^3
  /// Best objective over a coarse grid of squeezed vacua (an upper bound).
  double squeezed_grid_value = 0.0;
  double relative_change() const;
};

WeylCosineReport weyl_cosine_experiment(const OscillatorModel& model, const OptimizerConfig& cfg,
                                        bool with_half_truncation = true);

struct CollapseReport {
  double product_infimum = 0.0;
  double single_infimum = 0.0;
  double bound = 0.0;  // single_infimum * sqrt(2) * ||b||
  bool holds = false;
};

CollapseReport bounded_product_collapse(const Matrix& a, const Matrix& b, const OptimizerConfig& cfg,
                                        double tol = 1e-10);

}  // namespace opalg
