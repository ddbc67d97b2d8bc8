#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "opalg/matrix.hpp"
#include "opalg/matrix_algebra.hpp"

namespace opalg {

inline constexpr double kStateTol = 1e-10;

/// A density matrix: hermitian, positive semidefinite, unit trace.
class State {
 public:
  explicit State(Matrix rho, double tol = kStateTol);

  static State pure(const Vector& psi, double tol = kStateTol);
  static State maximally_mixed(int n);

  const Matrix& rho() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }

 private:
  Matrix rho_;
};

/// Tr(rho a).
Complex expectation(const State& s, const Matrix& a);

/// sqrt(w(a^2) - w(a)^2) for hermitian a, evaluated as sqrt(w((a - w(a))^2)).
double deviation(const State& s, const Matrix& a, double tol = kStateTol);

struct MeasurementRecord {
  std::vector<double> outcomes;
  double empirical_mean = 0.0;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;

  /// "index,outcome" rows preceded by comment lines carrying seed and mean.
  std::string to_csv() const;
};

/// Born-rule sampling of the spectral decomposition of `a`. Degenerate
/// eigenvalues share one projection.
MeasurementRecord simulate_measurements(const State& s, const Matrix& a, std::size_t n_samples,
                                        std::uint64_t seed, double tol = kStateTol);

/// True iff A -> (w_i(A))_i is injective on the span of `alg`.
bool separates(std::span<const State> states, const StarAlgebra& alg, double tol = 1e-9);

struct PositivityReport {
  double min_expectation = 0.0;
  double min_eigenvalue = 0.0;
  bool agree = false;
  /// Set when the supplied states cannot see the bottom of the spectrum.
  bool insufficient_state_family = false;
};

PositivityReport positivity_report(const Matrix& a, std::span<const State> states,
                                   double tol = kStateTol);

/// Pure states on the eigenvectors of `a`.
std::vector<State> eigenstates(const Matrix& a);

}  // namespace opalg
