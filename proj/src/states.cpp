#include "opalg/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace opalg {

State::State(Matrix rho, double tol) : rho_(std::move(rho)) {
  require_square(rho_, "State");
  require_finite(rho_, "State");
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw ValidationError("State: density matrix is not hermitian");
  rho_ = (rho_ + rho_.adjoint()) * 0.5;
  if (std::abs(rho_.trace() - Complex(1.0)) > tol)
    throw ValidationError("State: trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw ValidationError("State: density matrix has a negative eigenvalue");
}

State State::pure(const Vector& psi, double tol) {
  const double nrm = psi.norm();
  if (psi.size() < 1 || std::abs(nrm - 1.0) > tol)
    throw ValidationError("State::pure: vector must have unit norm");
  return State(psi * psi.adjoint(), tol);
}

State State::maximally_mixed(int n) {
  if (n < 1) throw ValidationError("State::maximally_mixed: n must be >= 1");
  return State(Matrix::Identity(n, n) / static_cast<double>(n));
}

Complex expectation(const State& s, const Matrix& a) {
  require_same_dim(s.rho(), a, "expectation");
  return (s.rho().cwiseProduct(a.transpose())).sum();
}

double deviation(const State& s, const Matrix& a, double tol) {
  require_same_dim(s.rho(), a, "deviation");
  require_hermitian(a, tol, "deviation");
  const double mean = expectation(s, a).real();
  const Matrix shifted = a - mean * Matrix::Identity(a.rows(), a.cols());
  const double var = expectation(s, shifted * shifted).real();
  if (var < -tol) throw NumericalError("deviation: negative variance (invalid state?)");
  return std::sqrt(std::max(var, 0.0));
}

std::string MeasurementRecord::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "# seed=" << seed << " rng=" << kRngName << " samples=" << sample_count
      << " mean=" << empirical_mean << "\n";
  out << "index,outcome\n";
  for (std::size_t i = 0; i < outcomes.size(); ++i) out << i << ',' << outcomes[i] << '\n';
  return out.str();
}

MeasurementRecord simulate_measurements(const State& s, const Matrix& a, std::size_t n_samples,
                                        std::uint64_t seed, double tol) {
  if (n_samples == 0) throw ValidationError("simulate_measurements: n_samples must be >= 1");
  require_same_dim(s.rho(), a, "simulate_measurements");
  require_hermitian(a, tol, "simulate_measurements");
  const Matrix h = (a + a.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const double range = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
  const auto clusters = spectral_clusters(h, 1e-8 * std::max(range, 1.0));

  std::vector<double> values;
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& c : clusters) {
    const double p = (c.vectors.adjoint() * s.rho() * c.vectors).trace().real();
    if (p < -tol) throw NumericalError("simulate_measurements: negative Born probability");
    total += std::max(p, 0.0);
    values.push_back(c.value);
    cumulative.push_back(total);
  }

  MeasurementRecord rec;
  rec.seed = seed;
  rec.sample_count = n_samples;
  rec.outcomes.reserve(n_samples);
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, total);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double u = uniform(rng);
    // upper_bound never lands on a zero-probability outcome.
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t k = static_cast<std::size_t>(std::distance(cumulative.begin(), it));
    if (k >= values.size()) k = values.size() - 1;
    rec.outcomes.push_back(values[k]);
    sum += values[k];
  }
  rec.empirical_mean = sum / static_cast<double>(n_samples);
  return rec;
}

bool separates(std::span<const State> states, const StarAlgebra& alg, double tol) {
  if (states.empty()) throw ValidationError("separates: empty state collection");
  Matrix functionals(static_cast<Eigen::Index>(states.size()), alg.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != alg.ambient_dim()) throw ValidationError("separates: dimension mismatch");
    for (int k = 0; k < alg.size(); ++k)
      functionals(static_cast<Eigen::Index>(i), k) = expectation(states[i], alg.basis()[static_cast<std::size_t>(k)]);
  }
  if (functionals.rows() < functionals.cols()) return false;
  Eigen::JacobiSVD<Matrix> svd(functionals);
  const auto& sv = svd.singularValues();
  const double cutoff = tol * std::max(1.0, sv(0));
  return sv(sv.size() - 1) > cutoff;
}

PositivityReport positivity_report(const Matrix& a, std::span<const State> states, double tol) {
  require_hermitian(a, tol, "positivity_report");
  PositivityReport r;
  Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.min_expectation = std::numeric_limits<double>::infinity();
  for (const State& s : states) r.min_expectation = std::min(r.min_expectation, expectation(s, a).real());
  const double scale = std::max(1.0, operator_norm(a));
  r.agree = !states.empty() && std::abs(r.min_expectation - r.min_eigenvalue) <= 1e3 * tol * scale;
  r.insufficient_state_family = !r.agree;
  return r;
}

std::vector<State> eigenstates(const Matrix& a) {
  require_square(a, "eigenstates");
  Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint()) * 0.5);
  std::vector<State> out;
  for (Eigen::Index k = 0; k < es.eigenvectors().cols(); ++k) {
    const Vector v = es.eigenvectors().col(k);
    out.push_back(State::pure(v / v.norm(), 1e-8));
  }
  return out;
}

}  // namespace opalg
