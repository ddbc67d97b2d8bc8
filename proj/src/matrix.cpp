#include "opalg/matrix.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace opalg {

void require_square(const Matrix& a, const char* what) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    throw ValidationError(std::string(what) + ": matrix must be square and non-empty (got " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ")");
  }
}

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw ValidationError(std::string(what) + ": non-finite entry");
}

void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError(std::string(what) + ": dimension mismatch (" + std::to_string(a.rows()) +
                          "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()) + ")");
  }
}

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

void require_hermitian(const Matrix& a, double tol, const char* what) {
  require_square(a, what);
  if (!is_hermitian(a, tol)) throw ValidationError(std::string(what) + ": matrix is not hermitian");
}

double operator_norm(const Matrix& a) {
  require_square(a, "operator_norm");
  if (is_hermitian(a, 0.0)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

Complex hs_inner(const Matrix& x, const Matrix& y) {
  return (x.conjugate().cwiseProduct(y)).sum();
}

double hs_norm(const Matrix& x) { return x.norm(); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix random_gaussian(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

Matrix random_hermitian(Rng& rng, int n) {
  Matrix g = random_gaussian(rng, n, n);
  return (g + g.adjoint()) * 0.5;
}

Matrix random_unitary(Rng& rng, int n) {
  Matrix g = random_gaussian(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases of R's diagonal so the distribution is Haar.
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Vector random_unit_vector(Rng& rng, int n) {
  Vector v = random_gaussian(rng, n, 1).col(0);
  return v / v.norm();
}

Matrix random_density(Rng& rng, int n, int rank) {
  Matrix g = random_gaussian(rng, n, std::clamp(rank, 1, n));
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) * 0.5;
}

std::vector<SpectralCluster> spectral_clusters(const Matrix& hermitian, double gap) {
  require_square(hermitian, "spectral_clusters");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
  const Eigen::VectorXd& vals = es.eigenvalues();
  const Matrix& vecs = es.eigenvectors();
  std::vector<SpectralCluster> out;
  const Eigen::Index n = vals.size();
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    if (k == n || vals(k) - vals(k - 1) > gap) {
      SpectralCluster c;
      c.value = vals.segment(start, k - start).mean();
      c.vectors = vecs.middleCols(start, k - start);
      out.push_back(std::move(c));
      start = k;
    }
  }
  return out;
}

NullSpace null_space(const Matrix& m, double rel_tol, double reference) {
  NullSpace out;
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0) {
    out.basis = Matrix::Identity(cols, cols);
    return out;
  }
  auto extract = [&](const Eigen::VectorXd& sv, const Matrix& v) {
    out.singular_values = sv;
    const double smax = sv.size() ? sv(0) : 0.0;
    const double cutoff = rel_tol * std::max(smax, reference);
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv(k) > cutoff) ++rank;
    out.basis = v.rightCols(cols - rank);
    // The basis must actually be annihilated; a wrong V is possible in principle.
    return sv.allFinite() && v.allFinite() && (m * out.basis).norm() <= 10.0 * std::max(cutoff, 1e-14) * std::sqrt(static_cast<double>(cols));
  };
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  if (extract(svd.singularValues(), svd.matrixV())) return out;
  // BDCSVD occasionally returns an inaccurate V on highly rank-deficient input.
  Eigen::JacobiSVD<Matrix> jacobi(m, Eigen::ComputeFullV);
  extract(jacobi.singularValues(), jacobi.matrixV());
  return out;
}

}  // namespace opalg
