#include "opalg/matrix_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace opalg {

namespace {

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, int n) { return Eigen::Map<const Matrix>(v.data(), n, n); }

Matrix stack_vectorized(const std::vector<Matrix>& basis, int n) {
  Matrix out(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = vec(basis[k]);
  return out;
}

// Hilbert-Schmidt Gram-Schmidt with relative discard threshold. Returns true
// when a new direction was appended. `reference` is the size the candidate
// would have without cancellation (1 for a product of unit basis elements), so
// products that vanish up to rounding are not promoted to new directions.
bool absorb(std::vector<Matrix>& basis, const Matrix& candidate, double tol, double reference = 0.0) {
  const double scale = std::max(candidate.norm(), reference);
  if (scale == 0.0) return false;
  Matrix r = candidate;
  for (int pass = 0; pass < 2; ++pass)
    for (const Matrix& b : basis) r -= hs_inner(b, r) * b;
  const double rn = r.norm();
  if (rn < tol * scale) return false;
  basis.push_back(r / rn);
  return true;
}

}  // namespace

StarAlgebra::StarAlgebra(int ambient_dim, std::vector<Matrix> basis, double tol)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)), tol_(tol) {
  if (ambient_dim_ < 1) throw ValidationError("StarAlgebra: ambient dimension must be >= 1");
  if (!(tol_ >= 0.0)) throw ValidationError("StarAlgebra: tolerance must be nonnegative");
  const int n = ambient_dim_;
  if (basis_.empty()) throw ValidationError("StarAlgebra: empty basis (identity must be in the span)");
  if (basis_.size() > static_cast<std::size_t>(n) * n)
    throw ValidationError("StarAlgebra: basis larger than n^2");
  for (const Matrix& b : basis_) {
    if (b.rows() != n || b.cols() != n)
      throw ValidationError("StarAlgebra: basis element has wrong shape");
    require_finite(b, "StarAlgebra");
  }
  vec_basis_ = stack_vectorized(basis_, n);
  const Matrix gram = vec_basis_.adjoint() * vec_basis_;
  const double ortho = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (ortho > tol_) throw ValidationError("StarAlgebra: basis is not Hilbert-Schmidt orthonormal");

  if (projection_residual(Matrix::Identity(n, n)) > tol_)
    throw ValidationError("StarAlgebra: identity is not in the span");
  for (const Matrix& b : basis_)
    if (projection_residual(b.adjoint()) > tol_)
      throw ValidationError("StarAlgebra: span is not closed under adjoint");
  for (const Matrix& a : basis_)
    for (const Matrix& b : basis_)
      if (projection_residual(a * b) > tol_)
        throw ValidationError("StarAlgebra: span is not closed under multiplication");
}

Vector StarAlgebra::coordinates(const Matrix& x) const {
  if (x.rows() != ambient_dim_ || x.cols() != ambient_dim_)
    throw ValidationError("StarAlgebra::coordinates: dimension mismatch");
  return vec_basis_.adjoint() * vec(x);
}

Matrix StarAlgebra::element(const Vector& coefficients) const {
  if (coefficients.size() != size())
    throw ValidationError("StarAlgebra::element: coefficient count mismatch");
  return unvec(vec_basis_ * coefficients, ambient_dim_);
}

double StarAlgebra::projection_residual(const Matrix& x) const {
  const Vector v = vec(x);
  return (v - vec_basis_ * (vec_basis_.adjoint() * v)).norm();
}

Matrix StarAlgebra::vectorized_basis() const { return vec_basis_; }

StarAlgebra StarAlgebra::full(int n, double tol) {
  std::vector<Matrix> basis;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      basis.push_back(std::move(e));
    }
  return StarAlgebra(n, std::move(basis), tol);
}

StarAlgebra StarAlgebra::scalars(int n, double tol) {
  if (n < 1) throw ValidationError("StarAlgebra::scalars: n must be >= 1");
  return StarAlgebra(n, {Matrix::Identity(n, n) / std::sqrt(static_cast<double>(n))}, tol);
}

StarAlgebra StarAlgebra::diagonal(int n, double tol) {
  std::vector<Matrix> basis;
  for (int i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  return StarAlgebra(n, std::move(basis), tol);
}

StarAlgebra StarAlgebra::block_diagonal(const std::vector<int>& sizes, double tol) {
  int n = 0;
  for (int k : sizes) {
    if (k < 1) throw ValidationError("StarAlgebra::block_diagonal: block sizes must be >= 1");
    n += k;
  }
  std::vector<Matrix> basis;
  int offset = 0;
  for (int k : sizes) {
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < k; ++i) {
        Matrix e = Matrix::Zero(n, n);
        e(offset + i, offset + j) = 1.0;
        basis.push_back(std::move(e));
      }
    offset += k;
  }
  return StarAlgebra(n, std::move(basis), tol);
}

StarAlgebra generate_algebra(std::span<const Matrix> generators, double tol, int ambient_dim) {
  if (!(tol > 0.0)) throw ValidationError("generate_algebra: tol must be positive");
  int n = -1;
  for (const Matrix& g : generators) {
    require_square(g, "generate_algebra");
    require_finite(g, "generate_algebra");
    if (n < 0) n = static_cast<int>(g.rows());
    if (g.rows() != n) throw ValidationError("generate_algebra: generators have different dimensions");
  }
  if (n < 0) n = ambient_dim;
  if (n < 1) throw ValidationError("generate_algebra: ambient dimension must be >= 1");

  std::vector<Matrix> basis;
  absorb(basis, Matrix::Identity(n, n), tol);
  for (const Matrix& g : generators) {
    absorb(basis, g, tol);
    absorb(basis, g.adjoint(), tol);
  }

  std::size_t done = 0;  // pairs (i, j) with i, j < done have been multiplied
  const int max_rounds = n * n;
  int round = 0;
  while (done < basis.size()) {
    if (++round > max_rounds)
      throw NumericalError("generate_algebra: closure not reached within n^2 rounds");
    const std::size_t current = basis.size();
    for (std::size_t i = 0; i < current; ++i)
      for (std::size_t j = (i < done ? done : 0); j < current; ++j) {
        absorb(basis, basis[i] * basis[j], tol, 1.0);
        absorb(basis, basis[j] * basis[i], tol, 1.0);
      }
    for (std::size_t i = done; i < current; ++i) absorb(basis, Matrix(basis[i].adjoint()), tol);
    done = current;
  }
  // The basis is orthonormal only up to rounding of the Gram-Schmidt passes;
  // validate against a tolerance no tighter than what those passes deliver.
  return StarAlgebra(n, std::move(basis), std::max(tol, 1e-10));
}

double containment_residual(const StarAlgebra& a, const StarAlgebra& b) {
  if (a.ambient_dim() != b.ambient_dim()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const Matrix& x : a.basis()) worst = std::max(worst, b.projection_residual(x));
  return worst;
}

double span_distance(const StarAlgebra& a, const StarAlgebra& b) {
  return std::max(containment_residual(a, b), containment_residual(b, a));
}

StarAlgebra commutant(const StarAlgebra& alg) {
  const int n = alg.ambient_dim();
  const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
  const Matrix id = Matrix::Identity(n, n);
  // vec(X B - B X) = (B^T (x) I - I (x) B) vec(X)
  Matrix stacked(n2 * alg.size(), n2);
  for (int k = 0; k < alg.size(); ++k) {
    const Matrix& b = alg.basis()[static_cast<std::size_t>(k)];
    Matrix block = Matrix::Zero(n2, n2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        // Kronecker entries: (B^T (x) I)(i*n + r, j*n + c) = B(j, i) delta(r, c)
        block.block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(j) * n, n, n) +=
            b(j, i) * id;
        if (i == j)
          block.block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(j) * n, n, n) -= b;
      }
    stacked.middleRows(n2 * k, n2) = block;
  }
  // Basis elements have unit HS norm, so the map has scale ~1 even when it vanishes.
  const NullSpace ns = null_space(stacked, std::max(alg.tol(), 1e-12), 1.0);
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(ns.basis.cols()));
  for (Eigen::Index c = 0; c < ns.basis.cols(); ++c) basis.push_back(unvec(ns.basis.col(c), n));
  return StarAlgebra(n, std::move(basis), std::max(alg.tol(), 1e-10));
}

StarAlgebra center(const StarAlgebra& alg) {
  const StarAlgebra comm = commutant(alg);
  const Matrix qa = alg.vectorized_basis();
  const Matrix qc = comm.vectorized_basis();
  // Principal vectors with cosine 1 span the intersection.
  Eigen::JacobiSVD<Matrix> svd(qa.adjoint() * qc, Eigen::ComputeFullU);
  const double cutoff = 1.0 - std::max(alg.tol(), 1e-10);
  std::vector<Matrix> basis;
  const int n = alg.ambient_dim();
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    if (svd.singularValues()(k) < cutoff) break;
    Vector v = qa * svd.matrixU().col(k);
    basis.push_back(unvec(v / v.norm(), n));
  }
  return StarAlgebra(n, std::move(basis), std::max(alg.tol(), 1e-10));
}

StructureConstants structure_constants(const StarAlgebra& alg) {
  StructureConstants sc;
  const int m = alg.size();
  const Matrix q = alg.vectorized_basis();
  sc.left.assign(static_cast<std::size_t>(m), Matrix(m, m));
  for (int a = 0; a < m; ++a)
    for (int j = 0; j < m; ++j) {
      const Matrix prod = alg.basis()[static_cast<std::size_t>(a)] * alg.basis()[static_cast<std::size_t>(j)];
      const Vector v = Eigen::Map<const Vector>(prod.data(), prod.size());
      const Vector coeff = q.adjoint() * v;
      sc.left[static_cast<std::size_t>(a)].col(j) = coeff;
      sc.projection_residual = std::max(sc.projection_residual, (v - q * coeff).norm());
    }
  return sc;
}

Matrix random_element(const StarAlgebra& alg, Rng& rng) {
  const Matrix c = random_gaussian(rng, alg.size(), 1);
  Matrix x = alg.element(c.col(0));
  return x / x.norm();
}

Matrix random_hermitian_element(const StarAlgebra& alg, Rng& rng) {
  Matrix x = random_element(alg, rng);
  Matrix h = (x + x.adjoint()) * 0.5;
  const double nrm = h.norm();
  // x anti-hermitian up to rounding is a measure-zero event; fall back to i*x.
  if (nrm < 1e-12) h = (Complex(0, 1) * x + (Complex(0, 1) * x).adjoint()) * 0.5;
  return h / h.norm();
}

bool CStarLawReport::all_below(double threshold) const {
  return std::all_of(max_residual.begin(), max_residual.end(),
                     [&](const auto& kv) { return kv.second < threshold; });
}

CStarLawReport verify_cstar_laws(const StarAlgebra& alg, int samples, std::uint64_t seed) {
  CStarLawReport report;
  report.samples = std::max(samples, 0);
  report.seed = seed;
  if (samples <= 0) return report;
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  auto bump = [&](const char* law, double r) {
    double& slot = report.max_residual[law];
    slot = std::max(slot, r);
  };
  for (int s = 0; s < samples; ++s) {
    const Matrix a = random_element(alg, rng);
    const Matrix b = random_element(alg, rng);
    const Matrix hb = random_hermitian_element(alg, rng);
    const Matrix hc = random_hermitian_element(alg, rng);
    const Complex lambda(unit(rng), unit(rng));
    const double na = operator_norm(a);
    const double nb = operator_norm(b);
    bump("triangle", std::max(0.0, operator_norm(a + b) - na - nb));
    bump("homogeneity", std::abs(operator_norm(lambda * a) - std::abs(lambda) * na));
    bump("submultiplicative", std::max(0.0, operator_norm(a * b) - na * nb));
    const double nhb = operator_norm(hb);
    bump("hermitian_square", std::abs(operator_norm(hb * hb) - nhb * nhb));
    bump("cstar", std::abs(operator_norm(a.adjoint() * a) - na * na));
    bump("square_order", std::max(0.0, operator_norm(hb * hb) - operator_norm(hb * hb + hc * hc)));
    bump("adjoint_isometry", std::abs(operator_norm(a.adjoint()) - na));
  }
  return report;
}

}  // namespace opalg
