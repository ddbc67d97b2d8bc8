#include "opalg/gns.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace opalg {

GnsTriple gns_construct(const StarAlgebra& alg, const State& s, double tol) {
  if (s.dim() != alg.ambient_dim()) throw ValidationError("gns_construct: state/algebra dimension mismatch");
  if (!(tol > 0.0)) throw ValidationError("gns_construct: tol must be positive");
  const int m = alg.size();
  const auto& basis = alg.basis();

  // Gram matrix of the pre-inner product (A, B) = w(A* B) on the algebra.
  Matrix gram(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      gram(i, j) = expectation(s, basis[static_cast<std::size_t>(i)].adjoint() * basis[static_cast<std::size_t>(j)]);
  gram = (gram + gram.adjoint()) * 0.5;

  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const double lmax = lambda.maxCoeff();
  if (lambda.minCoeff() < -tol * std::max(1.0, lmax))
    throw ValidationError("gns_construct: Gram matrix has a negative eigenvalue (invalid state)");

  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = lambda.size() - 1; k >= 0; --k)
    if (lambda(k) > tol * lmax) kept.push_back(k);

  GnsTriple t;
  t.tol = tol;
  t.space_dim = static_cast<int>(kept.size());
  t.embedding.resize(t.space_dim, m);
  for (int r = 0; r < t.space_dim; ++r) {
    const Eigen::Index k = kept[static_cast<std::size_t>(r)];
    t.embedding.row(r) = es.eigenvectors().col(k).transpose() / std::sqrt(lambda(k));
  }

  const StructureConstants sc = structure_constants(alg);
  t.structure_residual = sc.projection_residual;
  const Matrix left_factor = t.embedding.conjugate() * gram;  // <e_r, [B_c]>
  const Matrix right_factor = t.embedding.transpose();
  t.rep.reserve(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) t.rep.push_back(left_factor * sc.left[static_cast<std::size_t>(a)] * right_factor);

  Vector w_adj(m);  // w(B_i^*) = <[B_i], [I]>
  for (int i = 0; i < m; ++i) w_adj(i) = std::conj(expectation(s, basis[static_cast<std::size_t>(i)]));
  t.cyclic_vector = t.embedding.conjugate() * w_adj;
  return t;
}

Matrix represent(const GnsTriple& t, const StarAlgebra& alg, const Matrix& x) {
  if (static_cast<int>(t.rep.size()) != alg.size()) throw ValidationError("represent: shape mismatch");
  const Vector c = alg.coordinates(x);
  Matrix out = Matrix::Zero(t.space_dim, t.space_dim);
  for (int k = 0; k < alg.size(); ++k) out += c(k) * t.rep[static_cast<std::size_t>(k)];
  return out;
}

double RepresentationReport::max_residual() const {
  return std::max({linearity, multiplicativity, star, expectation, cyclic_norm_defect});
}

RepresentationReport verify_representation(const GnsTriple& t, const StarAlgebra& alg,
                                           const std::optional<State>& s) {
  if (static_cast<int>(t.rep.size()) != alg.size())
    throw ValidationError("verify_representation: representation does not match algebra basis");
  const int m = alg.size();
  const int d = t.space_dim;
  for (const Matrix& r : t.rep)
    if (r.rows() != d || r.cols() != d) throw ValidationError("verify_representation: bad rep shape");
  if (t.cyclic_vector.size() != d) throw ValidationError("verify_representation: bad cyclic vector");

  RepresentationReport report;
  report.space_dim = d;
  const auto sc = structure_constants(alg);
  const auto& basis = alg.basis();

  report.linearity = (represent(t, alg, Matrix::Identity(alg.ambient_dim(), alg.ambient_dim())) -
                      Matrix::Identity(d, d))
                         .norm();
  for (int a = 0; a < m; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    for (int b = 0; b < m; ++b) {
      Matrix expected = Matrix::Zero(d, d);
      for (int c = 0; c < m; ++c) expected += sc.left[ua](c, b) * t.rep[static_cast<std::size_t>(c)];
      report.multiplicativity =
          std::max(report.multiplicativity, (t.rep[ua] * t.rep[static_cast<std::size_t>(b)] - expected).norm());
    }
    const Matrix adj = represent(t, alg, basis[ua].adjoint());
    report.star = std::max(report.star, (t.rep[ua].adjoint() - adj).norm());
  }

  Matrix orbit(d, m);
  for (int k = 0; k < m; ++k) orbit.col(k) = t.rep[static_cast<std::size_t>(k)] * t.cyclic_vector;
  if (d > 0) {
    Eigen::JacobiSVD<Matrix> svd(orbit);
    const auto& sv = svd.singularValues();
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv(k) > 1e-8 * sv(0)) ++report.cyclicity_rank;
  }
  report.cyclic_norm_defect = std::abs(t.cyclic_vector.norm() - 1.0);

  if (s) {
    for (int k = 0; k < m; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      const Complex direct = expectation(*s, basis[uk]);
      const Complex rebuilt = t.cyclic_vector.dot(t.rep[uk] * t.cyclic_vector);
      report.expectation = std::max(report.expectation, std::abs(direct - rebuilt));
    }
  }
  return report;
}

DirectSumRepresentation gns_direct_sum(const StarAlgebra& alg, std::span<const State> states,
                                       double tol) {
  if (states.empty()) throw ValidationError("gns_direct_sum: empty state family");
  for (const State& s : states)
    if (s.dim() != alg.ambient_dim()) throw ValidationError("gns_direct_sum: dimension mismatch");

  std::vector<GnsTriple> parts;
  parts.reserve(states.size());
  for (const State& s : states) parts.push_back(gns_construct(alg, s, tol));

  DirectSumRepresentation out;
  for (const GnsTriple& p : parts) {
    out.offsets.push_back(out.space_dim);
    out.summand_dims.push_back(p.space_dim);
    out.space_dim += p.space_dim;
  }
  const int d = out.space_dim;
  const int m = alg.size();
  out.rep.assign(static_cast<std::size_t>(m), Matrix::Zero(d, d));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const int off = out.offsets[i];
    const int di = parts[i].space_dim;
    for (int k = 0; k < m; ++k)
      out.rep[static_cast<std::size_t>(k)].block(off, off, di, di) = parts[i].rep[static_cast<std::size_t>(k)];
    Vector psi = Vector::Zero(d);
    psi.segment(off, di) = parts[i].cyclic_vector;
    out.cyclic_vectors.push_back(std::move(psi));
  }

  out.separating = separates(states, alg);
  for (int k = 0; k < m; ++k) {
    const double original = operator_norm(alg.basis()[static_cast<std::size_t>(k)]);
    const double represented = d > 0 ? operator_norm(out.rep[static_cast<std::size_t>(k)]) : 0.0;
    out.max_norm_deficit = std::max(out.max_norm_deficit, std::abs(original - represented));
  }
  out.norm_preserving = out.max_norm_deficit <= 10.0 * tol;
  return out;
}

}  // namespace opalg
