#include "opalg/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace opalg {

namespace {

Matrix matrix_power(const Matrix& m, int k) {
  Matrix result = Matrix::Identity(m.rows(), m.cols());
  Matrix base = m;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

double unitarity_residual(const Matrix& u) {
  return operator_norm(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

Complex root_of_unity(int n) { return std::polar(1.0, 2.0 * std::numbers::pi / n); }

struct EigenCluster {
  Complex value;
  std::vector<Eigen::Index> columns;
};

// Schur vectors of a normal matrix grouped by (numerically) equal eigenvalues.
std::vector<EigenCluster> cluster_eigenvalues(const Eigen::ComplexSchur<Matrix>& schur, double ctol) {
  std::vector<EigenCluster> clusters;
  const Matrix& t = schur.matrixT();
  for (Eigen::Index k = 0; k < t.rows(); ++k) {
    const Complex lambda = t(k, k);
    auto it = std::find_if(clusters.begin(), clusters.end(),
                           [&](const EigenCluster& c) { return std::abs(c.value - lambda) < ctol; });
    if (it == clusters.end()) {
      clusters.push_back({lambda, {k}});
    } else {
      it->columns.push_back(k);
    }
  }
  return clusters;
}

Eigen::VectorXd normalized(const Eigen::VectorXd& sv) {
  if (sv.size() == 0 || sv(0) == 0.0) return sv;
  return sv / sv(0);
}

double second_smallest(const Eigen::VectorXd& sv) {
  return sv.size() >= 2 ? sv(sv.size() - 2) : 0.0;
}

void fix_phase(Matrix& w) {
  const double scale = w.col(0).cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    const Complex z = w(i, 0);
    if (std::abs(z) > 1e-8 * scale) {
      w *= std::conj(z) / std::abs(z);
      return;
    }
  }
}

}  // namespace

DiscreteWeylSystem::DiscreteWeylSystem(int modulus_in, Matrix u_in, Matrix v_in, double tol)
    : modulus(modulus_in), u(std::move(u_in)), v(std::move(v_in)), phase(root_of_unity(std::max(modulus_in, 1))) {
  if (modulus < 2) throw ValidationError("DiscreteWeylSystem: modulus must be >= 2");
  if (u.rows() != modulus || u.cols() != modulus || v.rows() != modulus || v.cols() != modulus)
    throw ValidationError("DiscreteWeylSystem: U and V must be n x n");
  require_finite(u, "DiscreteWeylSystem");
  require_finite(v, "DiscreteWeylSystem");
  const WeylRelationReport r = verify_weyl_relations(modulus, u, v);
  if (r.u_unitarity > tol || r.v_unitarity > tol) throw ValidationError("DiscreteWeylSystem: U or V not unitary");
  if (r.u_power > tol || r.v_power > tol) throw ValidationError("DiscreteWeylSystem: U^n or V^n differs from I");
  if (r.exchange > tol) throw ValidationError("DiscreteWeylSystem: U V != eps V U");
}

DiscreteWeylSystem schrodinger_system(int n) {
  if (n < 2) throw ValidationError("schrodinger_system: n must be >= 2");
  Matrix u = Matrix::Zero(n, n);
  Matrix v = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    u(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
    v((k + 1) % n, k) = 1.0;  // (V psi)_k = psi_{k-1}
  }
  // n = 2 must give exactly the Pauli pair.
  if (n == 2) u(1, 1) = -1.0;
  return DiscreteWeylSystem(n, std::move(u), std::move(v));
}

DiscreteWeylSystem conjugated_system(const DiscreteWeylSystem& base, const Matrix& g, double tol) {
  if (g.rows() != base.modulus || g.cols() != base.modulus)
    throw ValidationError("conjugated_system: g has the wrong size");
  if (unitarity_residual(g) > tol) throw ValidationError("conjugated_system: g is not unitary");
  return DiscreteWeylSystem(base.modulus, g * base.u * g.adjoint(), g * base.v * g.adjoint(), tol);
}

Matrix fourier_matrix(int n) {
  Matrix f(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), 2.0 * std::numbers::pi * ((j * k) % n) / n);
  return f;
}

IntertwinerResult find_intertwiner(const DiscreteWeylSystem& r1, const DiscreteWeylSystem& r2, double tol) {
  if (r1.modulus != r2.modulus) throw ValidationError("find_intertwiner: modulus mismatch");
  const int n = r1.modulus;
  Eigen::ComplexSchur<Matrix> s1(r1.u), s2(r2.u);
  // Eigenvalues of U are n-th roots of unity, separated by 2 sin(pi/n).
  const double ctol = 1e-6;
  const auto c1 = cluster_eigenvalues(s1, ctol);
  const auto c2 = cluster_eigenvalues(s2, ctol);

  // W U1 = U2 W forces W to map each eigenspace of U1 into the matching one of U2.
  std::vector<Matrix> unknowns;
  for (const auto& a : c1) {
    auto it = std::find_if(c2.begin(), c2.end(), [&](const EigenCluster& b) { return std::abs(a.value - b.value) < ctol; });
    if (it == c2.end()) continue;
    for (Eigen::Index f : it->columns)
      for (Eigen::Index e : a.columns) unknowns.push_back(s2.matrixU().col(f) * s1.matrixU().col(e).adjoint());
  }
  if (unknowns.empty()) throw ValidationError("find_intertwiner: U spectra do not match (inequivalent systems)");

  const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
  Matrix stacked(n2, static_cast<Eigen::Index>(unknowns.size()));
  for (std::size_t t = 0; t < unknowns.size(); ++t) {
    const Matrix img = unknowns[t] * r1.v - r2.v * unknowns[t];
    stacked.col(static_cast<Eigen::Index>(t)) = Eigen::Map<const Vector>(img.data(), img.size());
  }
  const NullSpace ns = null_space(stacked, tol);

  IntertwinerResult out;
  out.nullity = static_cast<int>(ns.basis.cols());
  out.singular_values = normalized(ns.singular_values);
  if (static_cast<Eigen::Index>(unknowns.size()) > ns.singular_values.size()) {
    // Wide systems have implicit zero singular values.
    Eigen::VectorXd padded = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns.size()));
    padded.head(out.singular_values.size()) = out.singular_values;
    out.singular_values = padded;
  }
  out.gap = second_smallest(out.singular_values);
  if (out.nullity == 0) throw ValidationError("find_intertwiner: no intertwiner (inequivalent or invalid systems)");
  if (out.nullity >= 2) throw ValidationError("find_intertwiner: intertwiner space has dimension " +
                                              std::to_string(out.nullity) + " (reducible systems)");

  Matrix w = Matrix::Zero(n, n);
  for (std::size_t t = 0; t < unknowns.size(); ++t) w += ns.basis(static_cast<Eigen::Index>(t), 0) * unknowns[t];
  w /= std::sqrt(w.squaredNorm() / n);
  fix_phase(w);
  out.w = w;
  out.u_residual = operator_norm(w * r1.u - r2.u * w);
  out.v_residual = operator_norm(w * r1.v - r2.v * w);
  out.unitarity_residual = unitarity_residual(w);
  if (std::max({out.u_residual, out.v_residual, out.unitarity_residual}) >= tol)
    throw NumericalError("find_intertwiner: residual above tolerance");
  return out;
}

IntertwinerResult find_intertwiner(std::span<const Matrix> from, std::span<const Matrix> to, double tol,
                                   std::uint64_t seed) {
  if (from.size() != to.size() || from.empty())
    throw ValidationError("find_intertwiner: generator lists must be nonempty and of equal length");
  const Eigen::Index d1 = from.front().rows();
  const Eigen::Index d2 = to.front().rows();
  if (d1 != d2) throw ValidationError("find_intertwiner: representation dimensions differ");
  for (std::size_t k = 0; k < from.size(); ++k) {
    require_square(from[k], "find_intertwiner");
    require_square(to[k], "find_intertwiner");
    if (from[k].rows() != d1 || to[k].rows() != d2) throw ValidationError("find_intertwiner: inconsistent shapes");
  }
  const Eigen::Index d = d1;
  const Eigen::Index dd = d * d;
  const Matrix id = Matrix::Identity(d, d);
  // vec(W A - B W) = (A^T (x) I - I (x) B) vec(W)
  Matrix stacked = Matrix::Zero(dd * static_cast<Eigen::Index>(from.size()), dd);
  for (std::size_t k = 0; k < from.size(); ++k) {
    auto block = stacked.middleRows(dd * static_cast<Eigen::Index>(k), dd);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        block.block(i * d, j * d, d, d) += from[k](j, i) * id;
        if (i == j) block.block(i * d, j * d, d, d) -= to[k];
      }
  }
  double scale = 0.0;
  for (std::size_t k = 0; k < from.size(); ++k) scale = std::max({scale, operator_norm(from[k]), operator_norm(to[k])});
  const NullSpace ns = null_space(stacked, tol, scale);
  IntertwinerResult out;
  out.nullity = static_cast<int>(ns.basis.cols());
  out.singular_values = normalized(ns.singular_values);
  out.gap = second_smallest(out.singular_values);
  if (out.nullity == 0) throw ValidationError("find_intertwiner: no intertwiner exists");

  Rng rng(seed);
  const Vector coeff = random_gaussian(rng, out.nullity, 1).col(0);
  const Vector wv = ns.basis * coeff;
  const Matrix w0 = Eigen::Map<const Matrix>(wv.data(), d, d);
  Eigen::JacobiSVD<Matrix> svd(w0, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-8 * sv(0))
    throw NumericalError("find_intertwiner: intertwiner is singular (inequivalent representations)");
  Matrix w = svd.matrixU() * svd.matrixV().adjoint();
  fix_phase(w);
  out.w = w;
  for (std::size_t k = 0; k < from.size(); ++k)
    out.u_residual = std::max(out.u_residual, operator_norm(w * from[k] - to[k] * w));
  out.unitarity_residual = unitarity_residual(w);
  return out;
}

double WeylRelationReport::max_residual() const {
  return std::max({u_power, v_power, exchange, u_unitarity, v_unitarity, group_law});
}

WeylRelationReport verify_weyl_relations(int modulus, const Matrix& u, const Matrix& v) {
  if (modulus < 2) throw ValidationError("verify_weyl_relations: modulus must be >= 2");
  require_square(u, "verify_weyl_relations");
  require_same_dim(u, v, "verify_weyl_relations");
  if (u.rows() != modulus) throw ValidationError("verify_weyl_relations: size differs from modulus");
  const Matrix id = Matrix::Identity(modulus, modulus);
  WeylRelationReport r;
  r.u_unitarity = unitarity_residual(u);
  r.v_unitarity = unitarity_residual(v);
  r.u_power = operator_norm(matrix_power(u, modulus) - id);
  r.v_power = operator_norm(matrix_power(v, modulus) - id);
  r.exchange = operator_norm(u * v - root_of_unity(modulus) * v * u);
  std::vector<Matrix> upow{id}, vpow{id};
  for (int k = 1; k < modulus; ++k) {
    upow.push_back(upow.back() * u);
    vpow.push_back(vpow.back() * v);
  }
  // Sample exponent pairs; all pairs for small moduli.
  const int stride = std::max(1, modulus / 8);
  for (int a = 0; a < modulus; a += stride)
    for (int b = 0; b < modulus; b += stride) {
      const auto ab = static_cast<std::size_t>((a + b) % modulus);
      r.group_law = std::max(r.group_law, (upow[static_cast<std::size_t>(a)] * upow[static_cast<std::size_t>(b)] - upow[ab]).norm());
      r.group_law = std::max(r.group_law, (vpow[static_cast<std::size_t>(a)] * vpow[static_cast<std::size_t>(b)] - vpow[ab]).norm());
    }
  return r;
}

WeylRelationReport verify_weyl_relations(const DiscreteWeylSystem& sys) {
  return verify_weyl_relations(sys.modulus, sys.u, sys.v);
}

double phase_distance(const Matrix& w, const Matrix& g) {
  require_same_dim(w, g, "phase_distance");
  const Complex overlap = hs_inner(g, w);
  const Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1.0);
  return operator_norm(w - phase * g);
}

}  // namespace opalg
