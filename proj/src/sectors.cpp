#include "opalg/sectors.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace opalg {

std::string to_string(SectorKind kind) {
  return kind == SectorKind::isotypic ? "isotypic" : "irreducible";
}

SectorKind sector_kind_from_string(const std::string& name) {
  if (name == "isotypic") return SectorKind::isotypic;
  if (name == "irreducible") return SectorKind::irreducible;
  throw ValidationError("unknown sector kind '" + name + "' (expected isotypic|irreducible)");
}

Matrix SectorDecomposition::block_basis(std::size_t block) const {
  if (block >= blocks.size()) throw ValidationError("SectorDecomposition: block index out of range");
  return basis_change.middleCols(blocks[block].first, blocks[block].second);
}

namespace {

void split(const StarAlgebra& alg, const Matrix& cols, SectorKind kind, Rng& rng, int depth,
           std::vector<Matrix>& out) {
  const auto k = static_cast<int>(cols.cols());
  if (k <= 1 || depth > alg.ambient_dim()) {
    out.push_back(cols);
    return;
  }
  std::vector<Matrix> compressed;
  compressed.reserve(alg.basis().size());
  for (const Matrix& b : alg.basis()) compressed.push_back(cols.adjoint() * b * cols);
  const StarAlgebra local = generate_algebra(compressed, 1e-10);
  const StarAlgebra splitter = kind == SectorKind::isotypic ? center(local) : commutant(local);
  if (splitter.size() <= 1) {
    out.push_back(cols);
    return;
  }
  const Matrix h = random_hermitian_element(splitter, rng);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const double range = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
  if (range < 1e-12) {
    out.push_back(cols);
    return;
  }
  const auto clusters = spectral_clusters(h, 1e-8 * range);
  if (clusters.size() <= 1) {
    out.push_back(cols);
    return;
  }
  for (const auto& c : clusters) split(alg, cols * c.vectors, kind, rng, depth + 1, out);
}

int leading_row(const Matrix& cols) {
  for (Eigen::Index i = 0; i < cols.rows(); ++i)
    if (cols.row(i).squaredNorm() > 1e-8) return static_cast<int>(i);
  return static_cast<int>(cols.rows());
}

}  // namespace

SectorDecomposition decompose(const StarAlgebra& alg, SectorKind kind, std::uint64_t seed) {
  const int n = alg.ambient_dim();
  Rng rng(seed);
  std::vector<Matrix> pieces;
  split(alg, Matrix::Identity(n, n), kind, rng, 0, pieces);

  // Deterministic block order: by first row carrying weight, larger blocks first on ties.
  std::stable_sort(pieces.begin(), pieces.end(), [](const Matrix& a, const Matrix& b) {
    return std::make_tuple(leading_row(a), -a.cols()) < std::make_tuple(leading_row(b), -b.cols());
  });

  SectorDecomposition dec;
  dec.kind = kind;
  dec.basis_change.resize(n, n);
  int offset = 0;
  for (const Matrix& p : pieces) {
    const auto size = static_cast<int>(p.cols());
    dec.basis_change.middleCols(offset, size) = p;
    dec.blocks.emplace_back(offset, size);
    offset += size;
  }
  if (offset != n) throw NumericalError("decompose: blocks do not cover the space");
  return dec;
}

double off_block_residual(const SectorDecomposition& dec, const StarAlgebra& alg) {
  double worst = 0.0;
  for (const Matrix& b : alg.basis()) {
    Matrix conj = dec.basis_change.adjoint() * b * dec.basis_change;
    for (const auto& [off, size] : dec.blocks) conj.block(off, off, size, size).setZero();
    worst = std::max(worst, conj.norm());
  }
  return worst;
}

bool is_superselected(const Matrix& charge, const StarAlgebra& alg, double tol) {
  require_square(charge, "is_superselected");
  if (charge.rows() != alg.ambient_dim()) throw ValidationError("is_superselected: dimension mismatch");
  double worst = 0.0;
  for (const Matrix& b : alg.basis()) worst = std::max(worst, operator_norm(commutator(charge, b)));
  return worst < tol;
}

PhaseReport phase_scan(std::span<const Matrix> observables, const Vector& psi1, const Vector& psi2,
                       Complex c1, Complex c2, std::span<const double> phases) {
  if (psi1.size() != psi2.size()) throw ValidationError("phase_scan: vector dimension mismatch");
  PhaseReport report;
  std::vector<Complex> values(phases.size());
  for (const Matrix& b : observables) {
    if (b.rows() != psi1.size() || b.cols() != psi1.size())
      throw ValidationError("phase_scan: observable dimension mismatch");
    const Complex mixture = std::norm(c1) * psi1.dot(b * psi1) + std::norm(c2) * psi2.dot(b * psi2);
    for (std::size_t k = 0; k < phases.size(); ++k) {
      const Vector psi = c1 * psi1 + c2 * std::polar(1.0, phases[k]) * psi2;
      values[k] = psi.dot(b * psi);
      report.mixture_deviation = std::max(report.mixture_deviation, std::abs(values[k] - mixture));
    }
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = i + 1; j < values.size(); ++j)
        report.variation = std::max(report.variation, std::abs(values[i] - values[j]));
  }
  return report;
}

PhaseReport phase_observability(const StarAlgebra& alg, const SectorDecomposition& dec,
                                std::size_t block1, std::size_t block2, const Vector& psi1,
                                const Vector& psi2, Complex c1, Complex c2,
                                std::span<const double> phases, double tol) {
  if (block1 == block2) throw ValidationError("phase_observability: blocks must be distinct");
  if (block1 >= dec.blocks.size() || block2 >= dec.blocks.size())
    throw ValidationError("phase_observability: block index out of range");
  if (std::abs(std::norm(c1) + std::norm(c2) - 1.0) > tol)
    throw ValidationError("phase_observability: |c1|^2 + |c2|^2 must equal 1");
  const int n = alg.ambient_dim();
  if (psi1.size() != n || psi2.size() != n) throw ValidationError("phase_observability: vector dimension mismatch");
  auto check_support = [&](const Vector& psi, std::size_t block, const char* name) {
    if (std::abs(psi.norm() - 1.0) > 1e-8)
      throw ValidationError(std::string("phase_observability: ") + name + " is not a unit vector");
    const Matrix v = dec.block_basis(block);
    if ((psi - v * (v.adjoint() * psi)).norm() > std::max(tol, 1e-12))
      throw ValidationError(std::string("phase_observability: ") + name +
                            " is not supported in its designated block");
  };
  check_support(psi1, block1, "psi1");
  check_support(psi2, block2, "psi2");
  return phase_scan(alg.basis(), psi1, psi2, c1, c2, phases);
}

}  // namespace opalg
