#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opalg/matrix.hpp"
#include "opalg/matrix_algebra.hpp"

namespace opalg {

enum class SectorKind { isotypic, irreducible };

std::string to_string(SectorKind kind);
SectorKind sector_kind_from_string(const std::string& name);

/// Invariant-subspace decomposition of C^n under an algebra. Columns
/// [offset, offset + size) of basis_change span one block.
struct SectorDecomposition {
  Matrix basis_change;
  std::vector<std::pair<int, int>> blocks;  // (offset, size), sorted by offset
  SectorKind kind = SectorKind::irreducible;

  Matrix block_basis(std::size_t block) const;
};

/// Isotypic: split by eigenspaces of a random hermitian central element.
/// Irreducible: split by eigenspaces of a random hermitian commutant element.
/// Both recurse inside each block until no further splitting occurs.
SectorDecomposition decompose(const StarAlgebra& alg, SectorKind kind, std::uint64_t seed);

/// Largest off-block Frobenius mass of V* B V over the algebra basis.
double off_block_residual(const SectorDecomposition& dec, const StarAlgebra& alg);

bool is_superselected(const Matrix& charge, const StarAlgebra& alg, double tol = 1e-10);

struct PhaseReport {
  /// Largest spread over the phases of <psi(phi), B psi(phi)>, over basis elements.
  double variation = 0.0;
  /// Largest distance from the incoherent mixture |c1|^2 <psi1,B psi1> + |c2|^2 <psi2,B psi2>.
  double mixture_deviation = 0.0;
};

/// Expectations of psi(phi) = c1 psi1 + c2 e^{i phi} psi2 for arbitrary observables,
/// with no sector bookkeeping.
PhaseReport phase_scan(std::span<const Matrix> observables, const Vector& psi1, const Vector& psi2,
                       Complex c1, Complex c2, std::span<const double> phases);

/// phase_scan over the algebra basis after checking that psi1 and psi2 are
/// supported in the two (distinct) designated blocks.
PhaseReport phase_observability(const StarAlgebra& alg, const SectorDecomposition& dec,
                                std::size_t block1, std::size_t block2, const Vector& psi1,
                                const Vector& psi2, Complex c1, Complex c2,
                                std::span<const double> phases, double tol = 1e-10);

}  // namespace opalg
