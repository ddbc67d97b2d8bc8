#pragma once

#include <optional>
#include <span>
#include <vector>

#include "opalg/matrix.hpp"
#include "opalg/matrix_algebra.hpp"
#include "opalg/states.hpp"

namespace opalg {

/// Concrete GNS data for (algebra, state): rep[k] represents basis element B_k
/// on a space of dimension space_dim, cyclic_vector is the class of the identity.
/// Row r of `embedding` holds the coefficients of the r-th orthonormal GNS
/// basis vector in terms of the algebra basis.
struct GnsTriple {
  int space_dim = 0;
  std::vector<Matrix> rep;
  Vector cyclic_vector;
  Matrix embedding;
  double tol = 1e-10;
  /// Residual of projecting basis products back onto the algebra span.
  double structure_residual = 0.0;
};

inline constexpr double kGnsTol = 1e-10;

/// GNS representation. The null ideal is cut at Gram eigenvalues
/// <= tol * lambda_max.
GnsTriple gns_construct(const StarAlgebra& alg, const State& s, double tol = kGnsTol);

/// Representation of an arbitrary element of the algebra's span.
Matrix represent(const GnsTriple& t, const StarAlgebra& alg, const Matrix& x);

/// Block-diagonal sum of the GNS representations of a family of states.
struct DirectSumRepresentation {
  int space_dim = 0;
  std::vector<Matrix> rep;
  /// One cyclic vector per summand, embedded in the full space.
  std::vector<Vector> cyclic_vectors;
  std::vector<int> offsets;
  std::vector<int> summand_dims;
  bool separating = false;
  /// Largest | ||rep(B_k)|| - ||B_k|| | over basis elements.
  double max_norm_deficit = 0.0;
  /// Norms preserved on every basis element within 10 * tol.
  bool norm_preserving = false;
};

DirectSumRepresentation gns_direct_sum(const StarAlgebra& alg, std::span<const State> states,
                                       double tol = kGnsTol);

struct RepresentationReport {
  double linearity = 0.0;
  double multiplicativity = 0.0;
  double star = 0.0;
  double expectation = 0.0;  // 0 when no state is supplied
  int cyclicity_rank = 0;
  int space_dim = 0;
  double cyclic_norm_defect = 0.0;

  double max_residual() const;
};

RepresentationReport verify_representation(const GnsTriple& t, const StarAlgebra& alg,
                                           const std::optional<State>& s = std::nullopt);

}  // namespace opalg
