#pragma once

#include <cstdint>
#include <span>

#include "opalg/matrix.hpp"

namespace opalg {

/// Clock/shift pair on C^n with U V = e^{2 pi i / n} V U, the finite stand-in
/// for the exponentiated canonical pair.
struct DiscreteWeylSystem {
  int modulus = 0;
  Matrix u;
  Matrix v;
  Complex phase;

  /// Validates unitarity, U^n = V^n = I and the exchange relation within tol.
  DiscreteWeylSystem(int modulus, Matrix u, Matrix v, double tol = 1e-9);
};

DiscreteWeylSystem schrodinger_system(int n);

/// (g U g*, g V g*).
DiscreteWeylSystem conjugated_system(const DiscreteWeylSystem& base, const Matrix& g, double tol = 1e-9);

/// Finite Fourier matrix F(j, k) = e^{2 pi i jk / n} / sqrt(n).
Matrix fourier_matrix(int n);

struct IntertwinerResult {
  Matrix w;
  int nullity = 0;
  double u_residual = 0.0;  // ||W U1 - U2 W||
  double v_residual = 0.0;  // ||W V1 - V2 W||
  double unitarity_residual = 0.0;
  /// Singular values of the (reduced) stacked linear map, descending and
  /// normalized by the largest.
  Eigen::VectorXd singular_values;
  /// Second-smallest normalized singular value (the spectral gap above the null space).
  double gap = 0.0;
};

/// Unitary W with W U1 = U2 W and W V1 = V2 W. The first relation is solved
/// exactly by matching eigenspaces of U1 and U2; the second by a null-space
/// computation on the remaining unknowns. Requires a one-dimensional null
/// space (irreducible, equivalent inputs). The first nonzero entry of the
/// first column of W is made real and positive.
IntertwinerResult find_intertwiner(const DiscreteWeylSystem& r1, const DiscreteWeylSystem& r2, double tol = 1e-9);

/// Same task for arbitrary generator lists (W A_k = B_k W for all k) via the
/// dense stacked map. Reducible pairs are allowed: a seeded random element
/// of the intertwiner space is polar-decomposed into a unitary.
IntertwinerResult find_intertwiner(std::span<const Matrix> from, std::span<const Matrix> to,
                                   double tol = 1e-9, std::uint64_t seed = 0);

struct WeylRelationReport {
  double u_power = 0.0;      // ||U^n - I||
  double v_power = 0.0;      // ||V^n - I||
  double exchange = 0.0;     // ||U V - eps V U||
  double u_unitarity = 0.0;
  double v_unitarity = 0.0;
  double group_law = 0.0;    // max_{a,b} ||U^a U^b - U^{(a+b) mod n}|| (and the same for V)

  double max_residual() const;
};

/// Residuals only; accepts matrices that need not form a valid system.
WeylRelationReport verify_weyl_relations(int modulus, const Matrix& u, const Matrix& v);
WeylRelationReport verify_weyl_relations(const DiscreteWeylSystem& sys);

/// Distance min_theta ||W - e^{i theta} G|| (operator norm).
double phase_distance(const Matrix& w, const Matrix& g);

}  // namespace opalg
