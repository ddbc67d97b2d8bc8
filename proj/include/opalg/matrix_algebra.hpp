#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "opalg/matrix.hpp"

namespace opalg {

/// A unital *-closed subalgebra of M_n, held as a Hilbert-Schmidt orthonormal
/// basis. The constructor checks orthonormality, presence of the identity and
/// closure under adjoint and product, all within `tol`.
class StarAlgebra {
 public:
  StarAlgebra(int ambient_dim, std::vector<Matrix> basis, double tol = 1e-10);

  int ambient_dim() const { return ambient_dim_; }
  const std::vector<Matrix>& basis() const { return basis_; }
  int size() const { return static_cast<int>(basis_.size()); }
  double tol() const { return tol_; }

  /// Coefficients <B_k, x> of the orthogonal projection of x onto the span.
  Vector coordinates(const Matrix& x) const;
  Matrix element(const Vector& coefficients) const;
  /// Hilbert-Schmidt norm of x minus its projection onto the span.
  double projection_residual(const Matrix& x) const;

  /// Basis vectors stacked as columns of vec(B_k) (n^2 x size).
  Matrix vectorized_basis() const;

  static StarAlgebra full(int n, double tol = 1e-10);
  static StarAlgebra scalars(int n, double tol = 1e-10);
  static StarAlgebra diagonal(int n, double tol = 1e-10);
  /// Block-diagonal algebra M_{k1} (+) M_{k2} (+) ... embedded in dimension sum(k).
  static StarAlgebra block_diagonal(const std::vector<int>& sizes, double tol = 1e-10);

 private:
  int ambient_dim_;
  std::vector<Matrix> basis_;
  Matrix vec_basis_;
  double tol_;
};

/// Smallest unital *-algebra containing the generators. `ambient_dim` is only
/// consulted when the generator list is empty.
StarAlgebra generate_algebra(std::span<const Matrix> generators, double tol = 1e-10,
                             int ambient_dim = 1);

/// Maximal mutual projection residual of two spans (0 when equal).
double span_distance(const StarAlgebra& a, const StarAlgebra& b);
/// Largest projection residual of a's basis onto b's span (0 when a is contained in b).
double containment_residual(const StarAlgebra& a, const StarAlgebra& b);

StarAlgebra commutant(const StarAlgebra& alg);
StarAlgebra center(const StarAlgebra& alg);

/// Left-multiplication matrices: (L_a)(c, j) = <B_c, B_a B_j>.
struct StructureConstants {
  std::vector<Matrix> left;
  /// Largest residual of projecting a product B_a B_j back onto the span.
  double projection_residual = 0.0;
};
StructureConstants structure_constants(const StarAlgebra& alg);

struct CStarLawReport {
  int samples = 0;
  std::uint64_t seed = 0;
  std::string rng = kRngName;
  /// Law name -> maximal residual over the samples.
  std::map<std::string, double> max_residual;

  bool all_below(double threshold) const;
};

/// Checks the normed-algebra and C*-identities on pseudo-random elements of
/// the span: triangle inequality, homogeneity, submultiplicativity,
/// ||B^2|| = ||B||^2 for hermitian B, ||A*A|| = ||A||^2 and the order
/// inequality ||B^2|| <= ||B^2 + C^2|| for hermitian B, C.
CStarLawReport verify_cstar_laws(const StarAlgebra& alg, int samples, std::uint64_t seed);

/// Random element of the span with unit Hilbert-Schmidt norm.
Matrix random_element(const StarAlgebra& alg, Rng& rng);
Matrix random_hermitian_element(const StarAlgebra& alg, Rng& rng);

}  // namespace opalg
