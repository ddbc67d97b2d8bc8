#pragma once

// Helpers shared by the unit tests and the acceptance binary.

#include <numeric>
#include <random>
#include <vector>

#include "opalg/matrix.hpp"
#include "opalg/matrix_algebra.hpp"

namespace opalg::testing {

/// Random composition of n into block sizes.
inline std::vector<int> random_block_sizes(Rng& rng, int n) {
  std::vector<int> sizes;
  int left = n;
  while (left > 0) {
    std::uniform_int_distribution<int> pick(1, left);
    sizes.push_back(pick(rng));
    left -= sizes.back();
  }
  return sizes;
}

/// A block-diagonal algebra hidden by a random unitary, rebuilt from two
/// random elements so it goes through generate_algebra.
inline StarAlgebra random_generated_algebra(Rng& rng, int n) {
  const StarAlgebra blocks = StarAlgebra::block_diagonal(random_block_sizes(rng, n));
  const Matrix u = random_unitary(rng, n);
  std::vector<Matrix> gens;
  for (int k = 0; k < 2; ++k) gens.push_back(u * random_element(blocks, rng) * u.adjoint());
  return generate_algebra(gens, 1e-10, n);
}

inline StarAlgebra conjugate(const StarAlgebra& alg, const Matrix& u) {
  std::vector<Matrix> basis;
  for (const Matrix& b : alg.basis()) basis.push_back(u * b * u.adjoint());
  return StarAlgebra(alg.ambient_dim(), basis, alg.tol());
}

}  // namespace opalg::testing
