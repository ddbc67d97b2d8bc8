#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "opalg/gns.hpp"
#include "opalg/weyl.hpp"
#include "support.hpp"

using namespace opalg;

TEST_CASE("GNS of a pure state on M2 is the defining representation") {
  const StarAlgebra alg = StarAlgebra::full(2);
  const State s = State::pure(Vector::Unit(2, 0));
  const GnsTriple t = gns_construct(alg, s);
  CHECK(t.space_dim == 2);
  const RepresentationReport r = verify_representation(t, alg, s);
  CHECK(r.max_residual() < 1e-9);
  CHECK(r.cyclicity_rank == 2);
  // Oracle: a unitary W with W rep(B) = B W exists.
  const IntertwinerResult w = find_intertwiner(t.rep, alg.basis(), 1e-9, 1);
  CHECK(w.u_residual < 1e-8);
  CHECK(w.unitarity_residual < 1e-8);
}

TEST_CASE("GNS dimensions for tracial and multiplicative states") {
  CHECK(gns_construct(StarAlgebra::full(2), State::maximally_mixed(2)).space_dim == 4);
  const StarAlgebra diag = StarAlgebra::diagonal(2);
  const State first = State::pure(Vector::Unit(2, 0));
  const GnsTriple t = gns_construct(diag, first);
  CHECK(t.space_dim == 1);
  const RepresentationReport r = verify_representation(t, diag, first);
  CHECK(r.multiplicativity < 1e-14);
  // One-dimensional representation: rep(B) is the scalar w(B).
  for (std::size_t k = 0; k < diag.basis().size(); ++k)
    CHECK(std::abs(t.rep[k](0, 0) - expectation(first, diag.basis()[k])) < 1e-14);
}

TEST_CASE("pure and tracial dimensions on M_n") {
  Rng rng(1);
  for (int n = 2; n <= 4; ++n) {
    const StarAlgebra alg = StarAlgebra::full(n);
    CHECK(gns_construct(alg, State::pure(random_unit_vector(rng, n))).space_dim == n);
    CHECK(gns_construct(alg, State::maximally_mixed(n)).space_dim == n * n);
  }
}

TEST_CASE("GNS from random states on random algebras verifies") {
  Rng rng(2);
  for (int k = 0; k < 12; ++k) {
    const int n = 2 + k % 4;
    const StarAlgebra alg = testing::random_generated_algebra(rng, n);
    const State s(random_density(rng, n, 1 + k % n));
    const GnsTriple t = gns_construct(alg, s);
    const RepresentationReport r = verify_representation(t, alg, s);
    CHECK(r.expectation < 10 * kGnsTol);
    CHECK(r.linearity < 1e-9);
    CHECK(r.star < 1e-9);
    CHECK(r.multiplicativity < 1e-8);
    CHECK(r.cyclicity_rank == t.space_dim);
    CHECK(r.cyclic_norm_defect < 1e-9);
  }
}

TEST_CASE("perturbed representation is detected") {
  const StarAlgebra alg = StarAlgebra::full(2);
  const State s(Matrix::Identity(2, 2) * 0.5);
  GnsTriple t = gns_construct(alg, s);
  // Perturb a basis element that is not proportional to the identity.
  const auto& b = alg.basis();
  std::size_t idx = 0;
  while (idx < b.size() && (b[idx] - b[idx].trace() / 2.0 * Matrix::Identity(2, 2)).norm() < 1e-6) ++idx;
  REQUIRE(idx < b.size());
  t.rep[idx] += 0.1 * Matrix::Identity(t.space_dim, t.space_dim);
  CHECK(verify_representation(t, alg, s).multiplicativity >= 0.05);
}

TEST_CASE("GNS rejects mismatched input") {
  CHECK_THROWS_AS(gns_construct(StarAlgebra::full(3), State::maximally_mixed(2)), ValidationError);
}

TEST_CASE("GNS is unique up to unitary equivalence under basis permutation") {
  Rng rng(3);
  const int n = 3;
  const StarAlgebra alg = StarAlgebra::full(n);
  const State s(random_density(rng, n, 2));
  std::vector<std::size_t> perm(alg.basis().size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Matrix> permuted;
  for (std::size_t k : perm) permuted.push_back(alg.basis()[k]);
  const StarAlgebra alg2(n, permuted);

  const GnsTriple t1 = gns_construct(alg, s);
  const GnsTriple t2 = gns_construct(alg2, s);
  REQUIRE(t1.space_dim == t2.space_dim);
  std::vector<Matrix> to(perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) to[perm[j]] = t2.rep[j];
  const IntertwinerResult w = find_intertwiner(t1.rep, to, 1e-9, 5);
  CHECK(w.u_residual < 1e-8);
  CHECK(w.unitarity_residual < 1e-8);
}

TEST_CASE("direct sum examples") {
  Rng rng(4);
  const StarAlgebra full = StarAlgebra::full(3);
  const std::vector<State> faithful{State(random_density(rng, 3, 3))};
  const DirectSumRepresentation a = gns_direct_sum(full, faithful);
  CHECK(a.norm_preserving);
  CHECK(a.max_norm_deficit < 1e-9);

  const StarAlgebra diag = StarAlgebra::diagonal(2);
  const std::vector<State> eig{State::pure(Vector::Unit(2, 0)), State::pure(Vector::Unit(2, 1))};
  const DirectSumRepresentation b = gns_direct_sum(diag, eig);
  CHECK(b.space_dim == 2);
  CHECK(b.separating);
  CHECK(b.norm_preserving);
  CHECK(b.cyclic_vectors.size() == 2);

  // One pure state on M2: the direct sum is the defining representation, which
  // is isometric, while one functional cannot separate a 4-dim algebra.
  const std::vector<State> one{State::pure(Vector::Unit(2, 0))};
  const StarAlgebra m2 = StarAlgebra::full(2);
  const DirectSumRepresentation c = gns_direct_sum(m2, one);
  CHECK_FALSE(c.separating);
  CHECK(c.space_dim == 2);
  Matrix p1 = Matrix::Zero(2, 2);
  p1(1, 1) = 1;
  const GnsTriple t = gns_construct(m2, one.front());
  CHECK(operator_norm(represent(t, m2, p1)) == doctest::Approx(1.0));
  CHECK(c.max_norm_deficit < 1e-9);

  CHECK_THROWS_AS(gns_direct_sum(m2, std::vector<State>{}), ValidationError);
}

TEST_CASE("separating families give isometric direct sums") {
  Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    const int n = 2 + k % 3;
    const StarAlgebra alg = testing::random_generated_algebra(rng, n);
    std::vector<State> family;
    for (int j = 0; j < alg.size(); ++j) family.emplace_back(random_density(rng, n, 1));
    const DirectSumRepresentation d = gns_direct_sum(alg, family);
    REQUIRE(d.separating);
    CHECK(d.norm_preserving);
  }
}
