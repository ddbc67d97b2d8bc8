#include <cmath>
#include <numbers>

#include "doctest.h"
#include "opalg/weyl.hpp"

using namespace opalg;

namespace {

// Singular values of the reduced constraint map are those of the cyclic
// difference operator w -> (w_{k+1} - w_k): 2|sin(pi j / n)|.
double analytic_gap(int n) {
  double largest = 0.0;
  for (int j = 0; j < n; ++j) largest = std::max(largest, std::abs(std::sin(std::numbers::pi * j / n)));
  return std::sin(std::numbers::pi / n) / largest;
}

}  // namespace

TEST_CASE("schrodinger system examples") {
  const DiscreteWeylSystem two = schrodinger_system(2);
  CHECK(two.u == pauli_z());
  CHECK(two.v == pauli_x());
  CHECK((two.u * two.v + two.v * two.u).norm() == 0.0);

  const DiscreteWeylSystem three = schrodinger_system(3);
  CHECK(operator_norm(three.u * three.v - three.phase * three.v * three.u) < 1e-14);

  CHECK_THROWS_AS(schrodinger_system(1), ValidationError);
}

TEST_CASE("conjugated systems") {
  const DiscreteWeylSystem base = schrodinger_system(4);
  const DiscreteWeylSystem same = conjugated_system(base, Matrix::Identity(4, 4));
  CHECK((same.u - base.u).norm() == 0.0);
  CHECK((same.v - base.v).norm() == 0.0);

  // F U F* is V or V^{-1}: record which by direct computation.
  const Matrix f = fourier_matrix(4);
  const Matrix fuf = f * base.u * f.adjoint();
  const double to_v = operator_norm(fuf - base.v);
  const double to_vinv = operator_norm(fuf - base.v.adjoint());
  CHECK(std::min(to_v, to_vinv) < 1e-12);
  CHECK(to_vinv < 1e-12);  // orientation for F(j,k) = e^{2 pi i jk/n}/sqrt(n) and V e_k = e_{k+1}

  Rng rng(1);
  const DiscreteWeylSystem random = conjugated_system(base, random_unitary(rng, 4));
  CHECK(verify_weyl_relations(random).max_residual() < 1e-12);

  Matrix not_unitary = Matrix::Identity(4, 4);
  not_unitary(0, 0) = 2.0;
  CHECK_THROWS_AS(conjugated_system(base, not_unitary), ValidationError);
}

TEST_CASE("Weyl relation verification") {
  CHECK(verify_weyl_relations(schrodinger_system(8)).max_residual() < 1e-13);
  CHECK(verify_weyl_relations(schrodinger_system(2)).max_residual() < 1e-15);
  const DiscreteWeylSystem base = schrodinger_system(4);
  const WeylRelationReport bad = verify_weyl_relations(4, base.u, base.v * base.v);
  CHECK(bad.exchange >= std::abs(std::polar(1.0, std::numbers::pi) - std::polar(1.0, std::numbers::pi / 2)) - 1e-12);
  CHECK(bad.exchange > 0.7);
  CHECK_THROWS_AS(DiscreteWeylSystem(4, base.u, base.v * base.v), ValidationError);
}

TEST_CASE("intertwiner examples") {
  const DiscreteWeylSystem base = schrodinger_system(5);
  const IntertwinerResult self = find_intertwiner(base, base);
  CHECK((self.w - Matrix::Identity(5, 5)).norm() < 1e-10);

  Rng rng(2);
  const Matrix g = random_unitary(rng, 5);
  const IntertwinerResult r = find_intertwiner(base, conjugated_system(base, g));
  CHECK(r.nullity == 1);
  CHECK(phase_distance(r.w, g) < 1e-8);
  // Phase convention: first entry of the first column real and positive.
  CHECK(std::abs(r.w(0, 0).imag()) < 1e-14);
  CHECK(r.w(0, 0).real() > 0.0);

  CHECK_THROWS_AS(find_intertwiner(schrodinger_system(3), schrodinger_system(4)), ValidationError);
}

TEST_CASE("intertwiner rejects inequivalent inputs") {
  // (U*, V) satisfies the exchange relation with the conjugate phase, so no
  // unitary maps (U, V) onto it.
  const DiscreteWeylSystem base = schrodinger_system(3);
  CHECK_THROWS_AS(DiscreteWeylSystem(3, base.u.adjoint(), base.v), ValidationError);
  const std::vector<Matrix> from{base.u, base.v};
  const std::vector<Matrix> to{base.u.adjoint(), base.v};
  CHECK_THROWS_AS(find_intertwiner(from, to, 1e-9, 1), ValidationError);
}

TEST_CASE("intertwiner is deterministic, idempotent and composes") {
  Rng rng(3);
  const DiscreteWeylSystem r1 = schrodinger_system(8);
  const DiscreteWeylSystem r2 = conjugated_system(r1, random_unitary(rng, 8));
  const DiscreteWeylSystem r3 = conjugated_system(r1, random_unitary(rng, 8));
  const IntertwinerResult a = find_intertwiner(r1, r2);
  const IntertwinerResult a_again = find_intertwiner(r1, r2);
  CHECK((a.w - a_again.w).norm() == 0.0);
  const IntertwinerResult b = find_intertwiner(r2, r3);
  const IntertwinerResult c = find_intertwiner(r1, r3);
  CHECK(phase_distance(b.w * a.w, c.w) < 1e-7);
}

TEST_CASE("uniqueness: one-dimensional null space with the analytic spectral gap") {
  for (int n : {2, 3, 5, 8, 16, 64}) {
    const DiscreteWeylSystem base = schrodinger_system(n);
    for (int k = 0; k < 20; ++k) {
      Rng rng(77 * static_cast<std::uint64_t>(n) + k);
      const Matrix g = random_unitary(rng, n);
      const IntertwinerResult r = find_intertwiner(base, conjugated_system(base, g));
      CHECK(r.nullity == 1);
      CHECK(r.gap == doctest::Approx(analytic_gap(n)).epsilon(1e-8));
      if (n <= 16) CHECK(r.gap > 0.1);
      CHECK(phase_distance(r.w, g) < 1e-7);
    }
  }
  CHECK(analytic_gap(64) < 0.1);  // the fixed 0.1 threshold cannot hold at n = 64
}

TEST_CASE("general intertwiner on generator lists") {
  Rng rng(4);
  const DiscreteWeylSystem base = schrodinger_system(4);
  const Matrix g = random_unitary(rng, 4);
  const std::vector<Matrix> from{base.u, base.v};
  const std::vector<Matrix> to{g * base.u * g.adjoint(), g * base.v * g.adjoint()};
  const IntertwinerResult r = find_intertwiner(from, to, 1e-9, 1);
  CHECK(r.nullity == 1);
  CHECK(r.u_residual < 1e-10);
  CHECK(phase_distance(r.w, g) < 1e-8);

  // Reducible: the identity pair of lists has an n^2-dimensional intertwiner space.
  const std::vector<Matrix> diag{Matrix(Matrix::Identity(3, 3))};
  const IntertwinerResult trivial = find_intertwiner(diag, diag, 1e-9, 2);
  CHECK(trivial.nullity == 9);
  CHECK(trivial.unitarity_residual < 1e-10);
}
