#include <cmath>
#include <numbers>

#include "doctest.h"
#include "opalg/complementarity.hpp"

using namespace opalg;

namespace {

OptimizerConfig quick(std::uint64_t seed, int starts = 8) {
  OptimizerConfig cfg;
  cfg.seed = seed;
  cfg.starts = starts;
  return cfg;
}

// Central difference of f along a tangent direction at psi, versus the
// packed gradient: dF = Re <grad, delta>.
double gradient_mismatch(const SphereObjective& f, const Vector& psi, const Vector& delta) {
  Vector grad;
  f.value_and_gradient(psi, grad);
  const double h = 1e-6;
  const double fd = (f.value((psi + h * delta).normalized()) - f.value((psi - h * delta).normalized())) / (2 * h);
  return std::abs(fd - grad.dot(delta).real());
}

Vector tangent(Rng& rng, const Vector& psi) {
  Vector d = random_unit_vector(rng, static_cast<int>(psi.size()));
  d -= psi * psi.dot(d).real();
  return d;
}

}  // namespace

TEST_CASE("Robertson bound examples") {
  const State up = State::pure(Vector::Unit(2, 0));
  // [sx, sy] = 2i sz: bound |<sz>| = 1 on |0>.
  CHECK(robertson_bound(up, pauli_x(), pauli_y()) == doctest::Approx(1.0));
  CHECK(robertson_bound(State::maximally_mixed(2), pauli_x(), pauli_y()) == doctest::Approx(0.0));
  CHECK(robertson_bound(up, pauli_z(), pauli_z()) == 0.0);
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 3;
    const State s(random_density(rng, n, 1 + k % n));
    const Matrix a = random_hermitian(rng, n), b = random_hermitian(rng, n);
    CHECK(deviation(s, a) * deviation(s, b) >= robertson_bound(s, a, b) - 1e-12);
  }
  CHECK_THROWS_AS(robertson_bound(up, pauli_x(), Matrix::Identity(3, 3)), ValidationError);
}

TEST_CASE("minimize examples") {
  const BoundReport single = minimize_deviation_functional(pauli_z(), nullptr, ObjectiveKind::single, quick(1));
  CHECK(single.infimum_estimate < 1e-8);

  const Matrix sx = 0.5 * pauli_x(), sz = 0.5 * pauli_z();
  const BoundReport spin = minimize_deviation_functional(sx, &sz, ObjectiveKind::sum_of_squares, quick(2));
  // Var(sx/2) + Var(sz/2) = (2 - x^2 - z^2)/4 on the Bloch sphere.
  CHECK(spin.infimum_estimate == doctest::Approx(0.25).epsilon(1e-9));
  REQUIRE(spin.grid_gap.has_value());
  CHECK(std::abs(*spin.grid_gap) < 1e-4);

  const BoundReport product = minimize_deviation_functional(sx, &sz, ObjectiveKind::product, quick(3));
  CHECK(product.infimum_estimate < 1e-8);

  CHECK_THROWS_AS(minimize_deviation_functional(sx, nullptr, ObjectiveKind::sum, quick(4)), ValidationError);
  CHECK_THROWS_AS(objective_kind_from_string("max"), ValidationError);
}

TEST_CASE("reported argmin reproduces the infimum") {
  Rng rng(5);
  for (int k = 0; k < 6; ++k) {
    const int n = 2 + k % 3;
    const Matrix a = random_hermitian(rng, n), b = random_hermitian(rng, n);
    const BoundReport r = minimize_deviation_functional(a, &b, ObjectiveKind::sum, quick(10 + k));
    const SphereObjective f = deviation_objective(a, &b, ObjectiveKind::sum);
    CHECK(std::abs(f.value(r.argmin_state) - r.infimum_estimate) < 1e-12);
    CHECK(std::abs(r.argmin_state.norm() - 1.0) < 1e-12);
    if (r.grid_gap) CHECK(std::abs(*r.grid_gap) < 1e-4);
  }
}

TEST_CASE("single-observable infimum vanishes") {
  Rng rng(6);
  for (int k = 0; k < 10; ++k) {
    const Matrix a = random_hermitian(rng, 2 + k % 4);
    CHECK(minimize_deviation_functional(a, nullptr, ObjectiveKind::single, quick(20 + k)).infimum_estimate < 1e-8);
  }
}

TEST_CASE("mixed states never beat the pure-state infimum in dimension 2") {
  const Matrix a = pauli_x(), b = pauli_z();
  const double pure = minimize_deviation_functional(a, &b, ObjectiveKind::sum, quick(7)).infimum_estimate;
  // Bloch-ball grid over density matrices.
  const int m = 24;
  double best = 1e9;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j)
      for (int k = 0; k <= m; ++k) {
        const double x = -1 + 2.0 * i / m, y = -1 + 2.0 * j / m, z = -1 + 2.0 * k / m;
        if (x * x + y * y + z * z > 1.0) continue;
        const Matrix rho = 0.5 * (Matrix::Identity(2, 2) + x * pauli_x() + y * pauli_y() + z * pauli_z());
        const State s(rho, 1e-9);
        best = std::min(best, deviation(s, a) + deviation(s, b));
      }
  CHECK(best >= pure - 1e-9);
}

TEST_CASE("certification") {
  const Matrix sx = 0.5 * pauli_x(), sz = 0.5 * pauli_z();
  const Certification yes = certify_complementarity(sx, sz, quick(8));
  CHECK(yes.complementary);
  CHECK(yes.threshold == doctest::Approx(1e-6));

  Matrix d1 = Matrix::Zero(3, 3), d2 = Matrix::Zero(3, 3);
  d1(0, 0) = 1; d1(1, 1) = 2;
  d2(1, 1) = -1; d2(2, 2) = 3;
  const Certification no = certify_complementarity(d1, d2, quick(9));
  CHECK_FALSE(no.complementary);

  // Unitary invariance of the certified infimum.
  Rng rng(10);
  const Matrix a = random_hermitian(rng, 3), b = random_hermitian(rng, 3);
  const Matrix u = random_unitary(rng, 3);
  const double before = certify_complementarity(a, b, quick(11)).report.infimum_estimate;
  const double after = certify_complementarity(u * a * u.adjoint(), u * b * u.adjoint(), quick(11)).report.infimum_estimate;
  CHECK(std::abs(before - after) < 1e-8);
}

TEST_CASE("common sharp state") {
  const SharpState none = common_sharp_state(pauli_x(), pauli_z());
  CHECK_FALSE(none.vector.has_value());
  CHECK(none.commutator_norm == doctest::Approx(2.0));

  Matrix d1 = Matrix::Zero(3, 3), d2 = Matrix::Zero(3, 3);
  d1(0, 0) = 1; d1(1, 1) = 1; d1(2, 2) = 2;
  d2(0, 0) = 5; d2(1, 1) = -1; d2(2, 2) = 0;
  const SharpState some = common_sharp_state(d1, d2);
  REQUIRE(some.vector.has_value());
  CHECK(pure_variance(d1, *some.vector) < 1e-12);
  CHECK(pure_variance(d2, *some.vector) < 1e-12);
}

TEST_CASE("truncated oscillator") {
  const OscillatorModel m = build_oscillator(10, 1.0, 1.0);
  CHECK(m.q_matrix.rows() == 10);
  CHECK((m.q_matrix * m.q_matrix)(0, 0).real() == doctest::Approx(0.5));
  const Matrix c = commutator(m.q_matrix, m.p_matrix);
  CHECK(std::abs(c(0, 0) - Complex(0.0, 1.0)) < 1e-14);
  // Truncation corrupts only the last corner: [q,p] = i hbar (I - N E_{NN}).
  CHECK(std::abs(c(9, 9) - Complex(0.0, 1.0 - 10.0)) < 1e-12);
  CHECK_THROWS_AS(build_oscillator(2, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(build_oscillator(8, -1.0, 1.0), ValidationError);
}

TEST_CASE("analytic gradients match finite differences") {
  Rng rng(12);
  for (ObjectiveKind kind : {ObjectiveKind::sum, ObjectiveKind::sum_of_squares, ObjectiveKind::product}) {
    const Matrix a = random_hermitian(rng, 4), b = random_hermitian(rng, 4);
    const SphereObjective f = deviation_objective(a, &b, kind);
    for (int k = 0; k < 5; ++k) {
      const Vector psi = random_unit_vector(rng, 4);
      CHECK(gradient_mismatch(f, psi, tangent(rng, psi)) < 1e-6);
    }
  }
  const SphereObjective single = deviation_objective(random_hermitian(rng, 3), nullptr, ObjectiveKind::single);
  const Vector psi = random_unit_vector(rng, 3);
  CHECK(gradient_mismatch(single, psi, tangent(rng, psi)) < 1e-6);

  const WeylCosineObjective w(build_oscillator(12, 1.0, 1.0));
  const SphereObjective wf = w.as_sphere_objective();
  for (int k = 0; k < 5; ++k) {
    const Vector phi = random_unit_vector(rng, 12);
    CHECK(gradient_mismatch(wf, phi, tangent(rng, phi)) < 1e-6);
  }
}

TEST_CASE("Weyl-cosine objective") {
  const OscillatorModel m = build_oscillator(20, 1.0, 1.0);
  const WeylCosineObjective w(m);
  CHECK(w.dim() == 20);
  const double ground = w.value(Vector::Unit(20, 0));
  CHECK(ground > 0.0);
  CHECK(squeezed_vacuum(20, 0.0).isApprox(Vector::Unit(20, 0), 1e-14));

  // The rescaled pair does not depend on s, so neither does the objective.
  const WeylCosineObjective w4(build_oscillator(20, 4.0, 1.0));
  Rng rng(13);
  for (int k = 0; k < 5; ++k) {
    const Vector psi = random_unit_vector(rng, 20);
    CHECK(std::abs(w.value(psi) - w4.value(psi)) < 1e-6);
  }
}

TEST_CASE("bounded-product collapse") {
  const CollapseReport r = bounded_product_collapse(pauli_z(), pauli_x(), quick(14));
  CHECK(r.single_infimum < 1e-8);
  CHECK(r.product_infimum < 1e-8);
  CHECK(r.holds);

  Rng rng(15);
  for (int k = 0; k < 5; ++k) {
    const Matrix a = random_hermitian(rng, 3), b = random_hermitian(rng, 3);
    const CollapseReport c = bounded_product_collapse(a, b, quick(30 + k));
    CHECK(c.holds);
    CHECK(c.bound >= 0.0);
  }
}
