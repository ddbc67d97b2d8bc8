// Acceptance run: one PASS/FAIL line per criterion, exit status = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "opalg/complementarity.hpp"
#include "opalg/gns.hpp"
#include "opalg/matrix_algebra.hpp"
#include "opalg/poisson_lambda.hpp"
#include "opalg/sectors.hpp"
#include "opalg/states.hpp"
#include "opalg/weyl.hpp"
#include "support.hpp"

using namespace opalg;
namespace lam = opalg::poisson;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(const char* id, const char* title, double time_limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = out.pass;
  if (time_limit_s > 0 && secs >= time_limit_s) {
    pass = false;
    out.detail += "; over time limit";
  }
  if (!pass) ++failures;
  std::printf("[%s] %-3s %s | %s | %.2fs", pass ? "PASS" : "FAIL", id, title, out.detail.c_str(), secs);
  if (time_limit_s > 0) std::printf(" (limit %.0fs)", time_limit_s);
  std::printf("\n");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Matrix half_pauli_x() { return 0.5 * pauli_x(); }
Matrix half_pauli_z() { return 0.5 * pauli_z(); }

Vector bloch_vector(double theta, double phi) {
  Vector psi(2);
  psi << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
  return psi;
}

}  // namespace

int main() {
  std::printf("opalg acceptance (rng %s)\n", kRngName);

  run("1", "spin-1/2 sum of squared deviations", 2.0, [] {
    const Matrix s1 = half_pauli_x(), s3 = half_pauli_z();
    OptimizerConfig cfg;
    cfg.seed = 1;
    const BoundReport r = minimize_deviation_functional(s1, &s3, ObjectiveKind::sum_of_squares, cfg);
    // Closed form 1/2 - w(s1)^2 - w(s3)^2 against direct deviations on a 100 x 100 Bloch grid.
    double grid_err = 0.0;
    for (int i = 0; i < 100; ++i)
      for (int j = 0; j < 100; ++j) {
        const double theta = std::numbers::pi * (i + 0.5) / 100.0;
        const double phi = 2.0 * std::numbers::pi * j / 100.0;
        const State s = State::pure(bloch_vector(theta, phi));
        const double e1 = expectation(s, s1).real(), e3 = expectation(s, s3).real();
        const double d1 = deviation(s, s1), d3 = deviation(s, s3);
        grid_err = std::max(grid_err, std::abs(d1 * d1 + d3 * d3 - (0.5 - e1 * e1 - e3 * e3)));
      }
    const double err = std::abs(r.infimum_estimate - 0.25);
    return Outcome{err < 1e-6 && grid_err < 1e-12,
                   fmt("infimum %.10f (|err| %.2e, tol 1e-6), closed-form grid err %.2e (tol 1e-12)",
                       r.infimum_estimate, err, grid_err)};
  });

  run("2", "spin-1/2 product collapse", 2.0, [] {
    const Matrix s1 = half_pauli_x(), s3 = half_pauli_z();
    OptimizerConfig cfg;
    cfg.seed = 1;
    const BoundReport r = minimize_deviation_functional(s1, &s3, ObjectiveKind::product, cfg);
    return Outcome{r.infimum_estimate < 1e-6, fmt("product infimum %.3e (tol 1e-6)", r.infimum_estimate)};
  });

  run("3", "[A,B] = Z{A,B} exact battery", 30.0, [] {
    std::mt19937_64 rng(3);
    int pass = 0;
    for (int k = 0; k < 200; ++k) {
      const int s = 1 + k % 3;
      const lam::RandomElementConfig cfg{s, 4, 3};
      const auto a = lam::random_element(rng, cfg);
      const auto b = lam::random_element(rng, cfg);
      pass += lam::commutator_bracket_check(a, b);
    }
    return Outcome{pass == 200, fmt("%d/200 exact (degree <= 4, s <= 3, seed 3)", pass)};
  });

  run("4", "Dirac and Jacobi identities", 30.0, [] {
    std::mt19937_64 rng(4);
    int dirac = 0, jacobi = 0;
    for (int k = 0; k < 100; ++k) {
      const lam::RandomElementConfig cfg{1 + k % 3, 3, 2};
      const auto a = lam::random_element(rng, cfg), b = lam::random_element(rng, cfg);
      const auto c = lam::random_element(rng, cfg), d = lam::random_element(rng, cfg);
      dirac += lam::dirac_identity_check(a, b, c, d);
      jacobi += lam::jacobi_check(a, b, c);
    }
    return Outcome{dirac == 100 && jacobi == 100, fmt("Dirac %d/100, Jacobi %d/100 exact", dirac, jacobi)};
  });

  run("5", "classical and quantum specializations", 0.0, [] {
    std::mt19937_64 rng(5);
    int classical = 0, quantum = 0;
    for (int k = 0; k < 100; ++k) {
      const lam::RandomElementConfig cfg{1 + k % 3, 4, 3};
      const auto a = lam::random_element(rng, cfg), b = lam::random_element(rng, cfg);
      classical += lam::specialize_classical(lam::lie_bracket(a, b)) ==
                   lam::classical_poisson(lam::specialize_classical(a), lam::specialize_classical(b));
    }
    const lam::Rational hbar(1);
    const lam::UnivariatePolynomial psi{{1, 1, 1}};
    for (int k = 0; k < 100; ++k) {
      const lam::RandomElementConfig cfg{1, 4, 3};
      const auto a = lam::random_element(rng, cfg), b = lam::random_element(rng, cfg);
      auto rhs = lam::specialize_quantum(lam::lie_bracket(a, b), hbar, psi);
      rhs *= lam::GaussianRational(0, hbar);
      quantum += lam::specialize_quantum(lam::commutator(a, b), hbar, psi) == rhs;
    }
    return Outcome{classical == 100 && quantum == 100,
                   fmt("classical %d/100, quantum (psi = 1+x+x^2, hbar 1) %d/100 exact", classical, quantum)};
  });

  run("6", "GNS reconstruction", 0.0, [] {
    Rng rng(6);
    double expect = 0, mult = 0;
    int rank_ok = 0;
    for (int k = 0; k < 50; ++k) {
      const int n = 2 + k % 5;
      const StarAlgebra alg = StarAlgebra::full(n);
      const State s(random_density(rng, n, n));
      const GnsTriple t = gns_construct(alg, s);
      const RepresentationReport r = verify_representation(t, alg, s);
      expect = std::max(expect, r.expectation);
      mult = std::max(mult, r.multiplicativity);
      rank_ok += r.cyclicity_rank == t.space_dim && t.space_dim == n * n;
    }
    const StarAlgebra m2 = StarAlgebra::full(2);
    const int pure_dim = gns_construct(m2, State::pure(Vector::Unit(2, 0))).space_dim;
    const int trace_dim = gns_construct(m2, State::maximally_mixed(2)).space_dim;
    const bool ok = expect < 1e-9 && mult < 1e-8 && rank_ok == 50 && pure_dim == 2 && trace_dim == 4;
    return Outcome{ok, fmt("expectation %.1e (tol 1e-9), homomorphism %.1e (tol 1e-8), cyclic rank ok %d/50, "
                           "pure M2 dim %d, tracial M2 dim %d",
                           expect, mult, rank_ok, pure_dim, trace_dim)};
  });

  run("7a", "separating families are norm preserving", 0.0, [] {
    Rng rng(7);
    double worst = 0;
    int separating = 0;
    for (int k = 0; k < 50; ++k) {
      const int n = 2 + k % 4;
      const StarAlgebra alg = testing::random_generated_algebra(rng, n);
      std::vector<State> family;
      for (int j = 0; j < alg.size(); ++j) {
        std::uniform_int_distribution<int> rank(1, n);
        family.emplace_back(random_density(rng, n, rank(rng)));
      }
      const DirectSumRepresentation d = gns_direct_sum(alg, family);
      if (!d.separating) continue;
      ++separating;
      worst = std::max(worst, d.max_norm_deficit);
    }
    return Outcome{separating == 50 && worst < 1e-7,
                   fmt("%d/50 families separating, max per-basis norm deficit %.1e (tol 1e-7)", separating, worst)};
  });

  run("7b", "faithfulness verdict agrees with separates()", 0.0, [] {
    // Random algebras with random families of 1..size+1 states of random rank.
    Rng rng(77);
    int agree = 0, faithful_only = 0, separating_only = 0;
    for (int k = 0; k < 50; ++k) {
      const int n = 2 + k % 4;
      const StarAlgebra alg = testing::random_generated_algebra(rng, n);
      std::uniform_int_distribution<int> count(1, alg.size() + 1);
      std::uniform_int_distribution<int> rank(1, n);
      std::vector<State> family;
      const int m = count(rng);
      for (int j = 0; j < m; ++j) family.emplace_back(random_density(rng, n, rank(rng)));
      const DirectSumRepresentation d = gns_direct_sum(alg, family);
      const bool sep = separates(family, alg);
      if (sep == d.norm_preserving) ++agree;
      else if (d.norm_preserving) ++faithful_only;
      else ++separating_only;
    }
    return Outcome{agree == 50, fmt("%d/50 agree; faithful but not separating %d, separating but not faithful %d",
                                    agree, faithful_only, separating_only)};
  });

  run("8", "sector decomposition and phase unobservability", 0.0, [] {
    Rng rng(8);
    const Matrix u = random_unitary(rng, 3);
    const StarAlgebra alg = testing::conjugate(StarAlgebra::block_diagonal({2, 1}), u);
    const SectorDecomposition dec = decompose(alg, SectorKind::irreducible, 8);
    const bool blocks_ok = dec.blocks.size() == 2 && dec.blocks[0].second == 2 && dec.blocks[1].second == 1;
    const double off = off_block_residual(dec, alg);

    std::vector<double> phases;
    for (int k = 0; k < 64; ++k) phases.push_back(2.0 * std::numbers::pi * k / 64.0);
    const Complex c = 1.0 / std::sqrt(2.0);
    const Vector psi1 = dec.block_basis(0).col(0);
    const Vector psi2 = dec.block_basis(1).col(0);
    const PhaseReport across = phase_observability(alg, dec, 0, 1, psi1, psi2, c, c, phases);

    // Control: both vectors in one 2-dim sector, witness sigma_x.
    const std::vector<Matrix> witness{pauli_x()};
    const PhaseReport control = phase_scan(witness, Vector::Unit(2, 0), Vector::Unit(2, 1), c, c, phases);
    const double expected = 2.0 * (2.0 * std::abs(c) * std::abs(c)) * operator_norm(pauli_x());
    const bool ok = blocks_ok && off < 1e-10 && across.variation < 1e-12 && std::abs(control.variation - expected) < 1e-10;
    return Outcome{ok, fmt("blocks %s, off-block %.1e (tol 1e-10), cross-sector variation %.1e (tol 1e-12), "
                           "single-sector variation %.12f (expected %.1f)",
                           blocks_ok ? "(2,1)" : "wrong", off, across.variation, control.variation, expected)};
  });

  run("9", "Robertson inequality", 0.0, [] {
    Rng rng(9);
    double worst = 1e300;
    for (int k = 0; k < 1000; ++k) {
      const int n = 2 + k % 5;
      std::uniform_int_distribution<int> rank(1, n);
      const State s(random_density(rng, n, rank(rng)));
      const Matrix a = random_hermitian(rng, n), b = random_hermitian(rng, n);
      worst = std::min(worst, deviation(s, a) * deviation(s, b) - robertson_bound(s, a, b));
    }
    const State zero = State::pure(Vector::Unit(2, 0));
    const double eq = std::abs(deviation(zero, pauli_x()) * deviation(zero, pauli_y()) -
                               robertson_bound(zero, pauli_x(), pauli_y()));
    return Outcome{worst >= -1e-10 && eq < 1e-12,
                   fmt("min slack %.3e over 1000 triples (tol -1e-10), equality residual %.1e (tol 1e-12)", worst, eq)};
  });

  run("10", "finite Stone-von Neumann uniqueness", 60.0, [] {
    int bad_nullity = 0;
    double resid = 0, match = 0;
    for (int n : {2, 3, 5, 8, 16, 64}) {
      const DiscreteWeylSystem base = schrodinger_system(n);
      for (int k = 0; k < 20; ++k) {
        Rng rng(1000 * static_cast<std::uint64_t>(n) + k);
        const Matrix g = random_unitary(rng, n);
        const IntertwinerResult r = find_intertwiner(base, conjugated_system(base, g));
        bad_nullity += r.nullity != 1;
        resid = std::max({resid, r.u_residual, r.v_residual});
        match = std::max(match, phase_distance(r.w, g));
      }
    }
    return Outcome{bad_nullity == 0 && resid < 1e-8 && match < 1e-7,
                   fmt("nullity != 1 in %d/120 cases, max residual %.1e (tol 1e-8), max phase distance to G %.1e "
                       "(tol 1e-7)",
                       bad_nullity, resid, match)};
  });

  run("11", "Weyl-cosine complementarity", 300.0, [] {
    OptimizerConfig cfg;
    cfg.seed = 11;
    const WeylCosineReport r = weyl_cosine_experiment(build_oscillator(40, 1.0, 1.0), cfg);
    const double change = r.relative_change();
    return Outcome{r.main.infimum_estimate > 0.01 && change < 0.2,
                   fmt("infimum N=40 %.6f (> 0.01), N=20 %.6f, relative change %.4f (< 0.2), reference 1/8 = %.3f",
                       r.main.infimum_estimate, r.half ? r.half->infimum_estimate : NAN, change, r.reference)};
  });

  run("12", "C*-norm laws", 0.0, [] {
    Rng rng(12);
    double worst = 0;
    std::string worst_law;
    for (int n = 2; n <= 6; ++n) {
      const StarAlgebra alg = testing::random_generated_algebra(rng, n);
      const CStarLawReport r = verify_cstar_laws(alg, 100, 1200 + n);
      for (const auto& [law, v] : r.max_residual)
        if (v >= worst) {
          worst = v;
          worst_law = law;
        }
    }
    return Outcome{worst < 1e-9, fmt("max residual %.1e (%s), tol 1e-9", worst, worst_law.c_str())};
  });

  run("13", "measurement simulation", 0.0, [] {
    Rng rng(13);
    const std::size_t samples = 100000;
    double worst_z = 0;
    for (int k = 0; k < 20; ++k) {
      const int n = 2 + k % 4;
      const State s(random_density(rng, n, 1 + k % n));
      const Matrix a = random_hermitian(rng, n);
      const MeasurementRecord rec = simulate_measurements(s, a, samples, 1300 + k);
      const double se = deviation(s, a) / std::sqrt(static_cast<double>(samples));
      worst_z = std::max(worst_z, std::abs(rec.empirical_mean - expectation(s, a).real()) / se);
    }
    const Matrix a = random_hermitian(rng, 3);
    const std::vector<State> eig = eigenstates(a);
    bool exact = true;
    for (std::size_t j = 0; j < eig.size(); ++j) {
      const MeasurementRecord rec = simulate_measurements(eig[j], a, 1000, 1399);
      const double lambda = expectation(eig[j], a).real();
      for (double x : rec.outcomes) exact = exact && x == rec.outcomes.front();
      exact = exact && std::abs(rec.empirical_mean - lambda) < 1e-12 * std::max(1.0, std::abs(lambda));
    }
    return Outcome{worst_z < 4.0 && exact,
                   fmt("max |mean - Tr(rho A)| = %.2f standard errors over 20 cases (tol 4), eigenstate case %s",
                       worst_z, exact ? "exact" : "not exact")};
  });

  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
