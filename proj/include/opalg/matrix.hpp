#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace opalg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Seeded generator used by every stochastic routine. Its name is recorded in
/// reports so results can be reproduced.
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64";

/// Malformed input: wrong shapes, non-hermitian where hermitian is required,
/// invalid states, and so on.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation finished but a residual exceeded its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_square(const Matrix& a, const char* what);
void require_finite(const Matrix& a, const char* what);
void require_same_dim(const Matrix& a, const Matrix& b, const char* what);

bool is_hermitian(const Matrix& a, double tol);
void require_hermitian(const Matrix& a, double tol, const char* what);

/// Largest singular value (the C*-norm of a matrix algebra).
double operator_norm(const Matrix& a);

/// Tr(X* Y).
Complex hs_inner(const Matrix& x, const Matrix& y);
double hs_norm(const Matrix& x);

Matrix commutator(const Matrix& a, const Matrix& b);

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

/// Standard complex normal entries (real and imaginary parts each N(0, 1/2)).
Matrix random_gaussian(Rng& rng, int rows, int cols);
Matrix random_hermitian(Rng& rng, int n);
/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
Matrix random_unitary(Rng& rng, int n);
Vector random_unit_vector(Rng& rng, int n);
/// Random density matrix of the given rank (rank = n gives full rank almost surely).
Matrix random_density(Rng& rng, int n, int rank);

/// Spectral data of a hermitian matrix with eigenvalues clustered: eigenvalues
/// closer than `gap` are merged into one spectral projection.
struct SpectralCluster {
  double value = 0.0;    // mean of the merged eigenvalues
  Matrix vectors;        // orthonormal columns spanning the eigenspace
};
std::vector<SpectralCluster> spectral_clusters(const Matrix& hermitian, double gap);

/// Orthonormal basis (as columns) of the null space of `m`: singular values
/// at or below rel_tol * max(sigma_max, reference) count as zero. The
/// reference keeps a map that is zero up to rounding from looking full rank.
struct NullSpace {
  Matrix basis;
  Eigen::VectorXd singular_values;  // descending
};
NullSpace null_space(const Matrix& m, double rel_tol, double reference = 0.0);

}  // namespace opalg
