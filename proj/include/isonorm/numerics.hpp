#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "isonorm/random.hpp"

namespace isonorm {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct SpectralResult {
  std::vector<double> eigenvalues;  // ascending
  int iterations = 0;               // Jacobi sweeps, 0 for the library path
  double residual = 0.0;            // max off-diagonal magnitude at termination
  std::string method;
};

struct JacobiOptions {
  double tol = 1e-11;  // relative to max(1, max |a_ij|)
  int max_sweeps = 100;
};

// Dimension above which dense spectra use Eigen's tridiagonal QR instead of Jacobi.
inline constexpr int kJacobiLimit = 128;

double hermitian_defect(const Matrix& A);  // max |A - A*|
// Cyclic complex Jacobi. Throws InputError on non-Hermitian input, CheckFailure on sweep cap.
SpectralResult hermitian_spectrum(const Matrix& A, JacobiOptions opt = {});

struct Eigensystem {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns match values
};
Eigensystem hermitian_eigensystem(const Matrix& A, JacobiOptions opt = {});

// Jacobi up to kJacobiLimit, Eigen above.
SpectralResult hermitian_spectrum_auto(const Matrix& A, JacobiOptions opt = {});

// Drops all-zero rows and columns; the operator norm is unchanged.
Matrix compress_zero_lines(const Matrix& A);
double operator_norm(const Matrix& A, double tol = 1e-11);
bool psd_check(const Matrix& A, double tol);
double min_eigenvalue(const Matrix& A);

struct LinearOperator {
  std::size_t rows = 0, cols = 0;
  std::function<void(const Vector&, Vector&)> apply;
  std::function<void(const Vector&, Vector&)> apply_adjoint;
};

LinearOperator dense_operator(const Matrix& A);

struct PowerOptions {
  std::uint64_t seed = kDefaultSeed;
  int restarts = 3;
  double rel_tol = 1e-9;
  long max_iterations = 100000;
  int jobs = 1;  // restarts run concurrently; results do not depend on it
};

struct PowerResult {
  double value = 0.0;  // ||A v|| for a unit vector v: a certified lower bound on ||A||
  Vector vector;
  long iterations = 0;
  bool converged = false;
};

// Power iteration on A*A. Restart r starts from a vector seeded by (seed, r);
// a warm start replaces restart 0. apply/apply_adjoint must be safe to call concurrently.
PowerResult power_norm(const LinearOperator& A, const PowerOptions& opt, const Vector* warm = nullptr);

struct LanczosOptions {
  std::uint64_t seed = kDefaultSeed;
  int max_steps = 3000;
  double rel_tol = 1e-11;  // on the residual estimate of the top Ritz pair
};

// Largest eigenvalue of a Hermitian operator (only apply is used). The recurrence runs
// without reorthogonalization and is replayed to form the top Ritz vector y; value is
// the Rayleigh quotient of y, a lower bound on the top eigenvalue.
PowerResult lanczos_top(const LinearOperator& A, const LanczosOptions& opt = {});

Matrix random_unitary(int n, Rng& rng);
Matrix random_hermitian(int n, Rng& rng);
std::vector<double> sorted_spectrum(const Matrix& A);

}  // namespace isonorm
