#include <doctest.h>

#include "isonorm/errors.hpp"
#include "isonorm/numerics.hpp"
#include "oracles.hpp"

using namespace isonorm;
using namespace isonorm::testing;

namespace {

Matrix ones2() { return Matrix::Ones(2, 2); }

Matrix random_matrix(int r, int c, Rng& rng) {
  Matrix M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = rng.complex_normal();
  return M;
}

}  // namespace

TEST_CASE("Jacobi spectra of small matrices") {
  const auto id = hermitian_spectrum(Matrix::Identity(3, 3));
  CHECK(id.eigenvalues == std::vector<double>{1.0, 1.0, 1.0});
  const auto o = hermitian_spectrum(ones2());
  REQUIRE(o.eigenvalues.size() == 2);
  CHECK(o.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(o.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Jacobi matches characteristic-polynomial roots") {
  Rng rng(21);
  for (int t = 0; t < 5; ++t) {
    const Matrix A = random_hermitian(6, rng);
    const auto jac = hermitian_spectrum(A).eigenvalues;
    const auto roots = charpoly_roots(A);
    REQUIRE(roots.size() == 6);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(jac[i] - roots[i]) <= 1e-9);
  }
}

TEST_CASE("Jacobi input errors") {
  Matrix A = ones2();
  A(0, 1) = 2.0;
  CHECK_THROWS_AS(hermitian_spectrum(A), InputError);
  Rng rng(2);
  JacobiOptions opt;
  opt.max_sweeps = 1;
  CHECK_THROWS_AS(hermitian_spectrum(random_hermitian(20, rng), opt), CheckFailure);
}

TEST_CASE("library path above the Jacobi limit") {
  Rng rng(9);
  const Matrix A = random_hermitian(kJacobiLimit + 20, rng);
  const auto lib = hermitian_spectrum_auto(A).eigenvalues;
  const auto ref = oracle_hermitian_spectrum(A);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(lib[i] - ref[i]) <= 1e-9);
}

TEST_CASE("operator norms") {
  Matrix P = Matrix::Zero(3, 3);
  P(0, 1) = P(1, 2) = P(2, 0) = 1.0;
  CHECK(operator_norm(P) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(operator_norm(ones2()) == doctest::Approx(2.0).epsilon(1e-12));
  Matrix v(2, 1);
  v << 3.0, 4.0;
  CHECK(operator_norm(v) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("psd checks") {
  CHECK(psd_check(Matrix::Identity(4, 4), 1e-12));
  Matrix A(2, 2);
  A << 1.0, 2.0, 2.0, 1.0;
  CHECK_FALSE(psd_check(A, 1e-12));
  CHECK(min_eigenvalue(A) == doctest::Approx(-1.0).epsilon(1e-12));
  // Gram matrix of the regular trace on Z/3: phi(k_i^-1 k_j) = [i == j]
  CHECK(psd_check(Matrix::Identity(3, 3), 1e-12));
  Matrix B = ones2();
  B(0, 1) = Complex(0, 1);
  CHECK_THROWS_AS(psd_check(B, 1e-12), InputError);
}

TEST_CASE("spectral invariants on random inputs") {
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    const int n = 3 + static_cast<int>(rng.index(8));
    const Matrix A = random_hermitian(n, rng);
    const Matrix U = random_unitary(n, rng);
    const auto a = sorted_spectrum(A);
    const auto b = sorted_spectrum(U * A * U.adjoint());
    for (int i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-9);

    const Matrix X = random_matrix(n, n, rng), Y = random_matrix(n, n, rng);
    CHECK(operator_norm(X * Y) <= operator_norm(X) * operator_norm(Y) + 1e-9);
    CHECK(std::abs(operator_norm(X.adjoint()) - operator_norm(X)) <= 1e-9);
    CHECK(std::abs(operator_norm(X) - oracle_norm(X)) <= 1e-9);
  }
}

TEST_CASE("power iteration cross-checks operator_norm") {
  Rng rng(41);
  PowerOptions opt;
  opt.restarts = 10;
  opt.rel_tol = 1e-14;
  for (int t = 0; t < 5; ++t) {
    const Matrix X = random_matrix(12, 9, rng);
    const PowerResult r = power_norm(dense_operator(X), opt);
    CHECK(r.value <= operator_norm(X) + 1e-9);
    CHECK(r.value >= operator_norm(X) - 1e-6);
  }
}

TEST_CASE("power iteration does not depend on the worker count") {
  Rng rng(43);
  const Matrix X = random_matrix(40, 40, rng);
  PowerOptions one, four;
  one.restarts = four.restarts = 6;
  four.jobs = 4;
  const PowerResult a = power_norm(dense_operator(X), one), b = power_norm(dense_operator(X), four);
  CHECK(a.value == b.value);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("Lanczos gives a lower bound that converges to the top eigenvalue") {
  Rng rng(47);
  const Matrix X = random_matrix(300, 300, rng);
  const Matrix A = X.adjoint() * X;
  const double top = oracle_hermitian_spectrum(A).back();
  const PowerResult r = lanczos_top(dense_operator(A));
  CHECK(r.converged);
  CHECK(r.value <= top * (1 + 1e-12));
  CHECK(r.value >= top * (1 - 1e-9));
  CHECK(std::abs(r.vector.norm() - 1.0) <= 1e-12);
}
