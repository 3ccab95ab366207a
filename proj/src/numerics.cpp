#include "isonorm/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <thread>
#include <cmath>

#include "isonorm/errors.hpp"

namespace isonorm {

namespace {

double max_abs(const Matrix& A) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i) m = std::max(m, std::abs(A(i, j)));
  return m;
}

double off_diagonal(const Matrix& A) {
  double m = 0.0;
  const Eigen::Index n = A.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i) m = std::max(m, std::abs(A(i, j)));
  return m;
}

void require_hermitian(const Matrix& A) {
  if (A.rows() != A.cols()) throw InputError("matrix is not square");
  if (hermitian_defect(A) > 1e-12 * std::max(1.0, max_abs(A))) throw InputError("matrix is not Hermitian");
}

// One pass of cyclic Jacobi until the off-diagonal part is below tol.
int jacobi(Matrix& A, Matrix* V, const JacobiOptions& opt, double& residual) {
  const Eigen::Index n = A.rows();
  const double thresh = opt.tol * std::max(1.0, max_abs(A));
  int sweeps = 0;
  residual = off_diagonal(A);
  while (residual > thresh) {
    if (sweeps >= opt.max_sweeps) throw CheckFailure("Jacobi did not converge within the sweep cap");
    ++sweeps;
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const std::complex<double> b = A(p, q);
        const double mag = std::abs(b);
        if (mag == 0.0) continue;
        const std::complex<double> ph = b / mag;  // e^{iθ}
        const double alpha = A(p, p).real(), beta = A(q, q).real();
        const double tau = (beta - alpha) / (2.0 * mag);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const std::complex<double> em = std::conj(ph);  // e^{-iθ}
        // A <- A J, J = [[c, s], [-s e^{-iθ}, c e^{-iθ}]]
        for (Eigen::Index k = 0; k < n; ++k) {
          const std::complex<double> ap = A(k, p), aq = A(k, q);
          A(k, p) = c * ap - s * em * aq;
          A(k, q) = s * ap + c * em * aq;
        }
        // A <- J* A
        for (Eigen::Index k = 0; k < n; ++k) {
          const std::complex<double> ap = A(p, k), aq = A(q, k);
          A(p, k) = c * ap - s * ph * aq;
          A(q, k) = s * ap + c * ph * aq;
        }
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        A(p, p) = A(p, p).real();
        A(q, q) = A(q, q).real();
        if (V) {
          for (Eigen::Index k = 0; k < n; ++k) {
            const std::complex<double> vp = (*V)(k, p), vq = (*V)(k, q);
            (*V)(k, p) = c * vp - s * em * vq;
            (*V)(k, q) = s * vp + c * em * vq;
          }
        }
      }
    residual = off_diagonal(A);
  }
  return sweeps;
}

}  // namespace

double hermitian_defect(const Matrix& A) {
  if (A.rows() != A.cols()) return INFINITY;
  double m = 0.0;
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i) m = std::max(m, std::abs(A(i, j) - std::conj(A(j, i))));
  return m;
}

SpectralResult hermitian_spectrum(const Matrix& A, JacobiOptions opt) {
  require_hermitian(A);
  Matrix W = (A + A.adjoint()) * 0.5;
  SpectralResult r;
  r.iterations = jacobi(W, nullptr, opt, r.residual);
  r.method = "jacobi";
  for (Eigen::Index i = 0; i < W.rows(); ++i) r.eigenvalues.push_back(W(i, i).real());
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end());
  return r;
}

Eigensystem hermitian_eigensystem(const Matrix& A, JacobiOptions opt) {
  require_hermitian(A);
  Matrix W = (A + A.adjoint()) * 0.5;
  const Eigen::Index n = W.rows();
  Eigensystem out;
  if (n > kJacobiLimit) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(W);
    out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    out.vectors = es.eigenvectors();
    return out;
  }
  Matrix V = Matrix::Identity(n, n);
  double residual = 0.0;
  jacobi(W, &V, opt, residual);
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return W(a, a).real() < W(b, b).real(); });
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values.push_back(W(order[i], order[i]).real());
    out.vectors.col(i) = V.col(order[i]);
  }
  return out;
}

SpectralResult hermitian_spectrum_auto(const Matrix& A, JacobiOptions opt) {
  if (A.rows() <= kJacobiLimit) return hermitian_spectrum(A, opt);
  require_hermitian(A);
  Matrix W = (A + A.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(W, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw CheckFailure("dense eigensolver failed");
  SpectralResult r;
  r.method = "eigen-tridiagonal-qr";
  r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + W.rows());
  return r;
}

Matrix compress_zero_lines(const Matrix& A) {
  std::vector<Eigen::Index> rows, cols;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    if (!A.row(i).isZero(0.0)) rows.push_back(i);
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    if (!A.col(j).isZero(0.0)) cols.push_back(j);
  if (rows.size() == static_cast<std::size_t>(A.rows()) && cols.size() == static_cast<std::size_t>(A.cols())) return A;
  Matrix B(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) B(i, j) = A(rows[i], cols[j]);
  return B;
}

double operator_norm(const Matrix& A, double tol) {
  Matrix B = compress_zero_lines(A);
  if (B.size() == 0) return 0.0;
  if (B.rows() == 1 || B.cols() == 1) return B.norm();
  Matrix G = B.rows() <= B.cols() ? Matrix(B * B.adjoint()) : Matrix(B.adjoint() * B);
  G = (G + G.adjoint()) * 0.5;
  JacobiOptions opt;
  opt.tol = tol;
  SpectralResult s = hermitian_spectrum_auto(G, opt);
  return std::sqrt(std::max(0.0, s.eigenvalues.back()));
}

bool psd_check(const Matrix& A, double tol) { return min_eigenvalue(A) >= -tol; }

double min_eigenvalue(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  return hermitian_spectrum_auto(A).eigenvalues.front();
}

LinearOperator dense_operator(const Matrix& A) {
  LinearOperator op;
  op.rows = static_cast<std::size_t>(A.rows());
  op.cols = static_cast<std::size_t>(A.cols());
  op.apply = [A](const Vector& v, Vector& out) { out.noalias() = A * v; };
  op.apply_adjoint = [A](const Vector& v, Vector& out) { out.noalias() = A.adjoint() * v; };
  return op;
}

namespace {

std::uint64_t restart_seed(std::uint64_t seed, int r) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(r + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

PowerResult one_restart(const LinearOperator& A, const PowerOptions& opt, Vector v) {
  PowerResult out;
  Vector w(static_cast<Eigen::Index>(A.rows)), z(static_cast<Eigen::Index>(A.cols));
  v /= v.norm();
  double prev = -1.0, val = 0.0;
  long it = 0;
  Vector keep = v;
  while (it < opt.max_iterations) {
    ++it;
    A.apply(v, w);
    val = w.norm();
    keep = v;
    if (val == 0.0) {
      out.converged = true;
      break;
    }
    if (prev >= 0 && std::abs(val - prev) <= opt.rel_tol * val) {
      out.converged = true;
      break;
    }
    prev = val;
    A.apply_adjoint(w, z);
    const double nz = z.norm();
    if (nz == 0.0) {
      out.converged = true;
      break;
    }
    v = z / nz;
  }
  out.value = val;
  out.vector = keep;
  out.iterations = it;
  return out;
}

}  // namespace

PowerResult power_norm(const LinearOperator& A, const PowerOptions& opt, const Vector* warm) {
  PowerResult best;
  if (A.rows == 0 || A.cols == 0) return best;
  const Eigen::Index n = static_cast<Eigen::Index>(A.cols);
  const int restarts = std::max(1, opt.restarts);
  std::vector<Vector> starts(restarts);
  for (int r = 0; r < restarts; ++r) {
    if (r == 0 && warm && warm->size() == n && warm->norm() > 0) {
      starts[r] = *warm;
      continue;
    }
    Rng rng(restart_seed(opt.seed, r));
    starts[r].resize(n);
    for (Eigen::Index i = 0; i < n; ++i) starts[r](i) = rng.complex_normal();
  }
  std::vector<PowerResult> runs(restarts);
  const int jobs = std::clamp(opt.jobs, 1, restarts);
  if (jobs == 1) {
    for (int r = 0; r < restarts; ++r) runs[r] = one_restart(A, opt, starts[r]);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (int r = next++; r < restarts; r = next++) runs[r] = one_restart(A, opt, starts[r]);
      });
    for (auto& th : pool) th.join();
  }
  for (int r = 0; r < restarts; ++r) {
    if (runs[r].value > best.value || best.vector.size() == 0) {
      best.value = runs[r].value;
      best.vector = runs[r].vector;
      best.converged = runs[r].converged;
    }
    best.iterations += runs[r].iterations;
  }
  return best;
}

PowerResult lanczos_top(const LinearOperator& A, const LanczosOptions& opt) {
  PowerResult out;
  if (A.rows == 0) return out;
  const Eigen::Index n = static_cast<Eigen::Index>(A.rows);
  Vector start(n);
  Rng rng(restart_seed(opt.seed, 0));
  for (Eigen::Index i = 0; i < n; ++i) start(i) = rng.complex_normal();
  start /= start.norm();

  std::vector<double> alpha, beta;
  Eigen::VectorXd ritz;
  auto solve = [&](std::size_t k) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(k)), e(static_cast<Eigen::Index>(k > 0 ? k - 1 : 0));
    for (std::size_t i = 0; i < k; ++i) d(static_cast<Eigen::Index>(i)) = alpha[i];
    for (std::size_t i = 0; i + 1 < k; ++i) e(static_cast<Eigen::Index>(i)) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    ritz = es.eigenvectors().col(static_cast<Eigen::Index>(k - 1));
    return es.eigenvalues()(static_cast<Eigen::Index>(k - 1));
  };

  // first pass: coefficients only
  Vector prev = Vector::Zero(n), cur = start, w(n);
  std::size_t k = 0;
  double beta_prev = 0.0;
  while (static_cast<int>(k) < opt.max_steps && static_cast<Eigen::Index>(k) < n) {
    A.apply(cur, w);
    const double a = cur.dot(w).real();
    w -= a * cur + beta_prev * prev;
    const double b = w.norm();
    alpha.push_back(a);
    ++k;
    if (b <= 1e-14 * std::max(1.0, std::abs(a))) {
      out.converged = true;
      break;
    }
    if (k % 10 == 0) {
      const double theta = solve(k);
      if (std::abs(b * ritz(static_cast<Eigen::Index>(k - 1))) <= opt.rel_tol * std::max(1.0, std::abs(theta))) {
        out.converged = true;
        break;
      }
    }
    beta.push_back(b);
    prev = cur;
    cur = w / b;
    beta_prev = b;
  }
  solve(k);

  // second pass: replay and accumulate the Ritz vector
  Vector y = Vector::Zero(n);
  prev.setZero();
  cur = start;
  beta_prev = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    y += ritz(static_cast<Eigen::Index>(i)) * cur;
    if (i + 1 == k) break;
    A.apply(cur, w);
    w -= alpha[i] * cur + beta_prev * prev;
    prev = cur;
    cur = w / beta[i];
    beta_prev = beta[i];
  }
  y /= y.norm();
  A.apply(y, w);
  out.value = y.dot(w).real();
  out.vector = y;
  out.iterations = static_cast<long>(k);
  return out;
}

Matrix random_unitary(int n, Rng& rng) {
  Matrix Z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Z(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<Matrix> qr(Z);
  Matrix Q = qr.householderQ();
  Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    std::complex<double> d = R(j, j);
    if (std::abs(d) > 0) Q.col(j) *= d / std::abs(d);
  }
  return Q;
}

Matrix random_hermitian(int n, Rng& rng) {
  Matrix Z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Z(i, j) = rng.complex_normal();
  return (Z + Z.adjoint()) * 0.5;
}

std::vector<double> sorted_spectrum(const Matrix& A) { return hermitian_spectrum_auto(A).eigenvalues; }

}  // namespace isonorm
