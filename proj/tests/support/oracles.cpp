#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace isonorm::testing {

Matrix oracle_regular_matrix(const FiniteGroupoid& G, Index x, const AlgebraElement& f) {
  std::vector<Index> basis;
  for (std::size_t g = 0; g < G.size(); ++g)
    if (G.source(static_cast<Index>(g)) == x) basis.push_back(static_cast<Index>(g));
  std::map<Index, int> pos;
  for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<int>(i);
  const int n = static_cast<int>(basis.size());
  Matrix M = Matrix::Zero(n, n);
  for (const auto& [h, c] : f.terms())
    for (Index g : basis) {
      const Index hg = G.compose(h, g);
      if (hg >= 0) M(pos.at(hg), pos.at(g)) += c;
    }
  return M;
}

Matrix oracle_isotropy_matrix(const FiniteGroupoid& G, Index x, const AlgebraElement& h) {
  std::vector<Index> K;
  for (std::size_t g = 0; g < G.size(); ++g)
    if (G.source(static_cast<Index>(g)) == x && G.range(static_cast<Index>(g)) == x) K.push_back(static_cast<Index>(g));
  const int n = static_cast<int>(K.size());
  Matrix M = Matrix::Zero(n, n);
  // (lambda(h) e_j)_i = h(k_i k_j^-1)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = h(G.compose(K[i], G.inverse(K[j])));
  return M;
}

double oracle_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues()(0);
}

double oracle_reduced_norm(const FiniteGroupoid& G, const AlgebraElement& f) {
  double m = 0.0;
  for (Index x : G.units()) m = std::max(m, oracle_norm(oracle_regular_matrix(G, x, f)));
  return m;
}

std::vector<double> oracle_hermitian_spectrum(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<double> charpoly_roots(const Matrix& A, double tol) {
  const int n = static_cast<int>(A.rows());
  auto p = [&](double t) {
    Matrix M = Matrix::Identity(n, n) * t - A;
    return M.fullPivLu().determinant().real();
  };
  double bound = 0.0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, A.row(i).cwiseAbs().sum());
  bound += 1.0;
  std::vector<double> roots;
  const int steps = 20000;
  double prev_t = -bound, prev_v = p(prev_t);
  for (int s = 1; s <= steps; ++s) {
    const double t = -bound + 2.0 * bound * s / steps;
    const double v = p(t);
    if ((prev_v < 0) != (v < 0)) {
      double lo = prev_t, hi = t, flo = prev_v;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = p(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_t = t;
    prev_v = v;
  }
  return roots;
}

namespace {

// Sphere sizes 1, 4, 12, 36, ... and normalized radial couplings.
double coupling(int n) { return n == 0 ? 2.0 : std::sqrt(3.0); }

}  // namespace

double f2_radial_compression_norm(int R) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(R + 1, R + 1);
  for (int n = 0; n < R; ++n) T(n, n + 1) = T(n + 1, n) = coupling(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(R)));
}

double f2_radial_ball_bound(int R) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(R + 2, R + 1);
  for (int n = 0; n <= R; ++n) {
    B(n + 1, n) = coupling(n);
    if (n > 0) B(n - 1, n) = coupling(n - 1);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  return svd.singularValues()(0);
}

double oracle_gns_min_eigenvalue(const StateFunctional& phi) {
  const FiniteGroupoid& G = *phi.host();
  double m = INFINITY;
  for (Index y : G.units()) {
    std::vector<Index> fib;
    for (std::size_t g = 0; g < G.size(); ++g)
      if (G.range(static_cast<Index>(g)) == y) fib.push_back(static_cast<Index>(g));
    const int n = static_cast<int>(fib.size());
    Matrix M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = phi.weights()[G.compose(G.inverse(fib[i]), fib[j])];
    if ((M - M.adjoint()).cwiseAbs().maxCoeff() > 1e-12) return -INFINITY;
    m = std::min(m, oracle_hermitian_spectrum(M).front());
  }
  return m;
}

std::string oracle_first_violation(const FiniteGroupoid& G, const Grading& phi, const BisectionFamily& U, int max_len) {
  const Index x = U.x;
  std::vector<Index> iso;
  for (std::size_t g = 0; g < G.size(); ++g)
    if (G.range(static_cast<Index>(g)) == x && G.source(static_cast<Index>(g)) == x) iso.push_back(static_cast<Index>(g));
  auto set_of = [&](Index g) -> std::set<Index> {
    auto it = U.sets.find(g);
    if (it == U.sets.end()) return {};
    return {it->second.begin(), it->second.end()};
  };
  for (Index g : iso) {
    const auto s = set_of(g);
    if (!s.count(g)) return "(1)";
    for (Index a : s)
      if (phi.label[a] != phi.label[g]) return "(1)";
  }
  std::set<Index> units(G.units().begin(), G.units().end());
  if (set_of(x) != units) return "(2)";
  for (Index g : iso) {
    std::set<Index> inv;
    for (Index a : set_of(g)) inv.insert(G.inverse(a));
    if (set_of(G.inverse(g)) != inv) return "(2)";
  }
  bool bad = false;
  std::function<void(const std::set<Index>&, Index, int)> walk = [&](const std::set<Index>& S, Index k, int len) {
    if (bad) return;
    if (k == x)
      for (Index a : S)
        if (!G.is_unit(a)) bad = true;
    if (len == max_len) return;
    for (Index g : iso) {
      std::set<Index> next;
      for (Index a : S)
        for (Index b : set_of(g)) {
          const Index ab = G.compose(a, b);
          if (ab >= 0) next.insert(ab);
        }
      walk(next, G.compose(k, g), len + 1);
    }
  };
  for (Index g : iso) walk(set_of(g), g, 1);
  return bad ? "(3)" : "";
}

bool brute_force_axioms(const GroupoidDescription& d) {
  std::map<std::string, int> at;
  for (std::size_t i = 0; i < d.elements.size(); ++i)
    if (!at.emplace(d.elements[i], static_cast<int>(i)).second) return false;
  const int n = static_cast<int>(d.elements.size());
  std::vector<int> r(n, -1), s(n, -1);
  std::vector<char> unit(n, 0);
  for (const auto& u : d.units) {
    if (!at.count(u)) return false;
    unit[at[u]] = 1;
  }
  for (int i = 0; i < n; ++i) {
    const auto& e = d.elements[i];
    if (!d.range.count(e) || !d.source.count(e) || !at.count(d.range.at(e)) || !at.count(d.source.at(e))) return false;
    r[i] = at[d.range.at(e)];
    s[i] = at[d.source.at(e)];
    if (!unit[r[i]] || !unit[s[i]]) return false;
    if (unit[i] && (r[i] != i || s[i] != i)) return false;
  }
  std::vector<int> c(static_cast<std::size_t>(n) * n, -1);
  for (const auto& t : d.compose) {
    if (!at.count(t[0]) || !at.count(t[1]) || !at.count(t[2])) return false;
    int& slot = c[static_cast<std::size_t>(at[t[0]]) * n + at[t[1]]];
    if (slot >= 0 && slot != at[t[2]]) return false;
    slot = at[t[2]];
  }
  auto mul = [&](int a, int b) { return c[static_cast<std::size_t>(a) * n + b]; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const bool composable = s[a] == r[b];
      const int ab = mul(a, b);
      if (composable != (ab >= 0)) return false;
      if (ab >= 0 && (r[ab] != r[a] || s[ab] != s[b])) return false;
    }
  for (int a = 0; a < n; ++a) {
    if (mul(r[a], a) != a || mul(a, s[a]) != a) return false;
    bool has_inverse = false;
    for (int b = 0; b < n && !has_inverse; ++b) has_inverse = mul(a, b) == r[a] && mul(b, a) == s[a];
    if (!has_inverse) return false;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int ab = mul(a, b);
      if (ab < 0) continue;
      for (int e = 0; e < n; ++e) {
        const int be = mul(b, e);
        if (be < 0) continue;
        if (mul(ab, e) != mul(a, be)) return false;
      }
    }
  return true;
}

}  // namespace isonorm::testing
