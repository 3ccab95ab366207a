#include "isonorm/representations.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <deque>
#include <numeric>

#include "isonorm/constructions.hpp"
#include "isonorm/errors.hpp"

namespace isonorm {

namespace {

void require_unit(const FiniteGroupoid& G, Index x) {
  if (x < 0 || static_cast<std::size_t>(x) >= G.size() || !G.is_unit(x)) throw InputError("base point is not a unit");
}

double groupoid_reduced_norm(const FiniteGroupoid& G, const AlgebraElement& f) {
  double m = 0.0;
  for (Index x : G.units()) m = std::max(m, operator_norm(regular_rep_at(G, x, f).matrix));
  return m;
}

}  // namespace

MatrixRep regular_rep_at(const FiniteGroupoid& G, Index x, const AlgebraElement& f) {
  require_unit(G, x);
  if (f.host() && f.host().get() != &G) throw InputError("host mismatch between element and groupoid");
  const auto& basis = G.source_fiber(x);
  std::vector<int> pos(G.size(), -1);
  for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<int>(i);
  MatrixRep rep;
  rep.provenance = "rho_" + G.name(x);
  for (Index g : basis) rep.basis.push_back(G.name(g));
  const Eigen::Index n = static_cast<Eigen::Index>(basis.size());
  rep.matrix = Matrix::Zero(n, n);
  for (const auto& [h, c] : f.terms())
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Index g = basis[j];
      if (G.source(h) != G.range(g)) continue;
      rep.matrix(pos[G.compose(h, g)], static_cast<Eigen::Index>(j)) += c;
    }
  return rep;
}

MatrixRep group_regular_matrix(const IsotropyGroup& K, const AlgebraElement& h) {
  const int n = static_cast<int>(K.members.size());
  MatrixRep rep;
  rep.provenance = "lambda";
  rep.basis = K.group.names();
  rep.matrix = Matrix::Zero(n, n);
  for (const auto& [g, c] : h.terms()) {
    const int k = static_cast<std::size_t>(g) < K.position.size() ? K.position[g] : -1;
    if (k < 0) throw InputError("element is not supported on the isotropy group");
    for (int j = 0; j < n; ++j) rep.matrix(K.group.multiply(k, j), j) += c;
  }
  return rep;
}

MatrixRep quasi_regular_rep(const SchreierLevel& level, const WordElement& a) {
  const Eigen::Index n = static_cast<Eigen::Index>(level.cosets);
  MatrixRep rep;
  rep.provenance = "quasi-regular";
  for (std::size_t c = 0; c < level.cosets; ++c) rep.basis.push_back(std::to_string(c));
  rep.matrix = Matrix::Zero(n, n);
  for (const auto& [w, coeff] : a.terms)
    for (Eigen::Index c = 0; c < n; ++c) rep.matrix(level.act(w, static_cast<int>(c)), c) += coeff;
  return rep;
}

UnitaryRep trivial_rep(const FiniteGroup& K) {
  UnitaryRep r;
  r.dim = 1;
  r.images.assign(K.size(), Matrix::Identity(1, 1));
  return r;
}

UnitaryRep regular_unitary_rep(const FiniteGroup& K) {
  const int n = static_cast<int>(K.size());
  UnitaryRep r;
  r.dim = n;
  for (int k = 0; k < n; ++k) {
    Matrix L = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) L(K.multiply(k, j), j) = 1.0;
    r.images.push_back(std::move(L));
  }
  return r;
}

UnitaryRep rep_from_generators(const FiniteGroup& K, const std::vector<std::pair<int, Matrix>>& generators) {
  UnitaryRep r;
  if (generators.empty()) {
    if (K.size() != 1) throw InputError("no generator images for a nontrivial group");
    return trivial_rep(K);
  }
  r.dim = static_cast<int>(generators.front().second.rows());
  for (const auto& [k, M] : generators)
    if (M.rows() != r.dim || M.cols() != r.dim) throw InputError("generator images have inconsistent sizes");
  std::vector<bool> known(K.size(), false);
  r.images.assign(K.size(), Matrix());
  r.images[K.identity()] = Matrix::Identity(r.dim, r.dim);
  known[K.identity()] = true;
  std::deque<int> queue{K.identity()};
  while (!queue.empty()) {
    const int a = queue.front();
    queue.pop_front();
    for (const auto& [s, M] : generators) {
      const int b = K.multiply(s, a);
      Matrix img = M * r.images[a];
      if (!known[b]) {
        known[b] = true;
        r.images[b] = std::move(img);
        queue.push_back(b);
      } else if ((img - r.images[b]).cwiseAbs().maxCoeff() > 1e-12) {
        throw CheckFailure("representation is not a homomorphism", {K.name(s), K.name(a)});
      }
    }
  }
  for (std::size_t k = 0; k < K.size(); ++k)
    if (!known[k]) throw InputError("generator images do not generate the isotropy group");
  check_unitary_rep(K, r);
  return r;
}

void check_unitary_rep(const FiniteGroup& K, const UnitaryRep& rho, double tol) {
  if (rho.images.size() != K.size()) throw InputError("representation has the wrong number of images");
  const Matrix I = Matrix::Identity(rho.dim, rho.dim);
  for (std::size_t a = 0; a < K.size(); ++a) {
    const Matrix& A = rho.images[a];
    if (A.rows() != rho.dim || A.cols() != rho.dim) throw InputError("representation image has the wrong size");
    if ((A.adjoint() * A - I).cwiseAbs().maxCoeff() > tol) throw CheckFailure("representation is not unitary", {K.name(static_cast<int>(a))});
  }
  for (std::size_t a = 0; a < K.size(); ++a)
    for (std::size_t b = 0; b < K.size(); ++b) {
      const int ab = K.multiply(static_cast<int>(a), static_cast<int>(b));
      if ((rho.images[a] * rho.images[b] - rho.images[ab]).cwiseAbs().maxCoeff() > tol)
        throw CheckFailure("representation is not a homomorphism", {K.name(static_cast<int>(a)), K.name(static_cast<int>(b))});
    }
}

Matrix rep_of(const IsotropyGroup& K, const UnitaryRep& rho, const AlgebraElement& h) {
  Matrix M = Matrix::Zero(rho.dim, rho.dim);
  for (const auto& [g, c] : h.terms()) {
    const int k = static_cast<std::size_t>(g) < K.position.size() ? K.position[g] : -1;
    if (k >= 0) M += c * rho.images[k];
  }
  return M;
}

InductionData induction_data(const FiniteGroupoid& G, Index x) {
  require_unit(G, x);
  InductionData d{isotropy_group(G, x), {}, std::vector<int>(G.size(), -1)};
  for (Index g : G.source_fiber(x)) {
    const Index y = G.range(g);
    if (d.coset_of_unit[y] >= 0) continue;
    d.coset_of_unit[y] = 0;
    d.representatives.push_back(g);
  }
  std::sort(d.representatives.begin(), d.representatives.end(),
            [&](Index a, Index b) { return G.range(a) < G.range(b); });
  for (std::size_t c = 0; c < d.representatives.size(); ++c) d.coset_of_unit[G.range(d.representatives[c])] = static_cast<int>(c);
  return d;
}

MatrixRep induce(const FiniteGroupoid& G, Index x, const UnitaryRep& rho, const AlgebraElement& f) {
  const InductionData d = induction_data(G, x);
  if (rho.images.size() != d.K.group.size()) throw InputError("representation does not match the isotropy group");
  check_unitary_rep(d.K.group, rho, 1e-9);
  const int m = rho.dim;
  const Eigen::Index n = static_cast<Eigen::Index>(d.representatives.size()) * m;
  MatrixRep rep;
  rep.provenance = "Ind_" + G.name(x);
  for (Index c : d.representatives)
    for (int i = 0; i < m; ++i) rep.basis.push_back(G.name(c) + "#" + std::to_string(i));
  rep.matrix = Matrix::Zero(n, n);
  // (Ind rho)(f) xi (c) = sum_h f(h) xi(h^-1 c), and xi(c'k) = rho(k)* xi(c')
  for (std::size_t row = 0; row < d.representatives.size(); ++row) {
    const Index c = d.representatives[row];
    for (const auto& [h, coeff] : f.terms()) {
      if (G.range(h) != G.range(c)) continue;
      const Index mm = G.compose(G.inverse(h), c);
      const int col = d.coset_of_unit[G.range(mm)];
      const Index cp = d.representatives[col];
      const Index k = G.compose(G.inverse(cp), mm);
      rep.matrix.block(static_cast<Eigen::Index>(row) * m, static_cast<Eigen::Index>(col) * m, m, m) +=
          coeff * rho.images[d.K.position[k]].adjoint();
    }
  }
  return rep;
}

Matrix coisometry(const FiniteGroupoid& G, Index x, const UnitaryRep& rho) {
  const InductionData d = induction_data(G, x);
  const int m = rho.dim;
  Matrix v = Matrix::Zero(m, static_cast<Eigen::Index>(d.representatives.size()) * m);
  const int c0 = d.coset_of_unit[x];
  const Index k0 = G.compose(G.inverse(d.representatives[c0]), x);
  v.block(0, static_cast<Eigen::Index>(c0) * m, m, m) = rho.images[d.K.position[k0]].adjoint();
  return v;
}

double compression_identity_check(const FiniteGroupoid& G, Index x, const UnitaryRep& rho, const AlgebraElement& f) {
  const Matrix ind = induce(G, x, rho, f).matrix;
  const Matrix v = coisometry(G, x, rho);
  const Matrix lhs = v * ind * v.adjoint();
  const Matrix rhs = rep_of(isotropy_group(G, x), rho, restrict_to_isotropy(f, x));
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

GnsTriple gns(const FiniteGroup& K, const std::vector<Complex>& phi, double cutoff) {
  const int n = static_cast<int>(K.size());
  if (static_cast<int>(phi.size()) != n) throw InputError("positive-type function has the wrong number of values");
  Matrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = phi[K.multiply(K.inverse(i), j)];
  if (hermitian_defect(M) > 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff()))
    throw InputError("function is not positive-type: phi(k^-1) != conj phi(k)");
  const Eigensystem es = hermitian_eigensystem(M);
  if (es.values.front() < -cutoff) throw InputError("function is not positive-type: Gram matrix has a negative eigenvalue");
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (es.values[i] > cutoff) keep.push_back(i);
  const int r = static_cast<int>(keep.size());
  Matrix J(r, n), Jp(n, r);
  for (int a = 0; a < r; ++a) {
    const double s = std::sqrt(es.values[keep[a]]);
    J.row(a) = s * es.vectors.col(keep[a]).adjoint();
    Jp.col(a) = es.vectors.col(keep[a]) / s;
  }
  GnsTriple t;
  t.pi.dim = r;
  for (int k = 0; k < n; ++k) {
    Matrix L = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) L(K.multiply(k, j), j) = 1.0;
    t.pi.images.push_back(J * L * Jp);
  }
  t.xi = J.col(K.identity());
  return t;
}

CyclicityReport gns_cyclicity_check(const GroupoidPtr& host, Index x, const std::vector<Complex>& phi) {
  const FiniteGroupoid& G = *host;
  const IsotropyGroup K = isotropy_group(G, x);
  const GnsTriple t = gns(K.group, phi);
  // the Gram-derived images are unitary only up to the cutoff
  check_unitary_rep(K.group, t.pi, 1e-9);
  const Matrix v = coisometry(G, x, t.pi);
  const Vector start = v.adjoint() * t.xi;
  CyclicityReport rep;
  rep.dimension = static_cast<int>(start.size());
  if (rep.dimension == 0) return rep;
  Matrix span(rep.dimension, static_cast<Eigen::Index>(G.size()));
  for (std::size_t g = 0; g < G.size(); ++g)
    span.col(static_cast<Eigen::Index>(g)) = induce(G, x, t.pi, AlgebraElement::delta(host, static_cast<Index>(g))).matrix * start;
  Eigen::FullPivLU<Matrix> lu(span);
  lu.setThreshold(1e-9);
  rep.rank = static_cast<int>(lu.rank());
  rep.cyclic = rep.rank == rep.dimension;
  return rep;
}

CoactionReport coaction_isometry_check(const FiniteGroupoid& G, const Grading& phi, const AlgebraElement& f) {
  if (!phi.group || !phi.group->is_finite()) throw InputError("coaction check needs a finite grading group");
  const GroupoidPtr gamma = group_groupoid(phi.group->finite(), "Gamma");
  const GroupoidPtr P = product_groupoid(G, *gamma);
  AlgebraElement d(P);
  for (const auto& [g, c] : f.terms()) d.set(P->index("(" + G.name(g) + "," + phi.label[g] + ")"), c);
  return {groupoid_reduced_norm(G, f), groupoid_reduced_norm(*P, d)};
}

BlockDecomposition graded_block_decomposition(const FiniteGroupoid& G, const Grading& phi, const BisectionFamily& U,
                                              Index y, const AlgebraElement* f) {
  require_unit(G, y);
  const auto& fiber = G.source_fiber(y);
  std::vector<int> pos(G.size(), -1);
  for (std::size_t i = 0; i < fiber.size(); ++i) pos[fiber[i]] = static_cast<int>(i);
  std::vector<int> parent(fiber.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& [g, set] : U.sets)
    for (Index u : set)
      for (std::size_t i = 0; i < fiber.size(); ++i) {
        const Index k = fiber[i];
        if (G.source(u) != G.range(k)) continue;
        const int a = find(static_cast<int>(i)), b = find(pos[G.compose(u, k)]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  BlockDecomposition out;
  std::vector<int> class_of(fiber.size(), -1);
  for (std::size_t i = 0; i < fiber.size(); ++i) {
    const int root = find(static_cast<int>(i));
    if (class_of[root] < 0) {
      class_of[root] = static_cast<int>(out.classes.size());
      out.classes.emplace_back();
    }
    class_of[i] = class_of[root];
    out.classes[class_of[i]].push_back(fiber[i]);
  }
  for (const auto& cls : out.classes) {
    std::vector<std::string> labels;
    for (Index g : cls) labels.push_back(phi.label[g]);
    std::sort(labels.begin(), labels.end());
    out.grading_injective.push_back(std::adjacent_find(labels.begin(), labels.end()) == labels.end());
  }
  if (f) {
    const Matrix M = regular_rep_at(G, y, *f).matrix;
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      for (Eigen::Index j = 0; j < M.cols(); ++j)
        if (M(i, j) != Complex(0.0) && class_of[i] != class_of[j]) out.block_diagonal = false;
  }
  return out;
}

}  // namespace isonorm
