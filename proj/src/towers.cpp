#include "isonorm/towers.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <map>
#include <unordered_map>

#include "isonorm/constructions.hpp"
#include "isonorm/errors.hpp"
#include "isonorm/representations.hpp"

namespace isonorm {

namespace {

std::string pack_matrix(const Mat2& m) {
  std::string s(sizeof(Mat2), '\0');
  std::memcpy(s.data(), m.data(), sizeof(Mat2));
  return s;
}

Mat2 unpack_matrix(const std::string& s) {
  Mat2 m;
  std::memcpy(m.data(), s.data(), sizeof(Mat2));
  return m;
}

std::string pack_index(int i) {
  std::string s(sizeof(int), '\0');
  std::memcpy(s.data(), &i, sizeof(int));
  return s;
}

int unpack_index(const std::string& s) {
  int i;
  std::memcpy(&i, s.data(), sizeof(int));
  return i;
}

Mat2 mat_inverse(const Mat2& m) { return {m[3], -m[1], -m[2], m[0]}; }

std::int64_t mod(std::int64_t a, std::int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

// Sparse operator sum_t c_t P_t given by (row, col) pairs per term.
struct SparseTerms {
  std::size_t n = 0;
  std::vector<Complex> coeff;
  std::vector<std::vector<std::pair<int, int>>> entries;  // (row, col)

  LinearOperator op() const {
    LinearOperator L;
    L.rows = L.cols = n;
    L.apply = [this](const Vector& v, Vector& out) {
      out.setZero(static_cast<Eigen::Index>(n));
      for (std::size_t t = 0; t < coeff.size(); ++t)
        for (const auto& [r, c] : entries[t]) out(r) += coeff[t] * v(c);
    };
    L.apply_adjoint = [this](const Vector& v, Vector& out) {
      out.setZero(static_cast<Eigen::Index>(n));
      for (std::size_t t = 0; t < coeff.size(); ++t) {
        const Complex cc = std::conj(coeff[t]);
        for (const auto& [r, c] : entries[t]) out(c) += cc * v(r);
      }
    };
    return L;
  }
};

Vector top_right_singular_vector(const Matrix& A) {
  const Matrix G = A.adjoint() * A;
  const Eigensystem es = hermitian_eigensystem((G + G.adjoint()) * 0.5);
  return es.vectors.col(es.vectors.cols() - 1);
}

}  // namespace

Mat2 mat_multiply(const Mat2& a, const Mat2& b) {
  Mat2 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      std::int64_t x, y, z;
      if (__builtin_mul_overflow(a[2 * i], b[j], &x) || __builtin_mul_overflow(a[2 * i + 1], b[2 + j], &y) ||
          __builtin_add_overflow(x, y, &z))
        throw InputError("integer matrix product overflows 64 bits");
      c[2 * i + j] = z;
    }
  return c;
}

GroupModel GroupModel::free(FreeGroup alphabet) {
  GroupModel g;
  g.backend_ = Backend::Free;
  g.alphabet_ = std::move(alphabet);
  return g;
}

GroupModel GroupModel::integer_matrix(FreeGroup alphabet, std::vector<Mat2> generators) {
  if (generators.size() != alphabet.rank()) throw InputError("one matrix per generator required");
  for (const auto& m : generators)
    if (m[0] * m[3] - m[1] * m[2] != 1) throw InputError("generator matrix does not have determinant 1");
  GroupModel g;
  g.backend_ = Backend::IntegerMatrix;
  g.alphabet_ = std::move(alphabet);
  g.matrices_ = std::move(generators);
  return g;
}

GroupModel GroupModel::finite_table(FreeGroup alphabet, GroupPtr group, std::vector<int> generators) {
  if (generators.size() != alphabet.rank()) throw InputError("one group element per generator required");
  for (int k : generators)
    if (k < 0 || static_cast<std::size_t>(k) >= group->size()) throw InputError("generator is not a group element");
  GroupModel g;
  g.backend_ = Backend::FiniteTable;
  g.alphabet_ = std::move(alphabet);
  g.table_ = std::move(group);
  g.table_gens_ = std::move(generators);
  return g;
}

GroupModel::Element GroupModel::identity() const {
  switch (backend_) {
    case Backend::Free:
      return {};
    case Backend::IntegerMatrix:
      return pack_matrix({1, 0, 0, 1});
    case Backend::FiniteTable:
      return pack_index(table_->identity());
  }
  return {};
}

GroupModel::Element GroupModel::letter(int l) const {
  if (l == 0 || static_cast<std::size_t>(std::abs(l)) > rank()) throw InputError("word uses unknown generator");
  switch (backend_) {
    case Backend::Free:
      return std::string(1, static_cast<char>(l));
    case Backend::IntegerMatrix: {
      const Mat2& m = matrices_[std::abs(l) - 1];
      return pack_matrix(l > 0 ? m : mat_inverse(m));
    }
    case Backend::FiniteTable: {
      const int k = table_gens_[std::abs(l) - 1];
      return pack_index(l > 0 ? k : table_->inverse(k));
    }
  }
  return {};
}

GroupModel::Element GroupModel::multiply(const Element& a, const Element& b) const {
  switch (backend_) {
    case Backend::Free: {
      std::size_t k = 0;
      while (k < a.size() && k < b.size() && a[a.size() - 1 - k] == -b[k]) ++k;
      Element out(a, 0, a.size() - k);
      out.append(b, k, std::string::npos);
      return out;
    }
    case Backend::IntegerMatrix:
      return pack_matrix(mat_multiply(unpack_matrix(a), unpack_matrix(b)));
    case Backend::FiniteTable:
      return pack_index(table_->multiply(unpack_index(a), unpack_index(b)));
  }
  return {};
}

GroupModel::Element GroupModel::inverse(const Element& a) const {
  switch (backend_) {
    case Backend::Free: {
      Element out(a.rbegin(), a.rend());
      for (char& c : out) c = static_cast<char>(-c);
      return out;
    }
    case Backend::IntegerMatrix:
      return pack_matrix(mat_inverse(unpack_matrix(a)));
    case Backend::FiniteTable:
      return pack_index(table_->inverse(unpack_index(a)));
  }
  return {};
}

GroupModel::Element GroupModel::evaluate(const Word& w) const {
  Element e = identity();
  for (int l : w) e = multiply(e, letter(l));
  return e;
}

std::string GroupModel::format(const Element& a) const {
  switch (backend_) {
    case Backend::Free: {
      Word w(a.begin(), a.end());
      return alphabet_.format(w);
    }
    case Backend::IntegerMatrix: {
      const Mat2 m = unpack_matrix(a);
      return "[[" + std::to_string(m[0]) + "," + std::to_string(m[1]) + "],[" + std::to_string(m[2]) + "," +
             std::to_string(m[3]) + "]]";
    }
    case Backend::FiniteTable:
      return table_->name(unpack_index(a));
  }
  return {};
}

QuotientTower QuotientTower::make(GroupModel group, std::vector<SchreierLevel> levels, int sample_length) {
  QuotientTower t;
  const std::size_t k = group.rank();
  for (std::size_t n = 0; n < levels.size(); ++n) {
    SchreierLevel& L = levels[n];
    const std::string where = "level " + std::to_string(n + 1);
    if (L.cosets == 0) throw InputError("level data inconsistent: " + where + " has no cosets");
    if (L.images.size() != k) throw InputError("level data inconsistent: " + where + " needs one image per generator");
    L.finalize();
    std::vector<char> seen(L.cosets, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
      const int c = queue.front();
      queue.pop_front();
      for (int l = 1; l <= static_cast<int>(k); ++l)
        for (int d : {L.act_letter(l, c), L.act_letter(-l, c)})
          if (!seen[d]) {
            seen[d] = 1;
            ++reached;
            queue.push_back(d);
          }
    }
    if (reached != L.cosets) throw InputError("level data inconsistent: " + where + " is not transitive");
  }
  for (std::size_t n = 0; n + 1 < levels.size(); ++n) {
    const SchreierLevel& lo = levels[n];
    const SchreierLevel& hi = levels[n + 1];
    const std::string where = "levels " + std::to_string(n + 1) + " and " + std::to_string(n + 2);
    if (hi.cosets < lo.cosets) throw InputError("level data inconsistent: " + where + " shrink");
    std::vector<int> p(hi.cosets, -1);
    p[0] = 0;
    std::deque<int> queue{0};
    while (!queue.empty()) {
      const int c = queue.front();
      queue.pop_front();
      for (int l = 1; l <= static_cast<int>(k); ++l)
        for (int s : {l, -l}) {
          const int d = hi.act_letter(s, c), e = lo.act_letter(s, p[c]);
          if (p[d] < 0) {
            p[d] = e;
            queue.push_back(d);
          } else if (p[d] != e) {
            throw InputError("level data inconsistent: " + where + " are not nested");
          }
        }
    }
    t.projection_.push_back(std::move(p));
  }
  if (group.backend() != Backend::Free && !levels.empty()) {
    // words equal in the group must act equally
    std::unordered_map<std::string, Word> first;
    for (const Word& w : group.alphabet().ball(sample_length)) {
      auto [it, fresh] = first.emplace(group.evaluate(w), w);
      if (fresh) continue;
      for (std::size_t n = 0; n < levels.size(); ++n)
        for (std::size_t c = 0; c < levels[n].cosets; ++c)
          if (levels[n].act(w, static_cast<int>(c)) != levels[n].act(it->second, static_cast<int>(c)))
            throw InputError("level data inconsistent: level " + std::to_string(n + 1) + " violates the relation " +
                             group.alphabet().format(w) + " = " + group.alphabet().format(it->second));
    }
  }
  t.group_ = std::move(group);
  t.levels_ = std::move(levels);
  return t;
}

SchreierLevel cyclic_level(int n) {
  if (n < 1) throw InputError("cyclic level needs n >= 1");
  SchreierLevel L;
  L.cosets = static_cast<std::size_t>(n);
  L.images.assign(1, std::vector<int>(n));
  for (int c = 0; c < n; ++c) L.images[0][c] = (c + 1) % n;
  L.finalize();
  return L;
}

SchreierLevel congruence_level(const std::vector<Mat2>& generators, std::int64_t modulus, std::size_t cap) {
  if (modulus < 2) throw InputError("congruence modulus must be at least 2");
  auto reduce = [&](Mat2 m) {
    for (auto& v : m) v = mod(v, modulus);
    return m;
  };
  std::vector<Mat2> gens;
  for (const auto& g : generators) gens.push_back(reduce(g));
  std::map<Mat2, int> at;
  std::vector<Mat2> elems{reduce({1, 0, 0, 1})};
  at[elems[0]] = 0;
  for (std::size_t head = 0; head < elems.size(); ++head)
    for (const auto& g : gens) {
      const Mat2 m = reduce(mat_multiply(g, elems[head]));
      if (at.count(m)) continue;
      if (elems.size() >= cap) throw InputError("congruence quotient exceeds the size cap");
      at[m] = static_cast<int>(elems.size());
      elems.push_back(m);
    }
  SchreierLevel L;
  L.cosets = elems.size();
  L.images.assign(gens.size(), std::vector<int>(elems.size()));
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t c = 0; c < elems.size(); ++c) L.images[k][c] = at.at(reduce(mat_multiply(gens[k], elems[c])));
  L.finalize();
  return L;
}

NormSequence quasi_norm_sequence(const QuotientTower& tower, const WordElement& a, std::size_t N, const TowerOptions& opt) {
  if (N > tower.levels().size()) throw InputError("requested more levels than the tower has");
  for (const auto& [w, c] : a.terms)
    for (int l : w)
      if (l == 0 || static_cast<std::size_t>(std::abs(l)) > tower.group().rank()) throw InputError("word uses unknown generator");
  NormSequence seq;
  Vector prev;
  for (std::size_t n = 0; n < N; ++n) {
    const SchreierLevel& L = tower.levels()[n];
    const bool next_sparse = n + 1 < N && tower.levels()[n + 1].cosets > static_cast<std::size_t>(opt.dense_limit);
    Vector warm;
    if (n > 0 && prev.size() > 0) {
      // constant on fibres of the projection: an isometric, equivariant lift
      const auto& p = tower.projection(n - 1);
      std::vector<int> fibre(tower.levels()[n - 1].cosets, 0);
      for (int q : p) ++fibre[q];
      warm.resize(static_cast<Eigen::Index>(L.cosets));
      for (std::size_t c = 0; c < L.cosets; ++c) warm(c) = prev(p[c]) / std::sqrt(static_cast<double>(fibre[p[c]]));
    }
    double value;
    if (L.cosets <= static_cast<std::size_t>(opt.dense_limit)) {
      const Matrix M = quasi_regular_rep(L, a).matrix;
      value = operator_norm(M);
      seq.methods.push_back("dense");
      if (next_sparse) prev = top_right_singular_vector(M);
    } else {
      SparseTerms S;
      S.n = L.cosets;
      for (const auto& [w, c] : a.terms) {
        S.coeff.push_back(c);
        std::vector<std::pair<int, int>> e(L.cosets);
        for (std::size_t x = 0; x < L.cosets; ++x) e[x] = {L.act(w, static_cast<int>(x)), static_cast<int>(x)};
        S.entries.push_back(std::move(e));
      }
      PowerOptions po = opt.power;
      po.jobs = std::max(po.jobs, opt.jobs);
      const PowerResult r = power_norm(S.op(), po, warm.size() > 0 ? &warm : nullptr);
      value = r.value;
      prev = r.vector;
      seq.methods.push_back(r.converged ? "power" : "power (iteration cap)");
    }
    if (!seq.values.empty() && value < seq.values.back() - opt.tol * std::max(1.0, seq.values.back())) {
      seq.nondecreasing = false;
      seq.values.push_back(value);
      throw CheckFailure("quasi-norm sequence decreased", {"level " + std::to_string(n + 1), std::to_string(seq.values[n - 1]),
                                                           std::to_string(value)});
    }
    seq.values.push_back(value);
  }
  return seq;
}

EstimateReport e_norm_estimate(const QuotientTower& tower, const WordElement& a, std::size_t N, double stall_tol,
                               const TowerOptions& opt) {
  EstimateReport r;
  r.sequence = quasi_norm_sequence(tower, a, N, opt);
  if (!r.sequence.values.empty()) r.estimate = r.sequence.values.back();
  const auto& v = r.sequence.values;
  r.converged = v.size() >= 2 && std::abs(v[v.size() - 1] - v[v.size() - 2]) <= stall_tol;
  return r;
}

BallReport reduced_norm_lower_bound(const GroupModel& group, const WordElement& a, int R, const TowerOptions& opt) {
  if (R < 0) throw InputError("radius must be nonnegative");
  // b = a* a, merged by group element
  std::map<GroupModel::Element, Complex> b;
  for (const auto& [w1, c1] : a.terms)
    for (const auto& [w2, c2] : a.terms) b[group.multiply(group.inverse(group.evaluate(w1)), group.evaluate(w2))] += std::conj(c1) * c2;
  std::vector<GroupModel::Element> ball{group.identity()};
  std::unordered_map<GroupModel::Element, int> at;
  at.reserve(1024);
  at.emplace(ball[0], 0);
  std::vector<GroupModel::Element> gens;
  for (int l = 1; l <= static_cast<int>(group.rank()); ++l) {
    gens.push_back(group.letter(l));
    gens.push_back(group.letter(-l));
  }
  std::size_t begin = 0;
  for (int r = 1; r <= R; ++r) {
    const std::size_t end = ball.size();
    for (std::size_t i = begin; i < end; ++i)
      for (const auto& s : gens) {
        GroupModel::Element y = group.multiply(s, ball[i]);
        if (at.count(y)) continue;
        if (ball.size() >= opt.ball_cap) throw InputError("ball size exceeds the configured memory cap");
        at.emplace(y, static_cast<int>(ball.size()));
        ball.push_back(std::move(y));
      }
    if (ball.size() == end) break;
    begin = end;
  }
  BallReport rep;
  rep.ball_size = ball.size();
  SparseTerms S;
  S.n = ball.size();
  for (const auto& [z, c] : b) {
    if (c == Complex(0.0)) continue;
    std::vector<std::pair<int, int>> e;
    for (std::size_t x = 0; x < ball.size(); ++x) {
      auto it = at.find(group.multiply(z, ball[x]));
      if (it != at.end()) e.emplace_back(it->second, static_cast<int>(x));
    }
    S.coeff.push_back(c);
    S.entries.push_back(std::move(e));
  }
  if (ball.size() <= static_cast<std::size_t>(opt.dense_limit)) {
    Matrix M = Matrix::Zero(static_cast<Eigen::Index>(S.n), static_cast<Eigen::Index>(S.n));
    for (std::size_t t = 0; t < S.coeff.size(); ++t)
      for (const auto& [r, c] : S.entries[t]) M(r, c) += S.coeff[t];
    rep.value = std::sqrt(operator_norm(M));
    rep.method = "dense compression of a*a";
  } else {
    LanczosOptions lo;
    lo.seed = opt.power.seed;
    const PowerResult r = lanczos_top(S.op(), lo);
    rep.value = std::sqrt(std::max(0.0, r.value));
    rep.method = r.converged ? "Lanczos on the compression of a*a" : "Lanczos on the compression of a*a (step cap)";
  }
  return rep;
}

SchurReport schur_upper_bound(const GroupModel& group, const WordElement& a) {
  if (group.backend() != Backend::Free) throw InputError("Schur bound needs the free-group backend");
  if (!a.is_self_adjoint(1e-12)) throw InputError("Schur bound needs a self-adjoint element");
  if (a.terms.empty()) return {0.0, 1.0};
  const FreeGroup& F = group.alphabet();
  // exponents |w^-1 x| - |x| (rows) and |w x| - |x| (columns) for x up to length max|w| + 1
  std::vector<std::vector<int>> rows, cols;
  std::vector<double> mag;
  for (const auto& t : a.terms) mag.push_back(std::abs(t.second));
  for (const Word& x : F.ball(a.max_length() + 1)) {
    std::vector<int> r, c;
    for (const auto& t : a.terms) {
      r.push_back(static_cast<int>(FreeGroup::multiply(FreeGroup::inverse(t.first), x).size()) - static_cast<int>(x.size()));
      c.push_back(static_cast<int>(FreeGroup::multiply(t.first, x).size()) - static_cast<int>(x.size()));
    }
    rows.push_back(std::move(r));
    cols.push_back(std::move(c));
  }
  auto bound = [&](double r) {
    double m = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double sr = 0.0, sc = 0.0;
      for (std::size_t t = 0; t < mag.size(); ++t) {
        sr += mag[t] * std::pow(r, rows[i][t]);
        sc += mag[t] * std::pow(r, cols[i][t]);
      }
      m = std::max({m, sr, sc});
    }
    return m;
  };
  SchurReport best{bound(1.0), 1.0};
  for (int k = 1; k <= 100; ++k) {
    const double r = 0.01 * k;
    const double v = bound(r);
    if (v < best.value) best = {v, r};
  }
  const double centre = best.r;
  for (int k = -100; k <= 100; ++k) {
    const double r = centre + 1e-4 * k;
    if (r <= 0.0 || r > 1.0) continue;
    const double v = bound(r);
    if (v < best.value) best = {v, r};
  }
  return best;
}

Verdict exoticness_verdict(const QuotientTower& tower, const WordElement& a, std::size_t N, int R, const TowerOptions& opt) {
  Verdict v;
  const EstimateReport e = e_norm_estimate(tower, a, N, opt.tol, opt);
  v.e_lower = e.estimate;
  v.e_converged = e.converged;
  v.r_lower = reduced_norm_lower_bound(tower.group(), a, R, opt).value;
  if (tower.group().backend() != Backend::Free) return v;
  v.r_upper = schur_upper_bound(tower.group(), a).value;
  if (*v.r_lower > *v.r_upper + 1e-6)
    throw CheckFailure("reduced-norm lower bound exceeds the Schur upper bound", {std::to_string(*v.r_lower), std::to_string(*v.r_upper)});
  v.decidable = true;
  v.exotic = v.e_lower > *v.r_upper + 1e-6;
  return v;
}

Truncation bundle_truncation(const QuotientTower& tower, std::size_t N, std::size_t element_cap) {
  if (N > tower.levels().size()) throw InputError("requested more levels than the tower has");
  Truncation out;
  std::vector<GroupoidPtr> parts;
  std::vector<std::string> prefixes;
  std::size_t total = 0;
  for (std::size_t n = 0; n < N; ++n) {
    const SchreierLevel& L = tower.levels()[n];
    std::vector<std::pair<std::string, FiniteGroup::Perm>> gens;
    for (std::size_t k = 0; k < L.images.size(); ++k)
      gens.emplace_back(std::string(1, tower.group().alphabet().generators()[k]), L.images[k]);
    const std::size_t room = element_cap > total ? (element_cap - total) / L.cosets : 0;
    GroupPtr K;
    try {
      K = std::make_shared<FiniteGroup>(FiniteGroup::from_permutations(static_cast<int>(L.cosets), gens, std::max<std::size_t>(room, 1)));
    } catch (const InputError&) {
      throw InputError("level " + std::to_string(n + 1) + " is not finite within the element cap");
    }
    total += K->size() * L.cosets;
    if (total > element_cap) throw InputError("truncation exceeds the element cap");
    GroupAction act;
    act.group = K;
    for (std::size_t c = 0; c < L.cosets; ++c) act.points.push_back("c" + std::to_string(c));
    act.image = *K->permutations();
    parts.push_back(transformation_groupoid(act).groupoid);
    prefixes.push_back(std::to_string(n + 1) + ":");
    out.block_sizes.push_back(static_cast<int>(L.cosets));
  }
  out.groupoid = disjoint_union(parts, prefixes);
  const FiniteGroupoid& G = *out.groupoid;
  for (std::size_t n = 0; n < N; ++n) {
    const std::string pre = prefixes[n];
    const Index x = G.index(pre + "c0");
    std::vector<Index> members;
    for (std::size_t g = 0; g < G.size(); ++g)
      if (G.name(static_cast<Index>(g)).rfind(pre, 0) == 0) members.push_back(static_cast<Index>(g));
    const int d = out.block_sizes[n];
    Matrix span(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(members.size()));
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Matrix M = regular_rep_at(G, x, AlgebraElement::delta(out.groupoid, members[i])).matrix;
      if (M.rows() != d) {
        out.blocks_ok = false;
        break;
      }
      span.col(static_cast<Eigen::Index>(i)) = M.reshaped();
    }
    if (!out.blocks_ok) break;
    Eigen::FullPivLU<Matrix> lu(span);
    if (lu.rank() != static_cast<Eigen::Index>(d) * d) out.blocks_ok = false;
  }
  return out;
}

}  // namespace isonorm
