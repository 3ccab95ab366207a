#include "isonorm/norms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <thread>

#include "isonorm/constructions.hpp"
#include "isonorm/errors.hpp"

namespace isonorm {

namespace {

void require_unit(const FiniteGroupoid& G, Index x) {
  if (x < 0 || static_cast<std::size_t>(x) >= G.size() || !G.is_unit(x)) throw InputError("base point is not a unit");
}

void require_isotropy_support(const FiniteGroupoid& G, Index x, const AlgebraElement& h) {
  for (const auto& [g, c] : h.terms())
    if (G.range(g) != x || G.source(g) != x)
      throw InputError("element is not supported on the isotropy group at " + G.name(x) + ": " + G.name(g));
}

template <class F>
void parallel_for(std::size_t n, int jobs, F&& body) {
  const int workers = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

NormReport reduced_norm(const FiniteGroupoid& G, const AlgebraElement& f, const NormOptions& opt) {
  const auto& units = G.units();
  std::vector<double> per(units.size(), 0.0);
  parallel_for(units.size(), opt.jobs, [&](std::size_t i) {
    per[i] = operator_norm(regular_rep_at(G, units[i], f).matrix);
  });
  NormReport rep;
  rep.method = "max over units of ||rho_x(f)||";
  rep.tolerance = opt.tol;
  std::size_t best = 0;
  for (std::size_t i = 0; i < per.size(); ++i)
    if (per[i] > per[best]) best = i;
  if (!units.empty()) {
    rep.value = per[best];
    rep.witness = {G.name(units[best])};
  }
  if (rep.value < f.sup_norm() - opt.tol * std::max(1.0, f.sup_norm()))
    throw CheckFailure("reduced norm below the sup norm", rep.witness);
  return rep;
}

double isotropy_regular_norm(const FiniteGroupoid& G, Index x, const AlgebraElement& h) {
  require_unit(G, x);
  require_isotropy_support(G, x, h);
  return operator_norm(group_regular_matrix(isotropy_group(G, x), h).matrix);
}

NormReport exotic_norm_finite(const FiniteGroupoid& G, Index x, const AlgebraElement& h, const NormOptions& opt) {
  require_unit(G, x);
  require_isotropy_support(G, x, h);
  NormReport rep = reduced_norm(G, h, opt);
  rep.method = "zero extension, max over units of ||rho_y(h)||";
  const double lambda = isotropy_regular_norm(G, x, h);
  if (std::abs(rep.value - lambda) > opt.tol * std::max(1.0, lambda))
    throw CheckFailure("exotic norm differs from the isotropy regular norm", {G.name(x), std::to_string(rep.value), std::to_string(lambda)});
  if (rep.value > h.l1_norm() + opt.tol * std::max(1.0, h.l1_norm()))
    throw CheckFailure("exotic norm exceeds the l1 norm", {G.name(x)});
  return rep;
}

InfimumProbe extension_infimum_probe(const FiniteGroupoid& G, Index x, const AlgebraElement& h, int n_samples,
                                     std::uint64_t seed, Perturbation kind, const NormOptions& opt) {
  require_unit(G, x);
  require_isotropy_support(G, x, h);
  std::vector<Index> off;
  if (kind == Perturbation::InvariantComplement) {
    for (Index g : G.range_fiber(x))
      if (G.source(g) != x) throw InputError(G.name(x) + " is not an invariant unit");
    for (std::size_t g = 0; g < G.size(); ++g)
      if (G.range(static_cast<Index>(g)) != x) off.push_back(static_cast<Index>(g));
  } else {
    for (std::size_t g = 0; g < G.size(); ++g)
      if (G.range(static_cast<Index>(g)) != x || G.source(static_cast<Index>(g)) != x) off.push_back(static_cast<Index>(g));
  }
  InfimumProbe p;
  p.e_norm = exotic_norm_finite(G, x, h, opt).value;
  p.zero_extension = reduced_norm(G, h, opt).value;
  p.min_sampled = p.zero_extension;
  bool above = true;
  Rng rng(seed);
  for (int i = 0; i < n_samples && !off.empty(); ++i) {
    AlgebraElement f = h;
    const double scale = rng.uniform(0.0, 2.0);
    for (Index g : off)
      if (rng.coin(0.5)) f.set(g, scale * rng.complex_uniform());
    const double v = reduced_norm(G, f, opt).value;
    p.min_sampled = std::min(p.min_sampled, v);
    if (v < p.e_norm - opt.tol * std::max(1.0, p.e_norm)) above = false;
    ++p.samples;
  }
  p.ok = above && std::abs(p.zero_extension - p.e_norm) <= opt.tol * std::max(1.0, p.e_norm);
  return p;
}

BisectionFamily canonical_bisections(const FiniteGroupoid& G, const Grading& phi, Index x) {
  require_unit(G, x);
  BisectionFamily U;
  U.x = x;
  for (Index g : G.isotropy(x)) {
    auto& set = U.sets[g];
    for (std::size_t k = 0; k < G.size(); ++k)
      if (phi.label[k] == phi.label[g]) set.push_back(static_cast<Index>(k));
  }
  return U;
}

TmredReport tmred_certificate(const FiniteGroupoid& G, const Grading& phi, const BisectionFamily& U, const AlgebraElement& h,
                              const std::vector<Index>* V, const NormOptions& opt) {
  const Index x = U.x;
  require_unit(G, x);
  require_isotropy_support(G, x, h);
  if (phi.label.size() != G.size()) throw InputError("grading does not match the groupoid");
  TmredReport rep;
  auto fail = [&](std::string tag, std::string msg, std::vector<std::string> witness) {
    rep.failed = std::move(tag);
    rep.message = std::move(msg);
    rep.witness = std::move(witness);
    return rep;
  };
  const IsotropyGroup K = isotropy_group(G, x);
  for (std::size_t i = 0; i < K.members.size(); ++i)
    for (std::size_t j = i + 1; j < K.members.size(); ++j)
      if (phi.label[K.members[i]] == phi.label[K.members[j]])
        return fail("precondition", "grading is not injective on the isotropy group",
                    {G.name(K.members[i]), G.name(K.members[j])});
  for (const auto& [g, set] : U.sets)
    if (K.position[g] < 0) return fail("precondition", "family is indexed by a non-isotropy element", {G.name(g)});
  std::vector<std::vector<char>> member(K.members.size(), std::vector<char>(G.size(), 0));
  for (std::size_t i = 0; i < K.members.size(); ++i) {
    const Index g = K.members[i];
    auto it = U.sets.find(g);
    if (it == U.sets.end()) return fail("(1)", "no bisection given for g", {G.name(g)});
    if (!is_bisection(G, it->second)) return fail("precondition", "U_g is not a bisection", {G.name(g)});
    for (Index u : it->second) member[i][u] = 1;
  }
  // (1) g in U_g and Phi constant on U_g
  for (std::size_t i = 0; i < K.members.size(); ++i) {
    const Index g = K.members[i];
    if (!member[i][g]) return fail("(1)", "g is not in U_g", {G.name(g)});
    for (Index u : U.sets.at(g))
      if (phi.label[u] != phi.label[g]) return fail("(1)", "Phi(U_g) != {Phi(g)}", {G.name(g), G.name(u)});
  }
  // (2) U_x = units, U_{g^-1} = U_g^-1
  {
    std::vector<Index> ux = U.sets.at(x);
    std::sort(ux.begin(), ux.end());
    if (ux != G.units()) {
      std::vector<std::string> w{G.name(x)};
      for (Index u : G.units())
        if (!member[K.position[x]][u]) w.push_back(G.name(u));
      for (Index u : ux)
        if (!G.is_unit(u)) w.push_back(G.name(u));
      return fail("(2)", "U_x is not the unit space", w);
    }
  }
  for (std::size_t i = 0; i < K.members.size(); ++i) {
    const Index g = K.members[i];
    const int gi = K.position[G.inverse(g)];
    for (Index u : U.sets.at(g))
      if (!member[gi][G.inverse(u)]) return fail("(2)", "U_{g^-1} != U_g^-1", {G.name(g), G.name(u)});
    for (Index u : U.sets.at(G.inverse(g)))
      if (!member[i][G.inverse(u)]) return fail("(2)", "U_{g^-1} != U_g^-1", {G.name(G.inverse(g)), G.name(u)});
  }
  // (3) products of U-sets over relations g_1...g_n = x stay in the unit space
  {
    const std::size_t m = K.members.size();
    std::vector<int> parent(G.size() * m, -2), via(G.size() * m, -1);
    std::deque<std::size_t> queue;
    auto state = [&](Index a, int k) { return static_cast<std::size_t>(a) * m + static_cast<std::size_t>(k); };
    for (std::size_t i = 0; i < m; ++i)
      for (Index u : U.sets.at(K.members[i])) {
        const std::size_t s = state(u, static_cast<int>(i));
        if (parent[s] != -2) continue;
        parent[s] = -1;
        via[s] = static_cast<int>(i);
        queue.push_back(s);
      }
    const int kx = K.position[x];
    while (!queue.empty()) {
      const std::size_t s = queue.front();
      queue.pop_front();
      const Index a = static_cast<Index>(s / m);
      const int k = static_cast<int>(s % m);
      if (k == kx && !G.is_unit(a)) {
        // letters g_1..g_n, outermost first
        std::vector<std::string> w;
        for (long t = static_cast<long>(s); t >= 0; t = parent[t]) w.push_back(G.name(K.members[via[t]]));
        w.push_back("product " + G.name(a));
        return fail("(3)", "U_{g_1}...U_{g_n} leaves the unit space although g_1...g_n = x", w);
      }
      for (std::size_t i = 0; i < m; ++i)
        for (Index u : U.sets.at(K.members[i])) {
          if (G.source(u) != G.range(a)) continue;
          const std::size_t t = state(G.compose(u, a), K.group.multiply(static_cast<int>(i), k));
          if (parent[t] != -2) continue;
          parent[t] = static_cast<int>(s);
          via[t] = static_cast<int>(i);
          queue.push_back(t);
        }
    }
  }
  // extension f = sum_i h(g_i) 1_{W_i}, W_i = r^-1(V) cap U_{g_i}
  std::vector<char> inV(G.size(), 0);
  if (V) {
    rep.neighbourhood = *V;
    std::sort(rep.neighbourhood.begin(), rep.neighbourhood.end());
  } else {
    rep.neighbourhood = {x};
  }
  for (Index v : rep.neighbourhood) {
    require_unit(G, v);
    inV[v] = 1;
  }
  if (!inV[x]) throw InputError("neighbourhood does not contain the base point");
  AlgebraElement f(h.host());
  for (const auto& [g, c] : h.terms()) {
    const auto& set = U.sets.at(g);
    for (Index v : rep.neighbourhood)
      if (std::none_of(set.begin(), set.end(), [&](Index u) { return G.range(u) == v; }))
        throw InputError("neighbourhood is not inside r(U_g) for " + G.name(g));
    for (Index u : set)
      if (inV[G.range(u)]) f.set(u, c);
  }
  // h~ on Gamma through the injective labels of the isotropy group
  std::map<std::string, Complex> htilde;
  for (const auto& [g, c] : h.terms()) htilde[phi.label[g]] = c;
  const GradingGroup& gamma = *phi.group;
  double worst_block = 0.0;
  for (Index y : G.units()) {
    const BlockDecomposition blocks = graded_block_decomposition(G, phi, U, y, &f);
    for (std::size_t c = 0; c < blocks.classes.size(); ++c)
      if (!blocks.grading_injective[c]) {
        std::vector<std::string> w{G.name(y)};
        for (Index g : blocks.classes[c]) w.push_back(G.name(g));
        return fail("factorization", "grading not injective on a ~x class", w);
      }
    if (!blocks.block_diagonal) return fail("factorization", "rho_y(f) is not block diagonal", {G.name(y)});
    const MatrixRep R = regular_rep_at(G, y, f);
    const auto& fiber = G.source_fiber(y);
    std::vector<int> pos(G.size(), -1);
    for (std::size_t i = 0; i < fiber.size(); ++i) pos[fiber[i]] = static_cast<int>(i);
    for (const auto& cls : blocks.classes) {
      Matrix block(cls.size(), cls.size());
      for (std::size_t a = 0; a < cls.size(); ++a)
        for (std::size_t b = 0; b < cls.size(); ++b) {
          const Index g = cls[a], k = cls[b];
          const Complex lhs = R.matrix(pos[g], pos[k]);
          const std::string gamma_gk = gamma.multiply(phi.label[g], gamma.inverse(phi.label[k]));
          auto it = htilde.find(gamma_gk);
          const Complex rhs = inV[G.range(g)] && it != htilde.end() ? it->second : Complex(0.0);
          rep.max_deviation = std::max(rep.max_deviation, std::abs(lhs - rhs));
          block(a, b) = lhs;
        }
      worst_block = std::max(worst_block, operator_norm(block));
    }
  }
  if (rep.max_deviation > 1e-12)
    return fail("factorization", "rho_y(f) differs from u* m_q lambda(h~) u", {std::to_string(rep.max_deviation)});
  rep.r_norm = isotropy_regular_norm(G, x, h);
  rep.extension_norm = reduced_norm(G, f, opt).value;
  if (worst_block > rep.r_norm + opt.tol * std::max(1.0, rep.r_norm) ||
      rep.extension_norm > rep.r_norm + opt.tol * std::max(1.0, rep.r_norm))
    return fail("factorization", "extension norm exceeds ||h||_r", {std::to_string(rep.extension_norm), std::to_string(rep.r_norm)});
  rep.e_norm = rep.r_norm;
  rep.passed = true;
  rep.message = "hypotheses (1)-(3) hold; ||h||_e = ||h||_r";
  rep.witness = {G.name(x)};
  return rep;
}

TransportReport orbit_transport(const FiniteGroupoid& G, Index g, const AlgebraElement& h, const NormOptions& opt) {
  const Index x = G.source(g), y = G.range(g);
  require_isotropy_support(G, x, h);
  TransportReport rep;
  rep.transported = AlgebraElement(h.host());
  const Index ginv = G.inverse(g);
  for (const auto& [k, c] : h.terms()) rep.transported.set(G.compose(G.compose(g, k), ginv), c);
  rep.e_before = exotic_norm_finite(G, x, h, opt).value;
  rep.e_after = exotic_norm_finite(G, y, rep.transported, opt).value;
  rep.r_before = isotropy_regular_norm(G, x, h);
  rep.r_after = isotropy_regular_norm(G, y, rep.transported);
  const double tol = opt.tol * std::max(1.0, rep.e_before);
  rep.ok = std::abs(rep.e_before - rep.e_after) <= tol && std::abs(rep.r_before - rep.r_after) <= tol;
  return rep;
}

MoritaReport morita_restriction_check(const GroupoidPtr& T, const std::vector<Index>& units, int batch, std::uint64_t seed,
                                      const NormOptions& opt) {
  std::vector<char> in(T->size(), 0);
  for (Index u : units) {
    require_unit(*T, u);
    in[u] = 1;
  }
  bool complement = false;
  for (Index u : T->units())
    if (!in[u]) complement = true;
  for (const auto& orbit : orbits(*T)) {
    bool hit = false, miss = false;
    for (Index u : orbit) (in[u] ? hit : miss) = true;
    if (!hit || (complement && !miss)) {
      std::vector<std::string> w;
      for (Index u : orbit) w.push_back(T->name(u));
      throw CheckFailure(std::string("unit subset") + (hit ? "'s complement" : "") + " misses a T-orbit", w);
    }
  }
  MoritaReport rep;
  rep.reduction = reduce_to_units(*T, units);
  const FiniteGroupoid& R = *rep.reduction;
  std::vector<Index> support;
  for (std::size_t g = 0; g < T->size(); ++g)
    if (in[T->range(static_cast<Index>(g))] && in[T->source(static_cast<Index>(g))]) support.push_back(static_cast<Index>(g));
  auto compare = [&](const AlgebraElement& f) {
    AlgebraElement fr(rep.reduction);
    for (const auto& [g, c] : f.terms()) fr.set(R.index(T->name(g)), c);
    const double a = reduced_norm(*T, f, opt).value, b = reduced_norm(R, fr, opt).value;
    rep.max_deviation = std::max(rep.max_deviation, std::abs(a - b));
    ++rep.checked;
  };
  for (Index g : support) compare(AlgebraElement::delta(T, g));
  Rng rng(seed);
  for (int i = 0; i < batch; ++i) {
    AlgebraElement f(T);
    for (Index g : support)
      if (rng.coin(0.5)) f.set(g, rng.complex_uniform());
    compare(f);
  }
  rep.ok = rep.max_deviation <= opt.tol;
  return rep;
}

ExactSequenceReport exact_sequence_check(const GroupoidPtr& host, Index x) {
  const FiniteGroupoid& G = *host;
  require_unit(G, x);
  for (Index g : G.range_fiber(x))
    if (G.source(g) != x) throw InputError(G.name(x) + " is not an invariant unit");
  for (Index g : G.source_fiber(x))
    if (G.range(g) != x) throw InputError(G.name(x) + " is not an invariant unit");
  ExactSequenceReport rep;
  rep.total = G.size();
  rep.isotropy = G.isotropy(x).size();
  for (std::size_t g = 0; g < G.size(); ++g)
    if (G.range(static_cast<Index>(g)) != x) ++rep.complement;
  rep.homomorphism = true;
  for (std::size_t a = 0; a < G.size() && rep.homomorphism; ++a)
    for (std::size_t b = 0; b < G.size(); ++b) {
      const AlgebraElement da = AlgebraElement::delta(host, static_cast<Index>(a));
      const AlgebraElement db = AlgebraElement::delta(host, static_cast<Index>(b));
      const AlgebraElement lhs = restrict_to_isotropy(convolve(da, db), x);
      const AlgebraElement rhs = convolve(restrict_to_isotropy(da, x), restrict_to_isotropy(db, x));
      if (!(lhs == rhs)) {
        rep.homomorphism = false;
        break;
      }
    }
  rep.surjective = true;
  for (Index k : G.isotropy(x))
    if (!(restrict_to_isotropy(AlgebraElement::delta(host, k), x) == AlgebraElement::delta(host, k))) rep.surjective = false;
  rep.ok = rep.homomorphism && rep.surjective && rep.total == rep.complement + rep.isotropy;
  return rep;
}

}  // namespace isonorm
