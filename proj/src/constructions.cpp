#include "isonorm/constructions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "isonorm/errors.hpp"

namespace isonorm {

namespace {

void check_shape(const GroupAction& a) {
  if (!a.group) throw InputError("action has no group");
  if (a.image.size() != a.group->size()) throw InputError("action table has wrong number of group rows");
  const int n = static_cast<int>(a.points.size());
  std::set<std::string> names(a.points.begin(), a.points.end());
  if (static_cast<int>(names.size()) != n) throw InputError("duplicate point name");
  for (const auto& row : a.image) {
    if (static_cast<int>(row.size()) != n) throw InputError("action table row has wrong length");
    for (int y : row)
      if (y < -1 || y >= n) throw InputError("action maps outside the point set");
  }
}

// Groupoid of a (partial) action: elements (γx, γ, x) for defined γx.
// Units are named by points; `label` names the remaining elements.
template <class Name>
GradedGroupoid action_groupoid(const GroupAction& a, const std::string& id, Name label) {
  const FiniteGroup& K = *a.group;
  const int n = static_cast<int>(a.points.size());
  const int e = K.identity();
  GroupoidBuilder b;
  std::vector<int> unit(n);
  for (int x = 0; x < n; ++x) unit[x] = b.add(a.points[x], true);
  std::vector<std::vector<int>> elem(K.size(), std::vector<int>(n, -1));
  std::vector<std::pair<int, int>> of;  // builder id -> (γ, x)
  of.resize(n);
  for (int x = 0; x < n; ++x) {
    elem[e][x] = unit[x];
    of[unit[x]] = {e, x};
  }
  for (int g = 0; g < static_cast<int>(K.size()); ++g) {
    if (g == e) continue;
    for (int x = 0; x < n; ++x) {
      int y = a.image[g][x];
      if (y < 0) continue;
      int id_ = b.add(label(g, x, y), false);
      b.set_ends(id_, unit[y], unit[x]);
      elem[g][x] = id_;
      of.emplace_back(g, x);
    }
  }
  GroupoidPtr G = b.build(id, [&](int p, int q) {
    auto [g2, y] = of[p];
    auto [g1, x] = of[q];
    (void)y;
    return elem[K.multiply(g2, g1)][x];
  });
  Grading phi{std::make_shared<GradingGroup>(a.group), std::vector<std::string>(G->size())};
  for (std::size_t i = 0; i < b.size(); ++i) {
    auto [g, x] = of[i];
    (void)x;
    phi.label[G->index(b.name(static_cast<int>(i)))] = K.name(g);
  }
  return {G, phi};
}

}  // namespace

void check_global_action(const GroupAction& a) {
  check_shape(a);
  const FiniteGroup& K = *a.group;
  const int n = static_cast<int>(a.points.size());
  for (int x = 0; x < n; ++x) {
    for (int g = 0; g < static_cast<int>(K.size()); ++g)
      if (a.image[g][x] < 0)
        throw CheckFailure("action undefined at (" + K.name(g) + "," + a.points[x] + ")", {K.name(g), a.points[x]});
    if (a.image[K.identity()][x] != x)
      throw CheckFailure("identity does not fix " + a.points[x], {a.points[x]});
  }
  for (int g = 0; g < static_cast<int>(K.size()); ++g)
    for (int h = 0; h < static_cast<int>(K.size()); ++h)
      for (int x = 0; x < n; ++x)
        if (a.image[K.multiply(g, h)][x] != a.image[g][a.image[h][x]])
          throw CheckFailure("action axiom violated: (" + K.name(g) + K.name(h) + ")" + a.points[x] + " differs from " +
                                 K.name(g) + "(" + K.name(h) + a.points[x] + ")",
                             {K.name(g), K.name(h), a.points[x]});
}

void check_partial_action(const GroupAction& a) {
  check_shape(a);
  const FiniteGroup& K = *a.group;
  const int n = static_cast<int>(a.points.size());
  const int m = static_cast<int>(K.size());
  for (int x = 0; x < n; ++x)
    if (a.image[K.identity()][x] != x) throw CheckFailure("missing domain data: identity must act as identity on every point", {a.points[x]});
  for (int g = 0; g < m; ++g) {
    std::vector<int> hit(n, -1);
    for (int x = 0; x < n; ++x) {
      int y = a.image[g][x];
      if (y < 0) continue;
      if (hit[y] >= 0) throw CheckFailure(K.name(g) + " is not injective", {K.name(g), a.points[hit[y]], a.points[x]});
      hit[y] = x;
      if (a.image[K.inverse(g)][y] != x)
        throw CheckFailure("missing domain data: inverse of " + K.name(g) + " does not undo it at " + a.points[x],
                           {K.name(g), a.points[x]});
    }
  }
  for (int g = 0; g < m; ++g)
    for (int h = 0; h < m; ++h)
      for (int x = 0; x < n; ++x) {
        int y = a.image[h][x];
        if (y < 0) continue;
        int z = a.image[g][y];
        if (z < 0) continue;
        if (a.image[K.multiply(g, h)][x] != z)
          throw CheckFailure("extension law violated at (" + K.name(g) + "," + K.name(h) + "," + a.points[x] + ")",
                             {K.name(g), K.name(h), a.points[x]});
      }
}

GroupoidPtr group_groupoid(const FiniteGroup& K, std::string id) {
  GroupoidBuilder b;
  std::vector<int> at(K.size());
  const int e = K.identity();
  at[e] = b.add(K.name(e), true);
  for (int g = 0; g < static_cast<int>(K.size()); ++g) {
    if (g == e) continue;
    at[g] = b.add(K.name(g), false);
    b.set_ends(at[g], at[e], at[e]);
  }
  std::vector<int> back(K.size());
  for (int g = 0; g < static_cast<int>(K.size()); ++g) back[at[g]] = g;
  return b.build(std::move(id), [&](int p, int q) { return at[K.multiply(back[p], back[q])]; });
}

GroupoidPtr pair_groupoid(int n) {
  if (n < 1) throw InputError("pair groupoid needs n >= 1");
  GroupoidBuilder b;
  std::vector<std::vector<int>> at(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) at[i][i] = b.add(std::to_string(i + 1), true);
  std::vector<std::pair<int, int>> of(n);
  for (int i = 0; i < n; ++i) of[at[i][i]] = {i, i};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      at[i][j] = b.add("(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")", false);
      b.set_ends(at[i][j], at[i][i], at[j][j]);
      of.emplace_back(i, j);
    }
  return b.build("pair" + std::to_string(n), [&](int p, int q) { return at[of[p].first][of[q].second]; });
}

GroupoidPtr product_groupoid(const FiniteGroupoid& A, const FiniteGroupoid& B) {
  GroupoidBuilder b;
  const int na = static_cast<int>(A.size()), nb = static_cast<int>(B.size());
  std::vector<int> at(static_cast<std::size_t>(na) * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) at[i * nb + j] = b.add("(" + A.name(i) + "," + B.name(j) + ")", A.is_unit(i) && B.is_unit(j));
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) b.set_ends(at[i * nb + j], at[A.range(i) * nb + B.range(j)], at[A.source(i) * nb + B.source(j)]);
  return b.build(A.id() + "x" + B.id(), [&](int p, int q) {
    int gh = A.compose(p / nb, q / nb);
    int kl = B.compose(p % nb, q % nb);
    return (gh < 0 || kl < 0) ? -1 : at[gh * nb + kl];
  });
}

GroupoidPtr disjoint_union(const std::vector<GroupoidPtr>& parts, const std::vector<std::string>& prefixes) {
  if (parts.size() != prefixes.size()) throw InputError("disjoint union needs one prefix per part");
  GroupoidBuilder b;
  std::vector<std::size_t> base;
  std::vector<int> part_of;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    base.push_back(b.size());
    for (std::size_t g = 0; g < parts[p]->size(); ++g) {
      b.add(prefixes[p] + parts[p]->name(static_cast<Index>(g)), parts[p]->is_unit(static_cast<Index>(g)));
      part_of.push_back(static_cast<int>(p));
    }
  }
  for (std::size_t p = 0; p < parts.size(); ++p)
    for (std::size_t g = 0; g < parts[p]->size(); ++g)
      b.set_ends(static_cast<int>(base[p] + g), static_cast<int>(base[p] + parts[p]->range(static_cast<Index>(g))),
                 static_cast<int>(base[p] + parts[p]->source(static_cast<Index>(g))));
  return b.build("union", [&](int x, int y) {
    int p = part_of[x];
    if (part_of[y] != p) return -1;
    int r = parts[p]->compose(static_cast<Index>(x - base[p]), static_cast<Index>(y - base[p]));
    return r < 0 ? -1 : static_cast<int>(base[p] + r);
  });
}

GradedGroupoid transformation_groupoid(const GroupAction& a) {
  try {
    check_global_action(a);
  } catch (const CheckFailure& e) {
    throw InputError(std::string("action axiom violation: ") + e.what());
  }
  return action_groupoid(a, "transformation", [&](int g, int x, int) {
    return "(" + a.group->name(g) + "," + a.points[x] + ")";
  });
}

GradedGroupoid partial_action_groupoid(const GroupAction& a) {
  try {
    check_partial_action(a);
  } catch (const CheckFailure& e) {
    throw InputError(std::string("partial action violation: ") + e.what());
  }
  return action_groupoid(a, "partial", [&](int g, int x, int y) {
    return "(" + a.points[y] + "," + a.group->name(g) + "," + a.points[x] + ")";
  });
}

GradedGroupoid partial_action_groupoid(const FreePartialAction& a) {
  const int n = static_cast<int>(a.points.size());
  if (a.generator_image.size() != a.group.rank()) throw InputError("missing domain data: one partial map per generator required");
  if (a.word_cap < 0) throw InputError("free partial action needs a word-length cap");
  std::vector<std::vector<int>> inv(a.group.rank(), std::vector<int>(n, -1));
  for (std::size_t k = 0; k < a.group.rank(); ++k) {
    if (static_cast<int>(a.generator_image[k].size()) != n) throw InputError("missing domain data for a generator");
    for (int x = 0; x < n; ++x) {
      int y = a.generator_image[k][x];
      if (y < -1 || y >= n) throw InputError("partial map leaves the point set");
      if (y < 0) continue;
      if (inv[k][y] >= 0) throw InputError("generator partial map is not injective");
      inv[k][y] = x;
    }
  }
  auto act = [&](const Word& w, int x) {
    for (auto it = w.rbegin(); it != w.rend() && x >= 0; ++it) {
      int k = std::abs(*it) - 1;
      x = *it > 0 ? a.generator_image[k][x] : inv[k][x];
    }
    return x;
  };
  std::vector<Word> words = a.group.ball(a.word_cap);
  std::map<std::pair<int, int>, Word> arrow;  // (y, x) -> word
  for (const Word& w : words)
    for (int x = 0; x < n; ++x) {
      int y = act(w, x);
      if (y < 0) continue;
      auto [it, fresh] = arrow.emplace(std::make_pair(y, x), w);
      if (!fresh)
        throw InputError("partial action has infinite isotropy at " + a.points[x] + " (words " + a.group.format(it->second) +
                         " and " + a.group.format(w) + " agree)");
    }
  GroupoidBuilder b;
  std::vector<int> unit(n);
  for (int x = 0; x < n; ++x) unit[x] = b.add(a.points[x], true);
  std::map<std::pair<int, int>, int> at;
  std::vector<std::pair<int, int>> of(n);
  for (int x = 0; x < n; ++x) {
    at[{x, x}] = unit[x];
    of[unit[x]] = {x, x};
  }
  for (const auto& [yx, w] : arrow) {
    if (w.empty()) continue;
    int id = b.add("(" + a.points[yx.first] + "," + a.group.format(w) + "," + a.points[yx.second] + ")", false);
    b.set_ends(id, unit[yx.first], unit[yx.second]);
    at[yx] = id;
    of.push_back(yx);
  }
  GroupoidPtr G = b.build("partial", [&](int p, int q) {
    auto [z, y] = of[p];
    auto [y2, x] = of[q];
    (void)y2;
    auto it = at.find({z, x});
    Word prod = FreeGroup::multiply(arrow.at({z, y}), arrow.at({y, x}));
    if (it == at.end() || arrow.at({z, x}) != prod)
      throw InputError("word-length cap " + std::to_string(a.word_cap) + " too small: product " + a.group.format(prod) +
                       " falls outside the enumerated words");
    return it->second;
  });
  auto grp = std::make_shared<GradingGroup>(a.group);
  Grading phi{grp, std::vector<std::string>(G->size())};
  for (std::size_t i = 0; i < b.size(); ++i) phi.label[G->index(b.name(static_cast<int>(i)))] = a.group.format(arrow.at(of[i]));
  return {G, phi};
}

GradedGroupoid semidirect_product(const GroupPtr& group, const FiniteGroupoid& G,
                                  const std::vector<std::vector<Index>>& automorphism) {
  const FiniteGroup& K = *group;
  const int m = static_cast<int>(K.size());
  const int n = static_cast<int>(G.size());
  auto bad = [&](const std::string& msg, std::vector<std::string> w) {
    throw CheckFailure("action not by automorphisms: " + msg, std::move(w));
  };
  if (static_cast<int>(automorphism.size()) != m) throw InputError("one automorphism per group element required");
  for (int c = 0; c < m; ++c) {
    const auto& al = automorphism[c];
    if (static_cast<int>(al.size()) != n) throw InputError("automorphism has wrong length");
    std::vector<char> hit(n, 0);
    for (int g = 0; g < n; ++g) {
      if (al[g] < 0 || al[g] >= n || hit[al[g]]++) bad(K.name(c) + " is not a bijection", {K.name(c)});
    }
    for (int g = 0; g < n; ++g) {
      if (G.range(al[g]) != al[G.range(g)] || G.source(al[g]) != al[G.source(g)])
        bad(K.name(c) + " does not commute with range/source at " + G.name(g), {K.name(c), G.name(g)});
      for (Index h : G.range_fiber(G.source(g)))
        if (al[G.compose(g, h)] != G.compose(al[g], al[h]))
          bad(K.name(c) + " is not multiplicative at (" + G.name(g) + "," + G.name(h) + ")", {K.name(c), G.name(g), G.name(h)});
    }
  }
  for (int g = 0; g < n; ++g)
    if (automorphism[K.identity()][g] != g) bad("identity acts nontrivially", {G.name(g)});
  for (int c = 0; c < m; ++c)
    for (int d = 0; d < m; ++d)
      for (int g = 0; g < n; ++g)
        if (automorphism[K.multiply(c, d)][g] != automorphism[c][automorphism[d][g]])
          bad("not a homomorphism at (" + K.name(c) + "," + K.name(d) + ")", {K.name(c), K.name(d), G.name(g)});

  GroupoidBuilder b;
  std::vector<int> at(static_cast<std::size_t>(m) * n);
  const int e = K.identity();
  for (Index u : G.units()) at[e * n + u] = b.add(G.name(u), true);
  for (int c = 0; c < m; ++c)
    for (int g = 0; g < n; ++g) {
      if (c == e && G.is_unit(g)) continue;
      at[c * n + g] = b.add("(" + K.name(c) + "," + G.name(g) + ")", false);
    }
  std::vector<std::pair<int, int>> of(b.size());
  for (int c = 0; c < m; ++c)
    for (int g = 0; g < n; ++g) {
      int id = at[c * n + g];
      of[id] = {c, g};
      if (!(c == e && G.is_unit(g))) b.set_ends(id, at[e * n + automorphism[c][G.range(g)]], at[e * n + G.source(g)]);
    }
  GroupoidPtr S = b.build("semidirect", [&](int p, int q) {
    auto [c2, g2] = of[p];
    auto [c1, g1] = of[q];
    int moved = automorphism[K.inverse(c1)][g2];
    int prod = G.compose(moved, g1);
    return prod < 0 ? -1 : at[K.multiply(c2, c1) * n + prod];
  });
  Grading phi{std::make_shared<GradingGroup>(group), std::vector<std::string>(S->size())};
  for (std::size_t i = 0; i < b.size(); ++i) phi.label[S->index(b.name(static_cast<int>(i)))] = K.name(of[i].first);
  return {S, phi};
}

GroupoidPtr germ_quotient(const GroupAction& a) {
  try {
    check_global_action(a);
  } catch (const CheckFailure& e) {
    throw InputError(std::string("action axiom violation: ") + e.what());
  }
  const FiniteGroup& K = *a.group;
  const int n = static_cast<int>(a.points.size());
  // least group element name realizing each (y, x)
  std::map<std::pair<int, int>, int> least;
  for (int g = 0; g < static_cast<int>(K.size()); ++g)
    for (int x = 0; x < n; ++x) {
      auto key = std::make_pair(a.image[g][x], x);
      auto it = least.find(key);
      if (it == least.end() || K.name(g) < K.name(it->second)) least[key] = g;
    }
  GroupoidBuilder b;
  std::vector<int> unit(n);
  for (int x = 0; x < n; ++x) unit[x] = b.add(a.points[x], true);
  std::map<std::pair<int, int>, int> at;
  std::vector<std::pair<int, int>> of(n);
  for (int x = 0; x < n; ++x) {
    at[{x, x}] = unit[x];
    of[unit[x]] = {x, x};
  }
  for (const auto& [yx, g] : least) {
    if (yx.first == yx.second) continue;
    int id = b.add("[" + K.name(g) + "," + a.points[yx.second] + "]", false);
    b.set_ends(id, unit[yx.first], unit[yx.second]);
    at[yx] = id;
    of.push_back(yx);
  }
  return b.build("germ", [&](int p, int q) { return at.at({of[p].first, of[q].second}); });
}

GradedGroupoid graded_image_groupoid(const FiniteGroupoid& G, const Grading& psi) {
  if (auto rep = check_grading(G, psi); !rep.ok) throw InputError(rep.message);
  using Key = std::tuple<Index, std::string, Index>;
  std::map<Key, int> at;
  GroupoidBuilder b;
  std::vector<Key> of;
  for (Index u : G.units()) {
    Key k{u, psi.label[u], u};
    at[k] = b.add(G.name(u), true);
    of.push_back(k);
  }
  for (std::size_t g = 0; g < G.size(); ++g) {
    Key k{G.range(static_cast<Index>(g)), psi.label[g], G.source(static_cast<Index>(g))};
    if (at.count(k)) continue;
    int id = b.add("(" + G.name(std::get<0>(k)) + "," + std::get<1>(k) + "," + G.name(std::get<2>(k)) + ")", false);
    b.set_ends(id, at.at(Key{std::get<0>(k), psi.group->identity(), std::get<0>(k)}),
               at.at(Key{std::get<2>(k), psi.group->identity(), std::get<2>(k)}));
    at[k] = id;
    of.push_back(k);
  }
  GroupoidPtr H = b.build("graded-image", [&](int p, int q) {
    const auto& [z, c2, y] = of[p];
    const auto& [y2, c1, x] = of[q];
    (void)y;
    (void)y2;
    auto it = at.find(Key{z, psi.group->multiply(c2, c1), x});
    return it == at.end() ? -1 : it->second;
  });
  Grading phi{psi.group, std::vector<std::string>(H->size())};
  for (std::size_t i = 0; i < b.size(); ++i) phi.label[H->index(b.name(static_cast<int>(i)))] = std::get<1>(of[i]);
  return {H, phi};
}

GroupoidPtr reduce_to_units(const FiniteGroupoid& T, const std::vector<Index>& units) {
  if (units.empty()) throw InputError("reduction needs a nonempty unit set");
  std::vector<char> in(T.size(), 0);
  for (Index u : units) {
    if (u < 0 || static_cast<std::size_t>(u) >= T.size() || !T.is_unit(u)) throw InputError("reduction set contains a non-unit");
    in[u] = 1;
  }
  GroupoidBuilder b;
  std::vector<int> at(T.size(), -1), back;
  for (std::size_t g = 0; g < T.size(); ++g) {
    Index gi = static_cast<Index>(g);
    if (in[T.range(gi)] && in[T.source(gi)]) {
      at[g] = b.add(T.name(gi), T.is_unit(gi));
      back.push_back(gi);
    }
  }
  for (std::size_t i = 0; i < back.size(); ++i) b.set_ends(static_cast<int>(i), at[T.range(back[i])], at[T.source(back[i])]);
  return b.build(T.id(), [&](int p, int q) {
    int r = T.compose(back[p], back[q]);
    return r < 0 ? -1 : at[r];
  });
}

GroupoidPtr linking_groupoid(const FiniteGroupoid& G, const std::vector<Index>& second_units) {
  std::vector<char> in2(G.size(), 0);
  for (Index w : second_units) {
    if (w < 0 || static_cast<std::size_t>(w) >= G.size() || !G.is_unit(w)) throw InputError("linking set contains a non-unit");
    in2[w] = 1;
  }
  auto allowed = [&](Index u, int side) { return side == 0 || in2[u]; };
  GroupoidBuilder b;
  const int n = static_cast<int>(G.size());
  std::vector<int> at(static_cast<std::size_t>(n) * 4, -1);
  std::vector<std::tuple<Index, int, int>> of;
  static const char* tag[2][2] = {{"@11", "@12"}, {"@21", "@22"}};
  for (int i = 0; i < 2; ++i)
    for (Index g = 0; g < n; ++g)
      if (G.is_unit(g) && allowed(g, i)) {
        at[g * 4 + i * 2 + i] = b.add(G.name(g) + tag[i][i], true);
        of.emplace_back(g, i, i);
      }
  for (Index g = 0; g < n; ++g)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (i == j && G.is_unit(g)) continue;
        if (!allowed(G.range(g), i) || !allowed(G.source(g), j)) continue;
        at[g * 4 + i * 2 + j] = b.add(G.name(g) + tag[i][j], false);
        of.emplace_back(g, i, j);
      }
  for (std::size_t k = 0; k < of.size(); ++k) {
    auto [g, i, j] = of[k];
    b.set_ends(static_cast<int>(k), at[G.range(g) * 4 + i * 2 + i], at[G.source(g) * 4 + j * 2 + j]);
  }
  return b.build("linking", [&](int p, int q) {
    auto [g, i, j] = of[p];
    auto [h, j2, k] = of[q];
    if (j != j2) return -1;
    int gh = G.compose(g, h);
    return gh < 0 ? -1 : at[gh * 4 + i * 2 + k];
  });
}

}  // namespace isonorm
