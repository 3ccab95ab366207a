#include "isonorm/groupoid.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "isonorm/errors.hpp"

namespace isonorm {

namespace {

ValidationReport fail(std::string axiom, std::string message, std::vector<std::string> witness) {
  ValidationReport r;
  r.ok = false;
  r.axiom = std::move(axiom);
  r.message = std::move(message);
  r.witness = std::move(witness);
  return r;
}

std::string triple(const std::string& a, const std::string& b, const std::string& c) {
  return "(" + a + "," + b + "," + c + ")";
}

// Index form of a description that passed the structural checks.
struct Indexed {
  std::vector<std::string> names;
  std::unordered_map<std::string, int> at;
  std::vector<char> unit;
  std::vector<int> range, source;
  std::vector<std::vector<int>> by_range;
  std::vector<int> pos;
  std::vector<std::size_t> offset;
  std::vector<int> table;
  int compose(int g, int h) const { return source[g] == range[h] ? table[offset[g] + pos[h]] : -2; }
};

ValidationReport index_description(const GroupoidDescription& d, Indexed& ix) {
  ix.names = d.elements;
  std::sort(ix.names.begin(), ix.names.end());
  const int n = static_cast<int>(ix.names.size());
  for (int i = 0; i < n; ++i) {
    if (ix.names[i].empty()) return fail("ids", "empty element id", {});
    if (i > 0 && ix.names[i] == ix.names[i - 1])
      return fail("ids", "duplicate element id " + ix.names[i], {ix.names[i]});
    ix.at.emplace(ix.names[i], i);
  }
  ix.unit.assign(n, 0);
  for (const auto& u : d.units) {
    auto it = ix.at.find(u);
    if (it == ix.at.end()) return fail("units", "unit " + u + " is not an element", {u});
    if (ix.unit[it->second]) return fail("units", "duplicate unit " + u, {u});
    ix.unit[it->second] = 1;
  }
  for (const auto* m : {&d.range, &d.source})
    for (const auto& [k, v] : *m)
      if (!ix.at.count(k)) return fail("ends", (m == &d.range ? "range" : "source") + std::string(" given for unknown element ") + k, {k});
  ix.range.assign(n, -1);
  ix.source.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    const auto& g = ix.names[i];
    auto r = d.range.find(g);
    auto s = d.source.find(g);
    if (r == d.range.end()) return fail("ends", "range undefined at " + g, {g});
    if (s == d.source.end()) return fail("ends", "source undefined at " + g, {g});
    auto ri = ix.at.find(r->second);
    auto si = ix.at.find(s->second);
    if (ri == ix.at.end() || !ix.unit[ri->second]) return fail("ends", "range of " + g + " is not a unit", {g, r->second});
    if (si == ix.at.end() || !ix.unit[si->second]) return fail("ends", "source of " + g + " is not a unit", {g, s->second});
    ix.range[i] = ri->second;
    ix.source[i] = si->second;
  }
  for (int i = 0; i < n; ++i)
    if (ix.unit[i] && (ix.range[i] != i || ix.source[i] != i))
      return fail("units", "unit " + ix.names[i] + " does not have itself as range and source", {ix.names[i]});

  ix.by_range.assign(n, {});
  ix.pos.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    ix.pos[i] = static_cast<int>(ix.by_range[ix.range[i]].size());
    ix.by_range[ix.range[i]].push_back(i);
  }
  ix.offset.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) ix.offset[i + 1] = ix.offset[i] + ix.by_range[ix.source[i]].size();
  ix.table.assign(ix.offset[n], -1);
  return {};
}

}  // namespace

ValidationReport validate_groupoid(const GroupoidDescription& d) {
  Indexed ix;
  if (auto r = index_description(d, ix); !r.ok) return r;
  const int n = static_cast<int>(ix.names.size());
  const auto& N = ix.names;

  for (const auto& t : d.compose) {
    int ids[3];
    for (int k = 0; k < 3; ++k) {
      auto it = ix.at.find(t[k]);
      if (it == ix.at.end()) return fail("closure", "compose output or input " + t[k] + " is not an element", {t[0], t[1], t[2]});
      ids[k] = it->second;
    }
    const int g = ids[0], h = ids[1], gh = ids[2];
    if (ix.source[g] != ix.range[h])
      return fail("fiber", "compose defined off the fiber condition at " + triple(t[0], t[1], t[2]), {t[0], t[1], t[2]});
    if (ix.range[gh] != ix.range[g] || ix.source[gh] != ix.source[h])
      return fail("ends", "compose output has wrong range or source at " + triple(t[0], t[1], t[2]), {t[0], t[1], t[2]});
    int& slot = ix.table[ix.offset[g] + ix.pos[h]];
    if (slot >= 0 && slot != gh)
      return fail("closure", "compose assigns two values to (" + t[0] + "," + t[1] + ")", {t[0], t[1], N[slot], t[2]});
    slot = gh;
  }
  for (int g = 0; g < n; ++g)
    for (int h : ix.by_range[ix.source[g]])
      if (ix.compose(g, h) < 0) return fail("closure", "compose undefined on composable pair (" + N[g] + "," + N[h] + ")", {N[g], N[h]});

  for (int g = 0; g < n; ++g) {
    if (ix.compose(ix.range[g], g) != g || ix.compose(g, ix.source[g]) != g)
      return fail("unit-law", "unit law violated at " + N[g], {N[g], N[ix.range[g]], N[ix.source[g]]});
  }
  for (int g = 0; g < n; ++g) {
    bool found = false;
    for (int h : ix.by_range[ix.source[g]])
      if (ix.compose(g, h) == ix.range[g] && ix.source[h] == ix.range[g] && ix.compose(h, g) == ix.source[g]) {
        found = true;
        break;
      }
    if (!found) return fail("inverse", "inverse law violated at " + N[g], {N[g]});
  }
  for (int g = 0; g < n; ++g)
    for (int h : ix.by_range[ix.source[g]]) {
      const int gh = ix.compose(g, h);
      for (int k : ix.by_range[ix.source[h]]) {
        if (ix.compose(gh, k) != ix.compose(g, ix.compose(h, k)))
          return fail("associativity", "non-associative triple " + triple(N[g], N[h], N[k]), {N[g], N[h], N[k]});
      }
    }
  return {};
}

GroupoidPtr FiniteGroupoid::from_description(const GroupoidDescription& d) {
  ValidationReport rep = validate_groupoid(d);
  if (!rep.ok) throw InputError("invalid groupoid: " + rep.message);
  Indexed ix;
  index_description(d, ix);
  for (const auto& t : d.compose) {
    int g = ix.at.at(t[0]), h = ix.at.at(t[1]);
    ix.table[ix.offset[g] + ix.pos[h]] = ix.at.at(t[2]);
  }
  auto G = std::shared_ptr<FiniteGroupoid>(new FiniteGroupoid());
  const int n = static_cast<int>(ix.names.size());
  G->id_ = d.id;
  G->names_ = std::move(ix.names);
  G->lookup_ = std::move(ix.at);
  G->is_unit_ = std::move(ix.unit);
  G->range_ = std::move(ix.range);
  G->source_ = std::move(ix.source);
  G->range_fiber_ = std::move(ix.by_range);
  G->pos_in_range_fiber_ = std::move(ix.pos);
  G->offset_ = std::move(ix.offset);
  G->table_ = std::move(ix.table);
  G->source_fiber_.assign(n, {});
  for (int g = 0; g < n; ++g) {
    G->source_fiber_[G->source_[g]].push_back(g);
    if (G->is_unit_[g]) G->units_.push_back(g);
  }
  G->inverse_.assign(n, -1);
  for (int g = 0; g < n; ++g)
    for (int h : G->range_fiber_[G->source_[g]])
      if (G->compose(g, h) == G->range_[g]) {
        G->inverse_[g] = h;
        break;
      }
  return G;
}

std::optional<Index> FiniteGroupoid::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Index FiniteGroupoid::index(std::string_view name) const {
  auto i = find(name);
  if (!i) throw InputError("unknown element " + std::string(name));
  return *i;
}

Index FiniteGroupoid::unit(std::string_view name) const {
  Index i = index(name);
  if (!is_unit(i)) throw InputError(std::string(name) + " is not a unit");
  return i;
}

std::vector<Index> FiniteGroupoid::isotropy(Index u) const {
  std::vector<Index> out;
  for (Index g : range_fiber_[u])
    if (source_[g] == u) out.push_back(g);
  return out;
}

std::vector<Index> FiniteGroupoid::arrows(Index from, Index to) const {
  std::vector<Index> out;
  for (Index g : range_fiber_[to])
    if (source_[g] == from) out.push_back(g);
  return out;
}

GroupoidDescription FiniteGroupoid::describe() const {
  GroupoidDescription d;
  d.id = id_;
  d.elements = names_;
  for (Index u : units_) d.units.push_back(names_[u]);
  const int n = static_cast<int>(size());
  for (int g = 0; g < n; ++g) {
    d.range[names_[g]] = names_[range_[g]];
    d.source[names_[g]] = names_[source_[g]];
  }
  for (int g = 0; g < n; ++g)
    for (int h : range_fiber_[source_[g]]) d.compose.push_back({names_[g], names_[h], names_[compose(g, h)]});
  return d;
}

int GroupoidBuilder::add(std::string name, bool unit) {
  names_.push_back(std::move(name));
  unit_.push_back(unit ? 1 : 0);
  int id = static_cast<int>(names_.size()) - 1;
  range_.push_back(unit ? id : -1);
  source_.push_back(unit ? id : -1);
  return id;
}

void GroupoidBuilder::set_ends(int g, int range, int source) {
  range_[g] = range;
  source_[g] = source;
}

void GroupoidBuilder::index_fibers() const {
  by_range_.assign(names_.size(), {});
  for (std::size_t g = 0; g < names_.size(); ++g)
    if (range_[g] >= 0) by_range_[range_[g]].push_back(static_cast<int>(g));
}

GroupoidDescription GroupoidBuilder::base(std::string id) const {
  GroupoidDescription d;
  d.id = std::move(id);
  d.elements = names_;
  for (std::size_t g = 0; g < names_.size(); ++g) {
    if (unit_[g]) d.units.push_back(names_[g]);
    if (range_[g] >= 0) d.range[names_[g]] = names_[range_[g]];
    if (source_[g] >= 0) d.source[names_[g]] = names_[source_[g]];
  }
  return d;
}

IsotropyGroup isotropy_group(const FiniteGroupoid& G, Index x) {
  if (x < 0 || static_cast<std::size_t>(x) >= G.size() || !G.is_unit(x))
    throw InputError((x >= 0 && static_cast<std::size_t>(x) < G.size() ? G.name(x) : std::string("?")) + " is not a unit");
  IsotropyGroup K{FiniteGroup::trivial(), G.isotropy(x), std::vector<int>(G.size(), -1)};
  const int m = static_cast<int>(K.members.size());
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) {
    K.position[K.members[i]] = i;
    names.push_back(G.name(K.members[i]));
  }
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) table[i][j] = K.position[G.compose(K.members[i], K.members[j])];
  K.group = FiniteGroup::from_table(std::move(names), table);
  return K;
}

std::vector<std::vector<Index>> orbits(const FiniteGroupoid& G) {
  std::vector<int> parent(G.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t g = 0; g < G.size(); ++g) {
    int a = root(G.range(static_cast<Index>(g))), b = root(G.source(static_cast<Index>(g)));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<int, std::vector<Index>> blocks;
  for (Index u : G.units()) blocks[root(u)].push_back(u);
  std::vector<std::vector<Index>> out;
  for (auto& [k, v] : blocks) out.push_back(std::move(v));
  std::sort(out.begin(), out.end());
  return out;
}

bool is_bisection(const FiniteGroupoid& G, const std::vector<Index>& set) {
  std::set<Index> rs, ss, seen;
  for (Index g : set) {
    if (!seen.insert(g).second) continue;
    if (!rs.insert(G.range(g)).second || !ss.insert(G.source(g)).second) return false;
  }
  return true;
}

}  // namespace isonorm
