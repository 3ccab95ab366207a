#include "isonorm/finite_group.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "isonorm/errors.hpp"

namespace isonorm {

namespace {

struct PermHash {
  std::size_t operator()(const std::vector<int>& p) const {
    std::size_t h = 1469598103934665603ULL;
    for (int v : p) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ULL;
    return h;
  }
};

}  // namespace

FiniteGroup FiniteGroup::from_table(std::vector<std::string> names, const std::vector<std::vector<int>>& table) {
  const std::size_t n = names.size();
  if (n == 0) throw InputError("group table is empty");
  if (table.size() != n) throw InputError("group table has wrong number of rows");
  FiniteGroup g;
  g.names_ = std::move(names);
  g.table_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) throw InputError("group table row " + g.names_[i] + " has wrong length");
    for (std::size_t j = 0; j < n; ++j) {
      int v = table[i][j];
      if (v < 0 || static_cast<std::size_t>(v) >= n) throw InputError("group table not closed");
      g.table_[i * n + j] = v;
    }
  }
  // identity
  int e = -1;
  for (std::size_t i = 0; i < n && e < 0; ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j)
      ok = g.table_[i * n + j] == static_cast<int>(j) && g.table_[j * n + i] == static_cast<int>(j);
    if (ok) e = static_cast<int>(i);
  }
  if (e < 0) throw InputError("group table has no identity");
  g.identity_ = e;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        int left = g.table_[static_cast<std::size_t>(g.table_[a * n + b]) * n + c];
        int right = g.table_[a * n + static_cast<std::size_t>(g.table_[b * n + c])];
        if (left != right)
          throw InputError("group table not associative at (" + g.names_[a] + "," + g.names_[b] + "," +
                           g.names_[c] + ")");
      }
  g.finish();
  return g;
}

FiniteGroup FiniteGroup::from_named_table(std::vector<std::string> names,
                                          const std::vector<std::vector<std::string>>& table) {
  std::unordered_map<std::string, int> at;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!at.emplace(names[i], static_cast<int>(i)).second) throw InputError("duplicate group element " + names[i]);
  std::vector<std::vector<int>> idx(table.size());
  for (std::size_t i = 0; i < table.size(); ++i)
    for (const auto& s : table[i]) {
      auto it = at.find(s);
      if (it == at.end()) throw InputError("group table entry " + s + " is not an element");
      idx[i].push_back(it->second);
    }
  return from_table(std::move(names), idx);
}

FiniteGroup FiniteGroup::from_permutations(int degree, const std::vector<std::pair<std::string, Perm>>& generators,
                                           std::size_t max_order) {
  if (degree < 0) throw InputError("negative permutation degree");
  bool single_char = true;
  bool e_taken = false;
  for (const auto& [name, p] : generators) {
    if (static_cast<int>(p.size()) != degree) throw InputError("generator " + name + " has wrong degree");
    std::vector<int> seen(degree, 0);
    for (int v : p) {
      if (v < 0 || v >= degree || seen[v]++) throw InputError("generator " + name + " is not a permutation");
    }
    if (name.size() != 1) single_char = false;
    if (name == "e") e_taken = true;
  }
  Perm id(degree);
  for (int i = 0; i < degree; ++i) id[i] = i;

  std::vector<Perm> elems{id};
  std::vector<std::string> names{e_taken ? "1" : "e"};
  std::unordered_map<Perm, int, PermHash> at{{id, 0}};
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const auto& [gname, s] : generators) {
      Perm q(degree);
      for (int i = 0; i < degree; ++i) q[i] = elems[head][s[i]];  // elems[head] * s
      if (at.count(q)) continue;
      if (elems.size() >= max_order) throw InputError("permutation group exceeds order cap");
      std::string word = head == 0 ? gname : names[head] + (single_char ? "" : "*") + gname;
      at.emplace(q, static_cast<int>(elems.size()));
      elems.push_back(std::move(q));
      names.push_back(std::move(word));
    }
  }
  const std::size_t n = elems.size();
  FiniteGroup g;
  g.names_ = std::move(names);
  g.table_.resize(n * n);
  Perm q(degree);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      for (int i = 0; i < degree; ++i) q[i] = elems[a][elems[b][i]];
      g.table_[a * n + b] = at.at(q);
    }
  g.identity_ = 0;
  g.perms_ = std::move(elems);
  g.finish();
  return g;
}

void FiniteGroup::finish() {
  const std::size_t n = names_.size();
  lookup_.clear();
  for (std::size_t i = 0; i < n; ++i)
    if (!lookup_.emplace(names_[i], static_cast<int>(i)).second) throw InputError("duplicate group element " + names_[i]);
  inverse_.assign(n, -1);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b)
      if (table_[a * n + b] == identity_) {
        if (table_[b * n + a] != identity_) throw InputError("group element " + names_[a] + " has no two-sided inverse");
        if (inverse_[a] >= 0) throw InputError("group element " + names_[a] + " has two inverses");
        inverse_[a] = static_cast<int>(b);
      }
    if (inverse_[a] < 0) throw InputError("group element " + names_[a] + " has no inverse");
  }
}

FiniteGroup FiniteGroup::trivial() { return cyclic(1); }

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw InputError("cyclic group order must be positive");
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = i == 0 ? "e" : (i == 1 ? "g" : "g" + std::to_string(i));
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  FiniteGroup g;
  g.names_ = std::move(names);
  g.table_.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.table_[static_cast<std::size_t>(i) * n + j] = table[i][j];
  g.identity_ = 0;
  g.finish();
  return g;
}

FiniteGroup FiniteGroup::dihedral(int n) {
  if (n < 3) throw InputError("dihedral group needs n >= 3");
  Perm r(n), s(n);
  for (int i = 0; i < n; ++i) {
    r[i] = (i + 1) % n;
    s[i] = (n - i) % n;
  }
  return from_permutations(n, {{"r", r}, {"s", s}});
}

FiniteGroup FiniteGroup::symmetric(int n) {
  if (n < 1) throw InputError("symmetric group needs n >= 1");
  if (n == 1) return trivial();
  Perm t(n), c(n);
  for (int i = 0; i < n; ++i) {
    t[i] = i;
    c[i] = (i + 1) % n;
  }
  std::swap(t[0], t[1]);
  return from_permutations(n, {{"t", t}, {"c", c}});
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::size_t na = a.size(), nb = b.size(), n = na * nb;
  FiniteGroup g;
  g.names_.reserve(n);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) g.names_.push_back("(" + a.names_[i] + "," + b.names_[j] + ")");
  g.table_.resize(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      int i = a.multiply(static_cast<int>(x / nb), static_cast<int>(y / nb));
      int j = b.multiply(static_cast<int>(x % nb), static_cast<int>(y % nb));
      g.table_[x * n + y] = static_cast<int>(i * nb + j);
    }
  g.identity_ = static_cast<int>(a.identity() * nb + b.identity());
  g.finish();
  return g;
}

std::optional<int> FiniteGroup::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

int FiniteGroup::index(std::string_view name) const {
  auto i = find(name);
  if (!i) throw InputError("unknown group element " + std::string(name));
  return *i;
}

int FiniteGroup::order_of(int a) const {
  int k = 1;
  for (int p = a; p != identity_; p = multiply(p, a)) ++k;
  return k;
}

bool FiniteGroup::is_abelian() const {
  const int n = static_cast<int>(size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (multiply(a, b) != multiply(b, a)) return false;
  return true;
}

}  // namespace isonorm
