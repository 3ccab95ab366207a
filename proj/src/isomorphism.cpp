#include "isonorm/isomorphism.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include "isonorm/constructions.hpp"
#include "isonorm/errors.hpp"

namespace isonorm {

namespace {

using Sig = std::array<int, 8>;

std::vector<Sig> signatures(const FiniteGroupoid& G) {
  const auto orb = orbits(G);
  std::vector<int> orbit_size(G.size(), 0);
  for (const auto& o : orb)
    for (Index u : o) orbit_size[u] = static_cast<int>(o.size());
  std::vector<Sig> s(G.size());
  for (std::size_t i = 0; i < G.size(); ++i) {
    Index g = static_cast<Index>(i);
    Index r = G.range(g), so = G.source(g);
    int order = 0;
    if (r == so) {
      order = 1;
      for (Index p = g; p != r; p = G.compose(p, g)) ++order;
    }
    s[i] = {G.is_unit(g) ? 1 : 0,
            r == so ? 1 : 0,
            static_cast<int>(G.range_fiber(r).size()),
            static_cast<int>(G.source_fiber(so).size()),
            static_cast<int>(G.isotropy(r).size()),
            order,
            orbit_size[r],
            0};
  }
  return s;
}

class Matcher {
 public:
  Matcher(const FiniteGroupoid& A, const FiniteGroupoid& B) : A_(A), B_(B), sa_(signatures(A)), sb_(signatures(B)) {
    fa_.assign(A.size(), -1);
    fb_.assign(B.size(), -1);
  }

  bool plausible() const {
    if (A_.size() != B_.size() || A_.units().size() != B_.units().size()) return false;
    auto x = sa_, y = sb_;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
  }

  bool solve() { return search(0); }
  std::vector<Index> map() const { return fa_; }

 private:
  bool assign(Index g, Index h) {
    std::vector<std::pair<Index, Index>> queue{{g, h}};
    while (!queue.empty()) {
      auto [a, b] = queue.back();
      queue.pop_back();
      if (fa_[a] == b) continue;
      if (fa_[a] >= 0 || fb_[b] >= 0 || sa_[a] != sb_[b]) return false;
      fa_[a] = b;
      fb_[b] = a;
      trail_.push_back(a);
      queue.emplace_back(A_.range(a), B_.range(b));
      queue.emplace_back(A_.source(a), B_.source(b));
      queue.emplace_back(A_.inverse(a), B_.inverse(b));
      for (Index k : A_.range_fiber(A_.source(a)))
        if (fa_[k] >= 0) {
          Index bk = fa_[k];
          if (!B_.composable(b, bk)) return false;
          queue.emplace_back(A_.compose(a, k), B_.compose(b, bk));
        }
      for (Index k : A_.source_fiber(A_.range(a)))
        if (fa_[k] >= 0) {
          Index bk = fa_[k];
          if (!B_.composable(bk, b)) return false;
          queue.emplace_back(A_.compose(k, a), B_.compose(bk, b));
        }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      Index a = trail_.back();
      trail_.pop_back();
      fb_[fa_[a]] = -1;
      fa_[a] = -1;
    }
  }

  bool search(std::size_t from) {
    std::size_t g = from;
    while (g < A_.size() && fa_[g] >= 0) ++g;
    if (g == A_.size()) return true;
    Index a = static_cast<Index>(g);
    for (std::size_t c = 0; c < B_.size(); ++c) {
      Index b = static_cast<Index>(c);
      if (fb_[b] >= 0 || sa_[a] != sb_[b]) continue;
      if (fa_[A_.range(a)] >= 0 && fa_[A_.range(a)] != B_.range(b)) continue;
      if (fa_[A_.source(a)] >= 0 && fa_[A_.source(a)] != B_.source(b)) continue;
      std::size_t mark = trail_.size();
      if (assign(a, b) && search(g + 1)) return true;
      undo(mark);
    }
    return false;
  }

  const FiniteGroupoid& A_;
  const FiniteGroupoid& B_;
  std::vector<Sig> sa_, sb_;
  std::vector<Index> fa_, fb_, trail_;
};

}  // namespace

std::optional<std::vector<Index>> find_isomorphism(const FiniteGroupoid& A, const FiniteGroupoid& B) {
  if (A.size() > 512 || B.size() > 512) throw InputError("isomorphism check is limited to 512 elements");
  Matcher m(A, B);
  if (!m.plausible()) return std::nullopt;
  if (!m.solve()) return std::nullopt;
  return m.map();
}

bool isomorphic(const FiniteGroupoid& A, const FiniteGroupoid& B) { return find_isomorphism(A, B).has_value(); }

bool groups_isomorphic(const FiniteGroup& A, const FiniteGroup& B) {
  return isomorphic(*group_groupoid(A), *group_groupoid(B));
}

}  // namespace isonorm
