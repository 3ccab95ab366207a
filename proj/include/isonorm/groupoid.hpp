#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "isonorm/finite_group.hpp"

namespace isonorm {

using Index = int;

// Raw groupoid data as read from a file, before any axiom is checked.
struct GroupoidDescription {
  std::string id;
  std::vector<std::string> elements;
  std::vector<std::string> units;
  std::map<std::string, std::string> range;
  std::map<std::string, std::string> source;
  std::vector<std::array<std::string, 3>> compose;
};

struct ValidationReport {
  bool ok = true;
  std::string axiom;    // short tag of the violated axiom
  std::string message;  // human readable
  std::vector<std::string> witness;
};

ValidationReport validate_groupoid(const GroupoidDescription& d);

// Finite discrete groupoid. Elements are indexed in lexicographic order of their ids.
class FiniteGroupoid {
 public:
  // Runs validate_groupoid and throws InputError carrying the report message on failure.
  static std::shared_ptr<const FiniteGroupoid> from_description(const GroupoidDescription& d);

  const std::string& id() const { return id_; }
  std::size_t size() const { return names_.size(); }
  const std::string& name(Index g) const { return names_[g]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Index> find(std::string_view name) const;
  Index index(std::string_view name) const;  // throws InputError
  Index unit(std::string_view name) const;   // throws InputError unless a unit

  Index range(Index g) const { return range_[g]; }
  Index source(Index g) const { return source_[g]; }
  Index inverse(Index g) const { return inverse_[g]; }
  bool is_unit(Index g) const { return range_[g] == g && is_unit_[g]; }
  const std::vector<Index>& units() const { return units_; }

  // G^u and G_u, sorted.
  const std::vector<Index>& range_fiber(Index u) const { return range_fiber_[u]; }
  const std::vector<Index>& source_fiber(Index u) const { return source_fiber_[u]; }
  std::vector<Index> isotropy(Index u) const;
  std::vector<Index> arrows(Index from, Index to) const;  // G^to_from

  bool composable(Index g, Index h) const { return source_[g] == range_[h]; }
  Index compose(Index g, Index h) const {  // -1 when not composable
    if (source_[g] != range_[h]) return -1;
    return table_[offset_[g] + pos_in_range_fiber_[h]];
  }

  GroupoidDescription describe() const;

 private:
  FiniteGroupoid() = default;
  friend class GroupoidBuilder;

  std::string id_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, Index> lookup_;
  std::vector<char> is_unit_;
  std::vector<Index> range_, source_, inverse_, units_;
  std::vector<std::vector<Index>> range_fiber_, source_fiber_;
  std::vector<std::size_t> offset_;
  std::vector<Index> pos_in_range_fiber_;
  std::vector<Index> table_;
};

using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

// Assembles a groupoid from element data and a composition rule, then validates it.
class GroupoidBuilder {
 public:
  // Returns the element's builder id.
  int add(std::string name, bool unit);
  void set_ends(int g, int range, int source);
  std::size_t size() const { return names_.size(); }
  const std::string& name(int g) const { return names_[g]; }
  int range(int g) const { return range_[g]; }
  int source(int g) const { return source_[g]; }
  // compose(g, h) returns a builder id, or -1 if undefined. Called for every composable pair.
  template <class F>
  GroupoidPtr build(std::string id, F&& compose) const {
    index_fibers();
    GroupoidDescription d = base(std::move(id));
    for (std::size_t g = 0; g < names_.size(); ++g)
      for (int h : by_range_[source_[g]]) {
        int gh = compose(static_cast<int>(g), h);
        if (gh >= 0) d.compose.push_back({names_[g], names_[h], names_[gh]});
      }
    return FiniteGroupoid::from_description(d);
  }
  // Fibers by range, valid after all set_ends calls.
  void index_fibers() const;

 private:
  GroupoidDescription base(std::string id) const;
  std::vector<std::string> names_;
  std::vector<char> unit_;
  std::vector<int> range_, source_;
  mutable std::vector<std::vector<int>> by_range_;
};

struct IsotropyGroup {
  FiniteGroup group;           // names are groupoid element ids, identity is x
  std::vector<Index> members;  // members[i] is the groupoid element of group index i
  std::vector<int> position;   // groupoid index -> group index, -1 outside
};

IsotropyGroup isotropy_group(const FiniteGroupoid& G, Index x);
std::vector<std::vector<Index>> orbits(const FiniteGroupoid& G);
bool is_bisection(const FiniteGroupoid& G, const std::vector<Index>& set);

}  // namespace isonorm
