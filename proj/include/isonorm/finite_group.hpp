#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace isonorm {

// Finite group stored as a full multiplication table. Permutation
// generators are closed under composition at construction time.
class FiniteGroup {
 public:
  using Perm = std::vector<int>;

  // table[i][j] is the index of names[i]*names[j].
  static FiniteGroup from_table(std::vector<std::string> names, const std::vector<std::vector<int>>& table);
  static FiniteGroup from_named_table(std::vector<std::string> names,
                                      const std::vector<std::vector<std::string>>& table);
  // Elements are named by the shortlex-first generator word reaching them, "e" for the identity.
  // Product is composition: (p*q)(i) = p(q(i)).
  static FiniteGroup from_permutations(int degree, const std::vector<std::pair<std::string, Perm>>& generators,
                                       std::size_t max_order = 4096);

  static FiniteGroup trivial();
  static FiniteGroup cyclic(int n);
  static FiniteGroup dihedral(int n);
  static FiniteGroup symmetric(int n);
  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);

  std::size_t size() const { return names_.size(); }
  int identity() const { return identity_; }
  int multiply(int a, int b) const { return table_[static_cast<std::size_t>(a) * size() + b]; }
  int inverse(int a) const { return inverse_[a]; }
  const std::string& name(int a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> find(std::string_view name) const;
  int index(std::string_view name) const;  // throws InputError
  int order_of(int a) const;
  bool is_abelian() const;
  // Point action, present only for permutation-built groups.
  const std::optional<std::vector<Perm>>& permutations() const { return perms_; }

 private:
  FiniteGroup() = default;
  void finish();

  std::vector<std::string> names_;
  std::vector<int> table_;
  std::vector<int> inverse_;
  int identity_ = 0;
  std::unordered_map<std::string, int> lookup_;
  std::optional<std::vector<Perm>> perms_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

}  // namespace isonorm
