#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "isonorm/finite_group.hpp"
#include "isonorm/groupoid.hpp"
#include "isonorm/words.hpp"

namespace isonorm {

// Target group of a grading, with elements addressed by canonical labels.
class GradingGroup {
 public:
  explicit GradingGroup(GroupPtr finite) : impl_(std::move(finite)) {}
  explicit GradingGroup(FreeGroup free) : impl_(std::move(free)) {}

  bool is_finite() const { return std::holds_alternative<GroupPtr>(impl_); }
  const FiniteGroup& finite() const { return *std::get<GroupPtr>(impl_); }
  const GroupPtr& finite_ptr() const { return std::get<GroupPtr>(impl_); }
  const FreeGroup& free() const { return std::get<FreeGroup>(impl_); }

  std::string identity() const;
  std::string multiply(const std::string& a, const std::string& b) const;
  std::string inverse(const std::string& a) const;
  std::string canonical(const std::string& a) const;  // throws InputError on unknown labels

 private:
  std::variant<GroupPtr, FreeGroup> impl_;
};

using GradingGroupPtr = std::shared_ptr<const GradingGroup>;

struct Grading {
  GradingGroupPtr group;
  std::vector<std::string> label;  // per groupoid element, canonical
};

// Homomorphism check: label(gh) = label(g)label(h), label(u) = identity.
ValidationReport check_grading(const FiniteGroupoid& G, const Grading& phi);
// Injective on G^x_x for every unit x. Returns the first offending pair if not.
std::optional<std::pair<Index, Index>> grading_non_injective_pair(const FiniteGroupoid& G, const Grading& phi);

struct GradedGroupoid {
  GroupoidPtr groupoid;
  std::optional<Grading> grading;
};

}  // namespace isonorm
