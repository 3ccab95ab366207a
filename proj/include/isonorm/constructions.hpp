#pragma once

#include <string>
#include <vector>

#include "isonorm/finite_group.hpp"
#include "isonorm/grading.hpp"
#include "isonorm/groupoid.hpp"
#include "isonorm/words.hpp"

namespace isonorm {

// image[γ][x] is γx, or -1 where γ is undefined at x (partial actions only).
struct GroupAction {
  GroupPtr group;
  std::vector<std::string> points;
  std::vector<std::vector<int>> image;
};

// Partial action of a free group, given by partial injections for the generators.
// Words up to word_cap letters are enumerated; the result must close up inside the cap.
struct FreePartialAction {
  FreeGroup group;
  std::vector<std::string> points;
  std::vector<std::vector<int>> generator_image;  // per generator, -1 outside the domain
  int word_cap = 0;
};

// Throws CheckFailure naming the violated action axiom.
void check_global_action(const GroupAction& a);
void check_partial_action(const GroupAction& a);

GroupoidPtr group_groupoid(const FiniteGroup& K, std::string id = "");
GroupoidPtr pair_groupoid(int n);
GroupoidPtr product_groupoid(const FiniteGroupoid& A, const FiniteGroupoid& B);
GroupoidPtr disjoint_union(const std::vector<GroupoidPtr>& parts, const std::vector<std::string>& prefixes);

// Unit (e,x) is named x; other elements "(γ,x)".
GradedGroupoid transformation_groupoid(const GroupAction& a);
// Unit named x; other elements "(y,γ,x)".
GradedGroupoid partial_action_groupoid(const GroupAction& a);
GradedGroupoid partial_action_groupoid(const FreePartialAction& a);
// automorphism[γ][g] is the image of element g of G under γ.
GradedGroupoid semidirect_product(const GroupPtr& group, const FiniteGroupoid& G,
                                  const std::vector<std::vector<Index>>& automorphism);
// Elements [γ,x] identified when γx agree; named by the least γ.
GroupoidPtr germ_quotient(const GroupAction& a);
GradedGroupoid graded_image_groupoid(const FiniteGroupoid& G, const Grading& psi);
GroupoidPtr reduce_to_units(const FiniteGroupoid& T, const std::vector<Index>& units);
// G x Pair(2) reduced to G0 x {1} together with W x {2}. The second copy carries G restricted to W.
GroupoidPtr linking_groupoid(const FiniteGroupoid& G, const std::vector<Index>& second_units);

}  // namespace isonorm
