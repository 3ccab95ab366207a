#include <doctest.h>

#include <algorithm>

#include "corpus.hpp"
#include "isonorm/constructions.hpp"
#include "isonorm/errors.hpp"
#include "isonorm/grading.hpp"
#include "isonorm/groupoid.hpp"
#include "isonorm/isomorphism.hpp"
#include "oracles.hpp"

using namespace isonorm;
using namespace isonorm::testing;

namespace {

GroupoidDescription z2_description() {
  GroupoidDescription d;
  d.id = "z2";
  d.elements = {"e", "g"};
  d.units = {"e"};
  d.range = {{"e", "e"}, {"g", "e"}};
  d.source = d.range;
  d.compose = {{"e", "e", "e"}, {"e", "g", "g"}, {"g", "e", "g"}, {"g", "g", "e"}};
  return d;
}

GroupAction swap_action() {
  GroupAction a;
  a.group = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(2));
  a.points = {"p", "q"};
  a.image = {{0, 1}, {1, 0}};
  return a;
}

// Z/4 acting on two points through Z/4 -> Z/2.
GroupAction z4_through_z2() {
  GroupAction a;
  a.group = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(4));
  a.points = {"p", "q"};
  a.image = {{0, 1}, {1, 0}, {0, 1}, {1, 0}};
  return a;
}

}  // namespace

TEST_CASE("Z/2 as a one-unit groupoid validates") {
  const auto r = validate_groupoid(z2_description());
  CHECK(r.ok);
  CHECK(brute_force_axioms(z2_description()));
}

TEST_CASE("compose(g,g)=g breaks the inverse law") {
  GroupoidDescription d = z2_description();
  d.compose.back() = {"g", "g", "g"};
  const auto r = validate_groupoid(d);
  CHECK_FALSE(r.ok);
  CHECK(r.message == "inverse law violated at g");
  CHECK(r.witness == std::vector<std::string>{"g"});
  CHECK_FALSE(brute_force_axioms(d));
  CHECK_THROWS_AS(FiniteGroupoid::from_description(d), InputError);
}

TEST_CASE("validator agrees with the brute-force oracle on mutated tables") {
  Rng rng(11);
  const auto corpus = build_corpus(24, 5, 24);
  int rejected = 0;
  for (const auto& c : corpus) {
    GroupoidDescription d = c.g.groupoid->describe();
    CHECK(validate_groupoid(d).ok);
    CHECK(brute_force_axioms(d));
    if (d.compose.empty()) continue;
    auto& t = d.compose[rng.index(d.compose.size())];
    t[2] = d.elements[rng.index(d.elements.size())];
    const bool ok = validate_groupoid(d).ok;
    CHECK(ok == brute_force_axioms(d));
    rejected += !ok;
  }
  CHECK(rejected > 0);
}

TEST_CASE("swap transformation groupoid") {
  const GradedGroupoid T = transformation_groupoid(swap_action());
  const FiniteGroupoid& G = *T.groupoid;
  CHECK(G.size() == 4);
  CHECK(G.units().size() == 2);
  CHECK(brute_force_axioms(G.describe()));
  for (Index u : G.units()) CHECK(isotropy_group(G, u).group.size() == 1);
  const auto O = orbits(G);
  REQUIRE(O.size() == 1);
  CHECK(O[0].size() == 2);
}

TEST_CASE("isotropy and orbit examples") {
  const GroupoidPtr Z2 = group_groupoid(FiniteGroup::cyclic(2), "z2");
  const IsotropyGroup K = isotropy_group(*Z2, Z2->units()[0]);
  CHECK(K.group.size() == 2);
  CHECK(orbits(*Z2).size() == 1);

  const GradedGroupoid T = transformation_groupoid(z4_through_z2());
  for (Index u : T.groupoid->units()) CHECK(isotropy_group(*T.groupoid, u).group.size() == 2);

  const GroupoidPtr two = disjoint_union({Z2, group_groupoid(FiniteGroup::cyclic(3), "z3")}, {"a:", "b:"});
  CHECK(orbits(*two).size() == 2);
}

TEST_CASE("transformation groupoid degenerate cases") {
  GroupAction a;
  a.group = std::make_shared<FiniteGroup>(FiniteGroup::trivial());
  a.points = {"x", "y", "z"};
  a.image = {{0, 1, 2}};
  const GradedGroupoid T = transformation_groupoid(a);
  CHECK(T.groupoid->size() == 3);
  CHECK(T.groupoid->units().size() == 3);

  GroupAction b;
  b.group = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(2));
  b.points = {"x"};
  b.image = {{0}, {0}};
  const GradedGroupoid U = transformation_groupoid(b);
  CHECK(isomorphic(*U.groupoid, *group_groupoid(FiniteGroup::cyclic(2))));
}

TEST_CASE("action axiom violations are input errors") {
  GroupAction a = swap_action();
  a.image[1] = {0, 0};
  CHECK_THROWS_AS(transformation_groupoid(a), InputError);
}

TEST_CASE("semidirect products") {
  const GroupoidPtr Z3 = group_groupoid(FiniteGroup::cyclic(3), "z3");
  const GroupoidPtr G = disjoint_union({Z3, Z3}, {"a:", "b:"});
  auto K = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(2));
  std::vector<std::vector<Index>> swap(2, std::vector<Index>(G->size())), fixed = swap;
  for (std::size_t g = 0; g < G->size(); ++g) {
    const std::string& n = G->name(static_cast<Index>(g));
    swap[0][g] = fixed[0][g] = fixed[1][g] = static_cast<Index>(g);
    swap[1][g] = G->index((n[0] == 'a' ? "b" : "a") + n.substr(1));
  }
  const GradedGroupoid S = semidirect_product(K, *G, swap);
  CHECK(brute_force_axioms(S.groupoid->describe()));
  for (Index u : S.groupoid->units()) {
    const IsotropyGroup I = isotropy_group(*S.groupoid, u);
    CHECK(I.group.size() == 3);
    // the grading kills the isotropy
    for (Index k : I.members) CHECK(S.grading->label[k] == S.grading->group->identity());
  }

  const GradedGroupoid T = semidirect_product(K, *Z3, {std::vector<Index>{0, 1, 2}, std::vector<Index>{0, 1, 2}});
  const IsotropyGroup I = isotropy_group(*T.groupoid, T.groupoid->units()[0]);
  CHECK(I.group.size() == 6);
  CHECK(groups_isomorphic(I.group, FiniteGroup::cyclic(6)));

  auto trivial = std::make_shared<FiniteGroup>(FiniteGroup::trivial());
  std::vector<std::vector<Index>> id(1, std::vector<Index>(G->size()));
  for (std::size_t g = 0; g < G->size(); ++g) id[0][g] = static_cast<Index>(g);
  CHECK(isomorphic(*semidirect_product(trivial, *G, id).groupoid, *G));
}

TEST_CASE("partial action groupoids") {
  GroupAction a;
  a.group = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(2));
  a.points = {"a", "b"};
  a.image = {{0, 1}, {0, -1}};
  const GradedGroupoid P = partial_action_groupoid(a);
  CHECK(P.groupoid->size() == 3);
  CHECK(P.groupoid->units().size() == 2);
  CHECK(isotropy_group(*P.groupoid, P.groupoid->unit("a")).group.size() == 2);
  CHECK(isotropy_group(*P.groupoid, P.groupoid->unit("b")).group.size() == 1);

  const GradedGroupoid full = partial_action_groupoid(swap_action());
  CHECK(isomorphic(*full.groupoid, *transformation_groupoid(swap_action()).groupoid));

  GroupAction empty = a;
  empty.image[1] = {-1, -1};
  CHECK(partial_action_groupoid(empty).groupoid->size() == 2);
}

TEST_CASE("free-group partial actions need the word cap to close") {
  FreePartialAction a;
  a.group = FreeGroup({'a'});
  a.points = {"x", "y", "z"};
  a.generator_image = {{1, 2, -1}};
  a.word_cap = 4;
  const GradedGroupoid P = partial_action_groupoid(a);
  CHECK(brute_force_axioms(P.groupoid->describe()));
  CHECK(P.groupoid->size() == 9);
  a.word_cap = 1;
  CHECK_THROWS_AS(partial_action_groupoid(a), InputError);
}

TEST_CASE("germ quotients") {
  const GroupAction free = swap_action();
  CHECK(isomorphic(*germ_quotient(free), *transformation_groupoid(free).groupoid));

  GroupAction triv;
  triv.group = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(2));
  triv.points = {"x"};
  triv.image = {{0}, {0}};
  CHECK(germ_quotient(triv)->size() == 1);

  CHECK(isomorphic(*germ_quotient(z4_through_z2()), *transformation_groupoid(swap_action()).groupoid));
}

TEST_CASE("graded image groupoid") {
  const GroupoidPtr Z4 = group_groupoid(FiniteGroup::cyclic(4), "z4");
  Grading psi;
  psi.group = std::make_shared<GradingGroup>(std::make_shared<FiniteGroup>(FiniteGroup::cyclic(2)));
  for (std::size_t g = 0; g < Z4->size(); ++g) {
    const std::string& n = Z4->name(static_cast<Index>(g));
    psi.label.push_back(n == "e" || n == "g2" ? "e" : "g");
  }
  REQUIRE(check_grading(*Z4, psi).ok);
  const GradedGroupoid img = graded_image_groupoid(*Z4, psi);
  CHECK(isomorphic(*img.groupoid, *group_groupoid(FiniteGroup::cyclic(2))));
  CHECK_FALSE(grading_non_injective_pair(*img.groupoid, *img.grading).has_value());

  Grading trivial;
  trivial.group = psi.group;
  trivial.label.assign(Z4->size(), "e");
  CHECK(graded_image_groupoid(*Z4, trivial).groupoid->size() == 1);

  const GradedGroupoid T = transformation_groupoid(swap_action());
  CHECK(isomorphic(*graded_image_groupoid(*T.groupoid, *T.grading).groupoid, *T.groupoid));
}

TEST_CASE("reductions to unit subsets") {
  const GradedGroupoid T = transformation_groupoid(z4_through_z2());
  const GroupoidPtr all = reduce_to_units(*T.groupoid, T.groupoid->units());
  CHECK(isomorphic(*all, *T.groupoid));
  const Index x = T.groupoid->units()[0];
  const GroupoidPtr one = reduce_to_units(*T.groupoid, {x});
  CHECK(isomorphic(*one, *group_groupoid(isotropy_group(*T.groupoid, x).group)));

  const GroupoidPtr L = linking_groupoid(*T.groupoid, T.groupoid->units());
  std::vector<Index> first;
  for (Index u : L->units())
    if (L->name(u).find("@11") != std::string::npos) first.push_back(u);
  CHECK(isomorphic(*reduce_to_units(*L, first), *T.groupoid));
}

TEST_CASE("every corpus groupoid satisfies the axioms") {
  const auto corpus = build_corpus(40, 99);
  for (const auto& c : corpus) {
    CHECK(c.g.groupoid->size() <= 64);
    CHECK(brute_force_axioms(c.g.groupoid->describe()));
    if (c.g.grading) CHECK(check_grading(*c.g.groupoid, *c.g.grading).ok);
  }
}
