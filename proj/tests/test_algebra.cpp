#include <doctest.h>

#include "corpus.hpp"
#include "isonorm/algebra.hpp"
#include "isonorm/constructions.hpp"
#include "isonorm/norms.hpp"
#include "oracles.hpp"

using namespace isonorm;
using namespace isonorm::testing;

namespace {

GroupoidPtr twelve_element_groupoid() {
  // Z/4 on two points through Z/2 (8 elements) and Z/2 x Z/2 (4 elements)
  GroupAction a;
  a.group = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(4));
  a.points = {"p", "q"};
  a.image = {{0, 1}, {1, 0}, {0, 1}, {1, 0}};
  const GroupoidPtr T = transformation_groupoid(a).groupoid;
  const GroupoidPtr V = group_groupoid(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)), "v");
  return disjoint_union({T, V}, {"t:", "v:"});
}

}  // namespace

TEST_CASE("delta convolution") {
  const GroupoidPtr G = twelve_element_groupoid();
  REQUIRE(G->size() == 12);
  for (std::size_t g = 0; g < G->size(); ++g)
    for (std::size_t h = 0; h < G->size(); ++h) {
      const auto p = convolve(AlgebraElement::delta(G, static_cast<Index>(g)), AlgebraElement::delta(G, static_cast<Index>(h)));
      const Index gh = G->compose(static_cast<Index>(g), static_cast<Index>(h));
      if (gh < 0)
        CHECK(p.empty());
      else
        CHECK(p == AlgebraElement::delta(G, gh));
    }
}

TEST_CASE("(e + g)^2 = 2e + 2g in Z/2") {
  const GroupoidPtr Z2 = group_groupoid(FiniteGroup::cyclic(2), "z2");
  const AlgebraElement f = AlgebraElement::delta(Z2, Z2->index("e")) + AlgebraElement::delta(Z2, Z2->index("g"));
  CHECK(convolve(f, f) == f * 2.0);
}

TEST_CASE("convolution matches the regular representation oracle") {
  const GroupoidPtr G = twelve_element_groupoid();
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const AlgebraElement f1 = random_element(G, rng), f2 = random_element(G, rng);
    const AlgebraElement p = convolve(f1, f2);
    for (Index x : G->units()) {
      const Matrix lhs = oracle_regular_matrix(*G, x, p);
      const Matrix rhs = oracle_regular_matrix(*G, x, f1) * oracle_regular_matrix(*G, x, f2);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("associativity on all delta triples") {
  for (const auto& c : build_corpus(8, 17, 30)) {
    const GroupoidPtr& G = c.g.groupoid;
    for (std::size_t a = 0; a < G->size(); ++a)
      for (std::size_t b = 0; b < G->size(); ++b)
        for (std::size_t d = 0; d < G->size(); ++d) {
          const auto A = AlgebraElement::delta(G, static_cast<Index>(a));
          const auto B = AlgebraElement::delta(G, static_cast<Index>(b));
          const auto D = AlgebraElement::delta(G, static_cast<Index>(d));
          REQUIRE(convolve(convolve(A, B), D) == convolve(A, convolve(B, D)));
        }
  }
}

TEST_CASE("involution") {
  const GroupoidPtr G = twelve_element_groupoid();
  for (std::size_t g = 0; g < G->size(); ++g) {
    CHECK(involution(AlgebraElement::delta(G, static_cast<Index>(g))) == AlgebraElement::delta(G, G->inverse(static_cast<Index>(g))));
    CHECK(involution(AlgebraElement::delta(G, static_cast<Index>(g), Complex(0, 1))) ==
          AlgebraElement::delta(G, G->inverse(static_cast<Index>(g)), Complex(0, -1)));
  }
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const AlgebraElement f1 = random_element(G, rng), f2 = random_element(G, rng);
    CHECK(max_abs_difference(involution(convolve(f1, f2)), convolve(involution(f2), involution(f1))) <= 1e-14);
    CHECK(reduced_norm(*G, involution(f1)).value == doctest::Approx(reduced_norm(*G, f1).value).epsilon(1e-10));
  }
}

TEST_CASE("restriction to isotropy") {
  const GroupoidPtr G = twelve_element_groupoid();
  const Index x = G->index("t:p");
  const Index off = G->index("t:(g,p)");
  CHECK(restrict_to_isotropy(AlgebraElement::delta(G, off), x).empty());
  const Index iso = G->index("t:(g2,p)");
  CHECK(restrict_to_isotropy(AlgebraElement::delta(G, iso), x) == AlgebraElement::delta(G, iso));

  Rng rng(8);
  for (const auto& c : build_corpus(50, 23, 20)) {
    const GroupoidPtr& H = c.g.groupoid;
    const AlgebraElement f = random_element(H, rng);
    const Index u = H->units()[rng.index(H->units().size())];
    CHECK(oracle_reduced_norm(*H, restrict_to_isotropy(f, u)) <= oracle_reduced_norm(*H, f) + 1e-10);
  }
}

TEST_CASE("multiplicative domain") {
  const GroupoidPtr G = twelve_element_groupoid();
  const Index x = G->index("t:p");
  Rng rng(4);
  const AlgebraElement on_iso = random_element_on(G, G->isotropy(x), rng);
  const auto r1 = multiplicative_domain_check(on_iso, x);
  CHECK(r1.applies);
  CHECK(r1.verified);

  const auto r2 = multiplicative_domain_check(AlgebraElement::delta(G, G->index("t:(g,q)")), x);
  CHECK_FALSE(r2.applies);
  REQUIRE(r2.witness.has_value());
  const AlgebraElement fp = AlgebraElement::delta(G, *r2.witness);
  const AlgebraElement f = AlgebraElement::delta(G, G->index("t:(g,q)"));
  const bool left = restrict_to_isotropy(convolve(f, fp), x) == convolve(restrict_to_isotropy(f, x), restrict_to_isotropy(fp, x));
  const bool right = restrict_to_isotropy(convolve(fp, f), x) == convolve(restrict_to_isotropy(fp, x), restrict_to_isotropy(f, x));
  CHECK_FALSE((left && right));

  const GroupoidPtr Z3 = group_groupoid(FiniteGroup::cyclic(3), "z3");
  const auto r3 = multiplicative_domain_check(random_element(Z3, rng, 1.0), Z3->units()[0]);
  CHECK(r3.applies);
  CHECK(r3.verified);
}

TEST_CASE("bisection decomposition") {
  const GroupoidPtr G = twelve_element_groupoid();
  Rng rng(6);
  const AlgebraElement f = random_element(G, rng, 0.7);
  std::vector<std::vector<Index>> singletons;
  for (const auto& [g, c] : f.terms()) singletons.push_back({g});
  const auto pieces = bisection_decomposition(f, singletons);
  REQUIRE(pieces.size() == singletons.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) CHECK(pieces[i] == AlgebraElement::delta(G, singletons[i][0], f(singletons[i][0])));

  std::vector<std::vector<Index>> overlapping{G->units()};
  for (std::size_t g = 0; g < G->size(); ++g) overlapping.push_back({static_cast<Index>(g)});
  AlgebraElement sum(G);
  for (const auto& p : bisection_decomposition(f, overlapping)) sum = sum + p;
  CHECK(sum == f);

  CHECK(bisection_decomposition(AlgebraElement(G), overlapping).empty());
}
