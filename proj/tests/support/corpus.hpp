#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isonorm/algebra.hpp"
#include "isonorm/constructions.hpp"
#include "isonorm/random.hpp"
#include "isonorm/representations.hpp"
#include "isonorm/states.hpp"

namespace isonorm::testing {

struct CorpusGroupoid {
  std::string kind;  // transformation, partial, semidirect, germ
  GradedGroupoid g;
};

GroupPtr random_small_group(Rng& rng);
// Disjoint union of coset actions K/H for random cyclic or trivial subgroups H.
GroupAction random_action(const GroupPtr& K, Rng& rng, std::size_t max_points);
// Round robin over the four kinds, each groupoid at most max_elements.
std::vector<CorpusGroupoid> build_corpus(std::size_t count, std::uint64_t seed, std::size_t max_elements = 64);

// U λ U* for a random unitary U, optionally with a trivial summand.
UnitaryRep random_unitary_rep(const FiniteGroup& K, Rng& rng);

struct CorruptedFamily {
  GroupoidPtr groupoid;
  Grading grading;
  BisectionFamily family;
  std::string expected;  // "(1)", "(2)" or "(3)"
};
std::vector<CorruptedFamily> corrupted_families(std::size_t count, std::uint64_t seed);

// Z/n group plus a pair groupoid on n+1 points whose arrow p_i -> p_j is labelled j - i mod n;
// with U_g running along the chain, the n-fold product leaves the unit space.
CorruptedFamily chain_violation(int n);

struct LinkingInstance {
  GroupoidPtr base;
  GroupoidPtr linking;
  std::vector<Index> first, second;  // unit subsets of the linking groupoid
};
std::vector<LinkingInstance> linking_corpus(std::size_t count, std::uint64_t seed);

// Dyadic masses and fields: convex combinations of subgroup indicators times
// characters with values in {±1, ±i}. Products and quotients of such data are exact.
StateData random_dyadic_state(const FiniteGroupoid& G, Rng& rng);
// General double-valued state data for tolerance-based round trips.
StateData random_state(const FiniteGroupoid& G, Rng& rng);

}  // namespace isonorm::testing
