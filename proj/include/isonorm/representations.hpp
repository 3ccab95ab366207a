#pragma once

#include <map>
#include <string>
#include <vector>

#include "isonorm/algebra.hpp"
#include "isonorm/grading.hpp"
#include "isonorm/groupoid.hpp"
#include "isonorm/numerics.hpp"
#include "isonorm/words.hpp"

namespace isonorm {

struct MatrixRep {
  std::vector<std::string> basis;
  Matrix matrix;
  std::string provenance;
};

// rho_x(f) on l2(G_x), basis sorted by element id.
MatrixRep regular_rep_at(const FiniteGroupoid& G, Index x, const AlgebraElement& f);
// Left regular representation of the isotropy group, h read on K.members.
MatrixRep group_regular_matrix(const IsotropyGroup& K, const AlgebraElement& h);
// Sum over terms of a(w) times the permutation of w on the cosets.
MatrixRep quasi_regular_rep(const SchreierLevel& level, const WordElement& a);

// Finite-dimensional representation of a finite group, one matrix per group index.
struct UnitaryRep {
  int dim = 0;
  std::vector<Matrix> images;
};

UnitaryRep trivial_rep(const FiniteGroup& K);
UnitaryRep regular_unitary_rep(const FiniteGroup& K);
// Extends generator images over the group by breadth-first products. Throws CheckFailure
// when two products disagree, then runs check_unitary_rep.
UnitaryRep rep_from_generators(const FiniteGroup& K, const std::vector<std::pair<int, Matrix>>& generators);
// Exhaustive check of rho(a)rho(b) = rho(ab) and unitarity. Throws CheckFailure.
void check_unitary_rep(const FiniteGroup& K, const UnitaryRep& rho, double tol = 1e-12);
// Sum of h(k) rho(k) over the isotropy group.
Matrix rep_of(const IsotropyGroup& K, const UnitaryRep& rho, const AlgebraElement& h);

// Cosets of G_x / G^x_x are indexed by the ranges y in the orbit of x, in increasing
// order; the representative of a coset is its least element.
struct InductionData {
  IsotropyGroup K;
  std::vector<Index> representatives;
  std::vector<int> coset_of_unit;  // unit -> coset position, -1 outside the orbit
};
InductionData induction_data(const FiniteGroupoid& G, Index x);

// (Ind rho)(f) on (cosets) x (rep space).
MatrixRep induce(const FiniteGroupoid& G, Index x, const UnitaryRep& rho, const AlgebraElement& f);
// The coisometry v : xi -> xi(x), as a dim x (cosets*dim) matrix.
Matrix coisometry(const FiniteGroupoid& G, Index x, const UnitaryRep& rho);
double compression_identity_check(const FiniteGroupoid& G, Index x, const UnitaryRep& rho, const AlgebraElement& f);

// GNS data of a positive-type function on a finite group, from the Gram matrix
// [phi(k_i^-1 k_j)] with eigenvalue cutoff 1e-10.
struct GnsTriple {
  UnitaryRep pi;
  Vector xi;
};
GnsTriple gns(const FiniteGroup& K, const std::vector<Complex>& phi, double cutoff = 1e-10);

struct CyclicityReport {
  bool cyclic = false;
  int rank = 0;
  int dimension = 0;
};
// phi is indexed like isotropy_group(G, x).group. The batch is every delta function on G.
CyclicityReport gns_cyclicity_check(const GroupoidPtr& G, Index x, const std::vector<Complex>& phi);

// Norms of f and of delta(f) = sum f(g) delta_(g, Phi(g)) on G x Gamma.
struct CoactionReport {
  double norm_f = 0.0;
  double norm_delta = 0.0;
};
CoactionReport coaction_isometry_check(const FiniteGroupoid& G, const Grading& phi, const AlgebraElement& f);

// U_g for each g in G^x_x.
struct BisectionFamily {
  Index x = -1;
  std::map<Index, std::vector<Index>> sets;
};

struct BlockDecomposition {
  std::vector<std::vector<Index>> classes;  // partition of G_y, each sorted
  std::vector<bool> grading_injective;       // per class
  bool block_diagonal = true;                // for the supplied f, if any
};
// Classes of g ~ ug, u in the union of the family, on G_y.
BlockDecomposition graded_block_decomposition(const FiniteGroupoid& G, const Grading& phi, const BisectionFamily& U,
                                              Index y, const AlgebraElement* f = nullptr);

}  // namespace isonorm
