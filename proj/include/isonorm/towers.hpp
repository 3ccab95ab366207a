#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isonorm/finite_group.hpp"
#include "isonorm/groupoid.hpp"
#include "isonorm/numerics.hpp"
#include "isonorm/words.hpp"

namespace isonorm {

enum class Backend { Free, IntegerMatrix, FiniteTable };

using Mat2 = std::array<std::int64_t, 4>;  // row major

// Finitely generated group with total multiplication. Elements are packed
// into byte strings: letters for free words, four int64 entries for matrices,
// one int32 index for finite tables.
class GroupModel {
 public:
  using Element = std::string;

  static GroupModel free(FreeGroup alphabet);
  static GroupModel integer_matrix(FreeGroup alphabet, std::vector<Mat2> generators);
  static GroupModel finite_table(FreeGroup alphabet, GroupPtr group, std::vector<int> generators);

  Backend backend() const { return backend_; }
  const FreeGroup& alphabet() const { return alphabet_; }
  std::size_t rank() const { return alphabet_.rank(); }
  const std::vector<Mat2>& matrices() const { return matrices_; }

  Element identity() const;
  Element letter(int l) const;  // +k generator, -k inverse
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  Element evaluate(const Word& w) const;
  std::string format(const Element& a) const;

 private:
  Backend backend_ = Backend::Free;
  FreeGroup alphabet_;
  std::vector<Mat2> matrices_;
  GroupPtr table_;
  std::vector<int> table_gens_;
};

Mat2 mat_multiply(const Mat2& a, const Mat2& b);  // throws InputError on overflow

class QuotientTower {
 public:
  // Checks transitivity, nesting through an equivariant projection, nondecreasing
  // size, and for matrix and table backends that words equal in the group act
  // equally on every level (words up to sample_length). Throws InputError.
  static QuotientTower make(GroupModel group, std::vector<SchreierLevel> levels, int sample_length = 6);

  const GroupModel& group() const { return group_; }
  const std::vector<SchreierLevel>& levels() const { return levels_; }
  // projection(n)[c] is the level-n coset under level-(n+1) coset c.
  const std::vector<int>& projection(std::size_t n) const { return projection_[n]; }

 private:
  GroupModel group_;
  std::vector<SchreierLevel> levels_;
  std::vector<std::vector<int>> projection_;
};

SchreierLevel cyclic_level(int n);
// Left multiplication on the image of the generators in SL2(Z/modulus), explored from the identity.
SchreierLevel congruence_level(const std::vector<Mat2>& generators, std::int64_t modulus, std::size_t cap = 200000);

struct TowerOptions {
  PowerOptions power;
  int dense_limit = 2000;
  std::size_t ball_cap = 4000000;
  double tol = 1e-9;  // monotonicity and convergence slack
  int jobs = 1;
};

struct NormSequence {
  std::vector<double> values;
  std::vector<std::string> methods;
  bool nondecreasing = true;
};
// ||lambda_n(a)|| for n = 1..N. Throws CheckFailure if the sequence decreases by more than tol.
NormSequence quasi_norm_sequence(const QuotientTower& tower, const WordElement& a, std::size_t N, const TowerOptions& opt = {});

struct EstimateReport {
  double estimate = 0.0;  // certified lower bound on ||a||_e
  bool converged = false;  // heuristic: last two values within stall_tol
  NormSequence sequence;
};
EstimateReport e_norm_estimate(const QuotientTower& tower, const WordElement& a, std::size_t N, double stall_tol = 1e-9,
                               const TowerOptions& opt = {});

struct BallReport {
  double value = 0.0;
  std::size_t ball_size = 0;
  std::string method;
};
// sqrt of ||P lambda(a* a) P|| on the ball of radius R, i.e. ||lambda(a) P||: a lower bound on ||a||_r.
BallReport reduced_norm_lower_bound(const GroupModel& group, const WordElement& a, int R, const TowerOptions& opt = {});

struct SchurReport {
  double value = 0.0;
  double r = 1.0;
};
// Weighted Schur test with weights r^|x| on the Cayley tree, minimized over r in (0,1].
SchurReport schur_upper_bound(const GroupModel& group, const WordElement& a);

struct Verdict {
  double e_lower = 0.0;
  std::optional<double> r_upper;
  std::optional<double> r_lower;
  bool decidable = false;
  bool exotic = false;
  bool e_converged = false;
};
Verdict exoticness_verdict(const QuotientTower& tower, const WordElement& a, std::size_t N, int R, const TowerOptions& opt = {});

struct Truncation {
  GroupoidPtr groupoid;
  std::vector<int> block_sizes;
  bool blocks_ok = true;
};
// Disjoint union of (Gamma/Gamma_n) x X_n for n <= N, the quotient group being
// the permutation image of the generators.
Truncation bundle_truncation(const QuotientTower& tower, std::size_t N, std::size_t element_cap = 20000);

}  // namespace isonorm
