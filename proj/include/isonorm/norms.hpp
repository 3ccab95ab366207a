#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isonorm/algebra.hpp"
#include "isonorm/grading.hpp"
#include "isonorm/groupoid.hpp"
#include "isonorm/random.hpp"
#include "isonorm/representations.hpp"

namespace isonorm {

struct NormOptions {
  double tol = 1e-10;
  int jobs = 1;
};

struct NormReport {
  double value = 0.0;
  std::string method;
  std::vector<std::string> witness;
  double tolerance = 0.0;
};

// max over units of ||rho_x(f)||; the witness is the first unit attaining it.
NormReport reduced_norm(const FiniteGroupoid& G, const AlgebraElement& f, const NormOptions& opt = {});
// ||lambda(h)|| for the isotropy group at x.
double isotropy_regular_norm(const FiniteGroupoid& G, Index x, const AlgebraElement& h);
// ||h||_e of h on G^x_x as the reduced norm of its zero extension, cross-checked
// against the isotropy regular norm.
NormReport exotic_norm_finite(const FiniteGroupoid& G, Index x, const AlgebraElement& h, const NormOptions& opt = {});

enum class Perturbation { OffIsotropy, InvariantComplement };

struct InfimumProbe {
  double e_norm = 0.0;
  double zero_extension = 0.0;
  double min_sampled = 0.0;
  int samples = 0;
  bool ok = false;  // every sample >= e_norm - tol and the zero extension attains e_norm
};
InfimumProbe extension_infimum_probe(const FiniteGroupoid& G, Index x, const AlgebraElement& h, int n_samples,
                                     std::uint64_t seed, Perturbation kind = Perturbation::OffIsotropy,
                                     const NormOptions& opt = {});

// U_g = Phi^-1(Phi(g)) for every g in G^x_x.
BisectionFamily canonical_bisections(const FiniteGroupoid& G, const Grading& phi, Index x);

struct TmredReport {
  bool passed = false;
  std::string failed;  // "", "precondition", "(1)", "(2)", "(3)", "factorization"
  std::string message;
  std::vector<std::string> witness;
  std::vector<Index> neighbourhood;
  double max_deviation = 0.0;  // factorization, entrywise
  double e_norm = 0.0;         // certified equal to r_norm when passed
  double r_norm = 0.0;
  double extension_norm = 0.0;  // ||f||_r of the constructed extension
};
// V defaults to {x}. Hypothesis failures are reported, never thrown.
TmredReport tmred_certificate(const FiniteGroupoid& G, const Grading& phi, const BisectionFamily& U, const AlgebraElement& h,
                              const std::vector<Index>* V = nullptr, const NormOptions& opt = {});

struct TransportReport {
  AlgebraElement transported;
  double e_before = 0.0, e_after = 0.0;
  double r_before = 0.0, r_after = 0.0;
  bool ok = false;
};
// h'(g k g^-1) = h(k) for g in G^y_x.
TransportReport orbit_transport(const FiniteGroupoid& G, Index g, const AlgebraElement& h, const NormOptions& opt = {});

struct MoritaReport {
  GroupoidPtr reduction;
  int checked = 0;
  double max_deviation = 0.0;
  bool ok = false;
};
// Compares ||f||_r in T and in T restricted to the unit subset for every delta function
// and a random batch supported there. Throws CheckFailure if the subset or its
// nonempty complement misses a T-orbit.
MoritaReport morita_restriction_check(const GroupoidPtr& T, const std::vector<Index>& units, int batch = 8,
                                      std::uint64_t seed = kDefaultSeed, const NormOptions& opt = {});

struct ExactSequenceReport {
  std::size_t total = 0, complement = 0, isotropy = 0;
  bool homomorphism = false;
  bool surjective = false;
  bool ok = false;
};
// For an invariant unit x: dim C_c(G) = dim C_c(G \ G^x_x) + |G^x_x| and eta_x is a surjective homomorphism.
ExactSequenceReport exact_sequence_check(const GroupoidPtr& G, Index x);

}  // namespace isonorm
