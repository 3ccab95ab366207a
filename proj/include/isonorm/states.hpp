#pragma once

#include <map>
#include <string>
#include <vector>

#include "isonorm/algebra.hpp"
#include "isonorm/groupoid.hpp"
#include "isonorm/towers.hpp"
#include "isonorm/words.hpp"

namespace isonorm {

// mu on units and phi_x on G^x_x. Missing masses and field values read as 0.
struct StateData {
  std::map<Index, double> mu;
  std::map<Index, std::map<Index, Complex>> fields;

  double mass(Index x) const;
  Complex field(Index x, Index g) const;
};

// Masses nonnegative summing to 1 within 1e-12, phi_x(x) = 1 and [phi_x(g^-1 h)]
// PSD (within psd_tol) wherever mu(x) > 0. Throws InputError.
void validate_state_data(const FiniteGroupoid& G, const StateData& d, double psd_tol = 1e-10);
// Exact equality of masses and of every field value on isotropy elements.
bool same_state_data(const FiniteGroupoid& G, const StateData& a, const StateData& b);

// Linear functional determined by its values on delta functions.
class StateFunctional {
 public:
  StateFunctional(GroupoidPtr host, std::vector<Complex> weights);
  const GroupoidPtr& host() const { return host_; }
  const std::vector<Complex>& weights() const { return weights_; }
  Complex operator()(const AlgebraElement& f) const;

 private:
  GroupoidPtr host_;
  std::vector<Complex> weights_;
};

// phi(f) = sum_x mu(x) sum_{g in G^x_x} f(g) phi_x(g).
StateFunctional assemble_state(const GroupoidPtr& G, const StateData& d);

struct CentralizerReport {
  double max_violation = 0.0;
  std::vector<std::string> witness;  // unit, element
};
// max over units u and elements g of |phi(delta_u * delta_g) - phi(delta_g * delta_u)|.
CentralizerReport centralizer_check(const StateFunctional& phi);

// mu(x) = phi(delta_x); phi_x = phi/mu(x) on G^x_x, the delta_e-trace where mu(x) = 0.
// Throws CheckFailure if the centralizer check exceeds tol, InputError on a negative
// mass or a field that is not positive-type.
StateData extract_pair(const StateFunctional& phi, double tol = 1e-12);

// Minimum eigenvalue of [phi(delta_{g^-1 h})] over pairs with r(g) = r(h).
double gns_min_eigenvalue(const StateFunctional& phi);

// Tower-trace data: masses on the levels and at infinity, a trace on a finite word list,
// and probe elements for the one-sided test.
struct TraceData {
  std::vector<std::vector<double>> level_mu;
  double mu_inf = 0.0;
  std::map<Word, Complex> tau;
  std::vector<WordElement> probes;
};

struct FactorizationVerdict {
  bool pass = false;
  std::string reason;
  std::vector<std::string> witness;
  struct Probe {
    std::string label;
    double tau_abs = 0.0;
    double e_estimate = 0.0;
  };
  std::vector<Probe> probes;  // only evaluated when mu_inf > 0
};

// (i) uniform mass on every X_n; (ii) if mu_inf > 0, |tau(a)| <= e-estimate + tol on every probe.
// The second test is a necessary condition only. Throws InputError on malformed trace data.
FactorizationVerdict reduced_factorization_check(const QuotientTower& tower, const TraceData& data, double tol = 1e-10,
                                                 const TowerOptions& opt = {});

}  // namespace isonorm
