#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isonorm/groupoid.hpp"
#include "isonorm/random.hpp"

namespace isonorm {

using Complex = std::complex<double>;

// Finitely supported function on a groupoid. Exact zeros are never stored.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(GroupoidPtr host) : host_(std::move(host)) {}
  static AlgebraElement delta(GroupoidPtr host, Index g, Complex c = 1.0);

  const GroupoidPtr& host() const { return host_; }
  const std::map<Index, Complex>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  Complex operator()(Index g) const;
  void set(Index g, Complex c);
  void add(Index g, Complex c);

  double sup_norm() const;
  double l1_norm() const;

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(Complex c) const;
  bool operator==(const AlgebraElement& o) const { return host_ == o.host_ && terms_ == o.terms_; }

 private:
  GroupoidPtr host_;
  std::map<Index, Complex> terms_;
};

AlgebraElement convolve(const AlgebraElement& f1, const AlgebraElement& f2);
AlgebraElement involution(const AlgebraElement& f);
// Keeps the coefficients on G^x_x; the result lives on the same host.
AlgebraElement restrict_to_isotropy(const AlgebraElement& f, Index x);
double max_abs_difference(const AlgebraElement& a, const AlgebraElement& b);

struct MultiplicativeDomainReport {
  bool applies = false;
  bool verified = false;
  std::optional<Index> witness;  // delta f' breaking multiplicativity, when found
  double max_deviation = 0.0;
};

MultiplicativeDomainReport multiplicative_domain_check(const AlgebraElement& f, Index x, int batch = 16,
                                                       std::uint64_t seed = 0x9E3779B9ULL);

// Pieces sum to f, piece i supported in cover[i]. Each support point goes to the first member containing it.
std::vector<AlgebraElement> bisection_decomposition(const AlgebraElement& f, const std::vector<std::vector<Index>>& cover);

AlgebraElement random_element(const GroupoidPtr& G, Rng& rng, double density = 0.5);
AlgebraElement random_element_on(const GroupoidPtr& G, const std::vector<Index>& support, Rng& rng);

}  // namespace isonorm
