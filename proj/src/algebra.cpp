#include "isonorm/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "isonorm/errors.hpp"
#include "isonorm/random.hpp"

namespace isonorm {

namespace {

void same_host(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.host() != b.host()) throw InputError("host mismatch between algebra elements");
}

}  // namespace

AlgebraElement AlgebraElement::delta(GroupoidPtr host, Index g, Complex c) {
  AlgebraElement f(std::move(host));
  f.set(g, c);
  return f;
}

Complex AlgebraElement::operator()(Index g) const {
  auto it = terms_.find(g);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

void AlgebraElement::set(Index g, Complex c) {
  if (!host_ || g < 0 || static_cast<std::size_t>(g) >= host_->size()) throw InputError("support point outside host groupoid");
  if (c == Complex(0.0))
    terms_.erase(g);
  else
    terms_[g] = c;
}

void AlgebraElement::add(Index g, Complex c) { set(g, (*this)(g) + c); }

double AlgebraElement::sup_norm() const {
  double m = 0.0;
  for (const auto& [g, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

double AlgebraElement::l1_norm() const {
  double s = 0.0;
  for (const auto& [g, c] : terms_) s += std::abs(c);
  return s;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  same_host(*this, o);
  AlgebraElement r = *this;
  for (const auto& [g, c] : o.terms_) r.add(g, c);
  return r;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const { return *this + o * Complex(-1.0); }

AlgebraElement AlgebraElement::operator*(Complex c) const {
  AlgebraElement r(host_);
  for (const auto& [g, v] : terms_) r.set(g, v * c);
  return r;
}

AlgebraElement convolve(const AlgebraElement& f1, const AlgebraElement& f2) {
  same_host(f1, f2);
  const FiniteGroupoid& G = *f1.host();
  std::map<Index, Complex> acc;
  // (f1*f2)(hk) collects f1(h) f2(k) over composable pairs
  for (const auto& [h, a] : f1.terms())
    for (const auto& [k, b] : f2.terms())
      if (G.composable(h, k)) acc[G.compose(h, k)] += a * b;
  AlgebraElement r(f1.host());
  for (const auto& [g, c] : acc) r.set(g, c);
  return r;
}

AlgebraElement involution(const AlgebraElement& f) {
  AlgebraElement r(f.host());
  for (const auto& [g, c] : f.terms()) r.set(f.host()->inverse(g), std::conj(c));
  return r;
}

AlgebraElement restrict_to_isotropy(const AlgebraElement& f, Index x) {
  const FiniteGroupoid& G = *f.host();
  if (!G.is_unit(x)) throw InputError(G.name(x) + " is not a unit");
  AlgebraElement r(f.host());
  for (const auto& [g, c] : f.terms())
    if (G.range(g) == x && G.source(g) == x) r.set(g, c);
  return r;
}

double max_abs_difference(const AlgebraElement& a, const AlgebraElement& b) {
  same_host(a, b);
  std::set<Index> keys;
  for (const auto& t : a.terms()) keys.insert(t.first);
  for (const auto& t : b.terms()) keys.insert(t.first);
  double m = 0.0;
  for (Index g : keys) m = std::max(m, std::abs(a(g) - b(g)));
  return m;
}

MultiplicativeDomainReport multiplicative_domain_check(const AlgebraElement& f, Index x, int batch, std::uint64_t seed) {
  const FiniteGroupoid& G = *f.host();
  if (!G.is_unit(x)) throw InputError(G.name(x) + " is not a unit");
  MultiplicativeDomainReport rep;
  rep.applies = true;
  for (const auto& [g, c] : f.terms()) {
    bool touches = G.range(g) == x || G.source(g) == x;
    bool inside = G.range(g) == x && G.source(g) == x;
    if (touches && !inside) rep.applies = false;
  }
  const AlgebraElement eta_f = restrict_to_isotropy(f, x);
  auto deviation = [&](const AlgebraElement& fp) {
    AlgebraElement eta_fp = restrict_to_isotropy(fp, x);
    double d1 = max_abs_difference(restrict_to_isotropy(convolve(f, fp), x), convolve(eta_f, eta_fp));
    double d2 = max_abs_difference(restrict_to_isotropy(convolve(fp, f), x), convolve(eta_fp, eta_f));
    return std::max(d1, d2);
  };
  const double tol = 1e-12 * std::max(1.0, f.l1_norm());
  for (std::size_t k = 0; k < G.size(); ++k) {
    double d = deviation(AlgebraElement::delta(f.host(), static_cast<Index>(k)));
    rep.max_deviation = std::max(rep.max_deviation, d);
    if (d > tol && !rep.witness) rep.witness = static_cast<Index>(k);
  }
  Rng rng(seed);
  for (int i = 0; i < batch; ++i) rep.max_deviation = std::max(rep.max_deviation, deviation(random_element(f.host(), rng)));
  rep.verified = rep.max_deviation <= tol;
  return rep;
}

std::vector<AlgebraElement> bisection_decomposition(const AlgebraElement& f, const std::vector<std::vector<Index>>& cover) {
  const FiniteGroupoid& G = *f.host();
  for (std::size_t i = 0; i < cover.size(); ++i)
    if (!is_bisection(G, cover[i])) throw InputError("cover member " + std::to_string(i) + " is not a bisection");
  std::vector<AlgebraElement> pieces(cover.size(), AlgebraElement(f.host()));
  for (const auto& [g, c] : f.terms()) {
    bool placed = false;
    for (std::size_t i = 0; i < cover.size() && !placed; ++i)
      if (std::find(cover[i].begin(), cover[i].end(), g) != cover[i].end()) {
        pieces[i].set(g, c);
        placed = true;
      }
    if (!placed) throw InputError("cover does not contain support point " + G.name(g));
  }
  if (f.empty()) pieces.clear();
  return pieces;
}

AlgebraElement random_element(const GroupoidPtr& G, Rng& rng, double density) {
  AlgebraElement f(G);
  for (std::size_t g = 0; g < G->size(); ++g)
    if (rng.coin(density)) f.set(static_cast<Index>(g), rng.complex_uniform());
  return f;
}

AlgebraElement random_element_on(const GroupoidPtr& G, const std::vector<Index>& support, Rng& rng) {
  AlgebraElement f(G);
  for (Index g : support) f.set(g, rng.complex_uniform());
  return f;
}

}  // namespace isonorm
