#include "isonorm/states.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "isonorm/errors.hpp"
#include "isonorm/numerics.hpp"

namespace isonorm {

namespace {

double field_min_eigenvalue(const FiniteGroupoid& G, const StateData& d, Index x) {
  const IsotropyGroup K = isotropy_group(G, x);
  const int n = static_cast<int>(K.members.size());
  Matrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = d.field(x, K.members[K.group.multiply(K.group.inverse(i), j)]);
  if (hermitian_defect(M) > 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff())) return -INFINITY;
  return min_eigenvalue(M);
}

}  // namespace

double StateData::mass(Index x) const {
  auto it = mu.find(x);
  return it == mu.end() ? 0.0 : it->second;
}

Complex StateData::field(Index x, Index g) const {
  auto it = fields.find(x);
  if (it == fields.end()) return 0.0;
  auto jt = it->second.find(g);
  return jt == it->second.end() ? Complex(0.0) : jt->second;
}

void validate_state_data(const FiniteGroupoid& G, const StateData& d, double psd_tol) {
  double total = 0.0;
  for (const auto& [x, m] : d.mu) {
    if (x < 0 || static_cast<std::size_t>(x) >= G.size() || !G.is_unit(x)) throw InputError("mass assigned to a non-unit");
    if (!(m >= 0.0)) throw InputError("negative mass at " + G.name(x));
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InputError("masses sum to " + std::to_string(total) + ", not 1");
  for (const auto& [x, f] : d.fields) {
    if (x < 0 || static_cast<std::size_t>(x) >= G.size() || !G.is_unit(x)) throw InputError("field attached to a non-unit");
    for (const auto& [g, c] : f)
      if (G.range(g) != x || G.source(g) != x) throw InputError("field at " + G.name(x) + " has a value off the isotropy group: " + G.name(g));
  }
  for (Index x : G.units()) {
    if (d.mass(x) <= 0.0) continue;
    if (std::abs(d.field(x, x) - 1.0) > 1e-12) throw InputError("field at " + G.name(x) + " does not take the value 1 at the unit");
    if (field_min_eigenvalue(G, d, x) < -psd_tol) throw InputError("field at " + G.name(x) + " is not positive-type");
  }
}

bool same_state_data(const FiniteGroupoid& G, const StateData& a, const StateData& b) {
  for (Index x : G.units()) {
    if (a.mass(x) != b.mass(x)) return false;
    for (Index g : G.isotropy(x))
      if (a.field(x, g) != b.field(x, g)) return false;
  }
  return true;
}

StateFunctional::StateFunctional(GroupoidPtr host, std::vector<Complex> weights) : host_(std::move(host)), weights_(std::move(weights)) {
  if (weights_.size() != host_->size()) throw InputError("functional needs one weight per element");
}

Complex StateFunctional::operator()(const AlgebraElement& f) const {
  if (f.host() != host_) throw InputError("host mismatch between functional and element");
  Complex s = 0.0;
  for (const auto& [g, c] : f.terms()) s += c * weights_[g];
  return s;
}

StateFunctional assemble_state(const GroupoidPtr& host, const StateData& d) {
  const FiniteGroupoid& G = *host;
  validate_state_data(G, d);
  std::vector<Complex> w(G.size(), 0.0);
  for (Index x : G.units()) {
    const double m = d.mass(x);
    if (m == 0.0) continue;
    for (Index g : G.isotropy(x)) w[g] = d.field(x, g) * m;
  }
  return StateFunctional(host, std::move(w));
}

CentralizerReport centralizer_check(const StateFunctional& phi) {
  const FiniteGroupoid& G = *phi.host();
  CentralizerReport rep;
  // delta_u * delta_g = delta_g iff r(g) = u, delta_g * delta_u = delta_g iff s(g) = u
  for (Index u : G.units())
    for (std::size_t gi = 0; gi < G.size(); ++gi) {
      const Index g = static_cast<Index>(gi);
      const Complex left = G.range(g) == u ? phi.weights()[g] : Complex(0.0);
      const Complex right = G.source(g) == u ? phi.weights()[g] : Complex(0.0);
      const double v = std::abs(left - right);
      if (v > rep.max_violation) {
        rep.max_violation = v;
        rep.witness = {G.name(u), G.name(g)};
      }
    }
  return rep;
}

StateData extract_pair(const StateFunctional& phi, double tol) {
  const FiniteGroupoid& G = *phi.host();
  const CentralizerReport c = centralizer_check(phi);
  if (c.max_violation > tol) throw CheckFailure("functional does not contain C0(G0) in its centralizer", c.witness);
  StateData d;
  for (Index x : G.units()) {
    const Complex w = phi.weights()[x];
    if (std::abs(w.imag()) > tol || w.real() < -tol) throw InputError("negative extracted mass at " + G.name(x));
    const double m = std::max(0.0, w.real());
    d.mu[x] = m;
    auto& f = d.fields[x];
    for (Index g : G.isotropy(x)) f[g] = m > 0.0 ? phi.weights()[g] / m : Complex(g == x ? 1.0 : 0.0);
  }
  for (Index x : G.units())
    if (field_min_eigenvalue(G, d, x) < -1e-10) throw InputError("extracted field at " + G.name(x) + " is not positive-type");
  return d;
}

double gns_min_eigenvalue(const StateFunctional& phi) {
  const FiniteGroupoid& G = *phi.host();
  double m = INFINITY;
  for (Index y : G.units()) {
    const auto& fib = G.range_fiber(y);
    const int n = static_cast<int>(fib.size());
    Matrix M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = phi.weights()[G.compose(G.inverse(fib[i]), fib[j])];
    // phi need not be Hermitian on arbitrary input; test its Hermitian part
    m = std::min(m, min_eigenvalue((M + M.adjoint()) * 0.5));
    if (hermitian_defect(M) > 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff())) m = std::min(m, -hermitian_defect(M));
  }
  return G.units().empty() ? 0.0 : m;
}

FactorizationVerdict reduced_factorization_check(const QuotientTower& tower, const TraceData& data, double tol,
                                                 const TowerOptions& opt) {
  const auto& levels = tower.levels();
  if (data.level_mu.size() > levels.size()) throw InputError("malformed trace data: more mass levels than tower levels");
  double total = data.mu_inf;
  if (!(data.mu_inf >= 0.0)) throw InputError("malformed trace data: negative mass at infinity");
  for (std::size_t n = 0; n < data.level_mu.size(); ++n) {
    if (data.level_mu[n].size() != levels[n].cosets)
      throw InputError("malformed trace data: level " + std::to_string(n + 1) + " needs one mass per coset");
    for (double m : data.level_mu[n]) {
      if (!(m >= 0.0)) throw InputError("malformed trace data: negative mass on level " + std::to_string(n + 1));
      total += m;
    }
  }
  if (std::abs(total - 1.0) > 1e-12) throw InputError("malformed trace data: masses sum to " + std::to_string(total));
  FactorizationVerdict v;
  for (std::size_t n = 0; n < data.level_mu.size(); ++n)
    for (std::size_t c = 1; c < data.level_mu[n].size(); ++c)
      if (std::abs(data.level_mu[n][c] - data.level_mu[n][0]) > 1e-12) {
        v.reason = "mass on X_n is not a multiple of the counting measure";
        v.witness = {"level " + std::to_string(n + 1), "coset " + std::to_string(c)};
        return v;
      }
  if (data.mu_inf == 0.0) {
    v.pass = true;
    v.reason = "uniform level masses; no mass at infinity, tau irrelevant";
    return v;
  }
  const FreeGroup& F = tower.group().alphabet();
  auto tau_at = [&](const Word& w) -> std::optional<Complex> {
    auto it = data.tau.find(FreeGroup::reduce(w));
    if (it == data.tau.end()) return std::nullopt;
    return it->second;
  };
  const auto te = tau_at({});
  if (!te || std::abs(*te - 1.0) > 1e-12) throw InputError("malformed trace data: tau(e) must be 1");
  // greedy sample closed under u^-1 v, in shortlex order
  std::vector<Word> words;
  for (const auto& [w, c] : data.tau) words.push_back(w);
  std::stable_sort(words.begin(), words.end(), [](const Word& a, const Word& b) { return a.size() < b.size(); });
  std::vector<Word> sample;
  for (const Word& w : words) {
    bool ok = tau_at(FreeGroup::multiply(FreeGroup::inverse(w), w)).has_value();
    for (const Word& u : sample)
      if (!tau_at(FreeGroup::multiply(FreeGroup::inverse(u), w)) || !tau_at(FreeGroup::multiply(FreeGroup::inverse(w), u))) ok = false;
    if (ok) sample.push_back(w);
  }
  const int n = static_cast<int>(sample.size());
  Matrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = *tau_at(FreeGroup::multiply(FreeGroup::inverse(sample[i]), sample[j]));
  if (hermitian_defect(M) > 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff()) || min_eigenvalue(M) < -1e-10)
    throw InputError("malformed trace data: tau is not positive-type on the sampled Gram matrix");
  std::vector<WordElement> probes = data.probes;
  if (probes.empty()) {
    WordElement s;
    for (int k = 1; k <= static_cast<int>(F.rank()); ++k) {
      s.terms.push_back({Word{k}, 1.0});
      s.terms.push_back({Word{-k}, 1.0});
    }
    s.normalize();
    probes.push_back(s);
  }
  v.pass = true;
  for (const WordElement& a : probes) {
    Complex t = 0.0;
    std::string label;
    for (const auto& [w, c] : a.terms) {
      const auto tw = tau_at(w);
      if (!tw) throw InputError("malformed trace data: tau is not given on probe word " + F.format(w));
      t += c * *tw;
      if (!label.empty()) label += " + ";
      label += "(" + std::to_string(c.real()) + (c.imag() != 0.0 ? "," + std::to_string(c.imag()) : "") + ")" + F.format(w);
    }
    const double est = e_norm_estimate(tower, a, levels.size(), opt.tol, opt).estimate;
    v.probes.push_back({label, std::abs(t), est});
    if (std::abs(t) > est + tol && v.pass) {
      v.pass = false;
      v.reason = "|tau(a)| exceeds the e-norm estimate (one-sided test)";
      v.witness = {label};
    }
  }
  if (v.pass) v.reason = "uniform level masses; |tau(a)| <= e-estimate on every probe (one-sided test)";
  return v;
}

}  // namespace isonorm
