#include "isonorm/grading.hpp"

#include <map>

#include "isonorm/errors.hpp"

namespace isonorm {

std::string GradingGroup::identity() const {
  if (is_finite()) return finite().name(finite().identity());
  return "1";
}

std::string GradingGroup::multiply(const std::string& a, const std::string& b) const {
  if (is_finite()) return finite().name(finite().multiply(finite().index(a), finite().index(b)));
  return free().format(FreeGroup::multiply(free().parse(a), free().parse(b)));
}

std::string GradingGroup::inverse(const std::string& a) const {
  if (is_finite()) return finite().name(finite().inverse(finite().index(a)));
  return free().format(FreeGroup::inverse(free().parse(a)));
}

std::string GradingGroup::canonical(const std::string& a) const {
  if (is_finite()) return finite().name(finite().index(a));
  return free().canonical(a);
}

ValidationReport check_grading(const FiniteGroupoid& G, const Grading& phi) {
  ValidationReport rep;
  auto bad = [&](std::string msg, std::vector<std::string> w) {
    rep.ok = false;
    rep.axiom = "grading";
    rep.message = std::move(msg);
    rep.witness = std::move(w);
    return rep;
  };
  if (!phi.group) return bad("grading has no target group", {});
  if (phi.label.size() != G.size()) return bad("grading label missing for some element", {});
  const std::string e = phi.group->identity();
  for (Index u : G.units())
    if (phi.label[u] != e) return bad("grading label of unit " + G.name(u) + " is not the identity", {G.name(u)});
  for (std::size_t g = 0; g < G.size(); ++g)
    for (Index h : G.range_fiber(G.source(static_cast<Index>(g)))) {
      Index gh = G.compose(static_cast<Index>(g), h);
      if (phi.group->multiply(phi.label[g], phi.label[h]) != phi.label[gh])
        return bad("grading is not multiplicative at (" + G.name(static_cast<Index>(g)) + "," + G.name(h) + ")",
                   {G.name(static_cast<Index>(g)), G.name(h)});
    }
  return rep;
}

std::optional<std::pair<Index, Index>> grading_non_injective_pair(const FiniteGroupoid& G, const Grading& phi) {
  for (Index x : G.units()) {
    std::map<std::string, Index> seen;
    for (Index g : G.isotropy(x)) {
      auto [it, fresh] = seen.emplace(phi.label[g], g);
      if (!fresh) return std::make_pair(it->second, g);
    }
  }
  return std::nullopt;
}

}  // namespace isonorm
