#include "isonorm/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "isonorm/errors.hpp"

namespace isonorm {

namespace {

const Json& need(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string(what) + " is missing field \"" + key + "\"");
  return j.at(key);
}

std::string str(const Json& j, const char* what) {
  if (!j.is_string()) throw InputError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

double num(const Json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  return j.get<double>();
}

Complex complex_of(const Json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {num(j[0], what), num(j[1], what)};
  throw InputError(std::string(what) + " must be a number or [re, im]");
}

// [id, re] or [id, re, im]
std::pair<std::string, Complex> term_of(const Json& t, const char* what) {
  if (!t.is_array() || t.size() < 2 || t.size() > 3) throw InputError(std::string(what) + " terms are [id, re, im]");
  return {str(t[0], what), {num(t[1], what), t.size() == 3 ? num(t[2], what) : 0.0}};
}

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

std::vector<std::string> strings(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(str(e, what));
  return out;
}

Mat2 matrix_of(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 || j[1].size() != 2)
    throw InputError("generator matrix must be [[a,b],[c,d]]");
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      if (!j[i][k].is_number_integer()) throw InputError("matrix entries must be integers");
      m[2 * i + k] = j[i][k].get<std::int64_t>();
    }
  return m;
}

GroupAction read_action(const Json& j, const GroupPtr& group) {
  GroupAction a;
  a.group = group;
  a.points = strings(need(j, "points", "construct"), "points");
  std::map<std::string, int> at;
  for (std::size_t i = 0; i < a.points.size(); ++i)
    if (!at.emplace(a.points[i], static_cast<int>(i)).second) throw InputError("duplicate point " + a.points[i]);
  a.image.assign(group->size(), std::vector<int>(a.points.size(), -1));
  for (std::size_t x = 0; x < a.points.size(); ++x) a.image[group->identity()][x] = static_cast<int>(x);
  for (const auto& t : need(j, "action", "construct")) {
    if (!t.is_array() || t.size() != 3) throw InputError("action entries are [g, x, gx]");
    const int g = group->index(str(t[0], "action"));
    const std::string xs = str(t[1], "action"), ys = str(t[2], "action");
    if (!at.count(xs) || !at.count(ys)) throw InputError("action mentions an unknown point");
    const int x = at[xs], y = at[ys];
    if (a.image[g][x] >= 0 && a.image[g][x] != y) throw InputError("action gives two images for (" + group->name(g) + "," + xs + ")");
    a.image[g][x] = y;
  }
  return a;
}

FreePartialAction read_free_action(const Json& j, const FreeGroup& F) {
  FreePartialAction a;
  a.group = F;
  a.points = strings(need(j, "points", "construct"), "points");
  if (!j.contains("word_cap")) throw InputError("free partial action needs a word-length cap (word_cap)");
  a.word_cap = need(j, "word_cap", "construct").get<int>();
  std::map<std::string, int> at;
  for (std::size_t i = 0; i < a.points.size(); ++i) at[a.points[i]] = static_cast<int>(i);
  a.generator_image.assign(F.rank(), std::vector<int>(a.points.size(), -1));
  for (const auto& t : need(j, "action", "construct")) {
    if (!t.is_array() || t.size() != 3) throw InputError("action entries are [generator, x, gx]");
    const std::string g = str(t[0], "action");
    if (g.size() != 1 || F.generator_index(g[0]) == 0) throw InputError("free action entries must name a generator: " + g);
    const std::string xs = str(t[1], "action"), ys = str(t[2], "action");
    if (!at.count(xs) || !at.count(ys)) throw InputError("action mentions an unknown point");
    a.generator_image[F.generator_index(g[0]) - 1][at[xs]] = at[ys];
  }
  return a;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

GradingGroupPtr read_group(const Json& j) try {
  if (!j.is_object()) throw InputError("group must be an object");
  if (j.contains("free")) return std::make_shared<GradingGroup>(FreeGroup::from_names(strings(j.at("free"), "free generators")));
  if (j.contains("cyclic")) return std::make_shared<GradingGroup>(std::make_shared<FiniteGroup>(FiniteGroup::cyclic(j.at("cyclic").get<int>())));
  if (j.contains("dihedral"))
    return std::make_shared<GradingGroup>(std::make_shared<FiniteGroup>(FiniteGroup::dihedral(j.at("dihedral").get<int>())));
  if (j.contains("symmetric"))
    return std::make_shared<GradingGroup>(std::make_shared<FiniteGroup>(FiniteGroup::symmetric(j.at("symmetric").get<int>())));
  if (j.contains("permutations")) {
    const Json& p = j.at("permutations");
    const int degree = need(p, "degree", "permutations").get<int>();
    std::vector<std::pair<std::string, FiniteGroup::Perm>> gens;
    for (const auto& [name, perm] : need(p, "generators", "permutations").items()) gens.emplace_back(name, perm.get<FiniteGroup::Perm>());
    return std::make_shared<GradingGroup>(std::make_shared<FiniteGroup>(FiniteGroup::from_permutations(degree, gens)));
  }
  if (j.contains("table")) {
    std::vector<std::string> names = strings(need(j, "elements", "group"), "elements");
    std::vector<std::vector<std::string>> table;
    for (const auto& row : j.at("table")) table.push_back(strings(row, "table row"));
    FiniteGroup K = FiniteGroup::from_named_table(names, table);
    if (j.contains("identity") && K.name(K.identity()) != str(j.at("identity"), "identity"))
      throw InputError("declared identity is not the identity of the table");
    return std::make_shared<GradingGroup>(std::make_shared<FiniteGroup>(std::move(K)));
  }
  throw InputError("group needs one of free, cyclic, dihedral, symmetric, permutations, table");
} catch (const nlohmann::json::exception& e) {
  throw InputError(std::string("malformed input: ") + e.what());
}

Grading read_grading(const FiniteGroupoid& G, const Json& j) try {
  Grading phi;
  phi.group = read_group(need(j, "group", "grading"));
  phi.label.assign(G.size(), "");
  const Json& label = need(j, "label", "grading");
  for (std::size_t g = 0; g < G.size(); ++g) {
    const std::string& name = G.name(static_cast<Index>(g));
    if (!label.contains(name)) {
      if (!G.is_unit(static_cast<Index>(g))) throw InputError("grading has no label for " + name);
      phi.label[g] = phi.group->identity();
      continue;
    }
    phi.label[g] = phi.group->canonical(str(label.at(name), "label"));
  }
  return phi;
} catch (const nlohmann::json::exception& e) {
  throw InputError(std::string("malformed input: ") + e.what());
}

LoadedGroupoid load_groupoid(const Json& j, const std::string& fallback_id) try {
  LoadedGroupoid out;
  try {
    if (j.contains("construct")) {
      const std::string kind = str(j.at("construct"), "construct");
      GradingGroupPtr group = read_group(need(j, "group", "construct"));
      GradedGroupoid gg;
      if (kind == "partial" && !group->is_finite()) {
        gg = partial_action_groupoid(read_free_action(j, group->free()));
      } else {
        if (!group->is_finite()) throw InputError(kind + " construct needs a finite group");
        const GroupAction a = read_action(j, group->finite_ptr());
        if (kind == "transformation") {
          gg = transformation_groupoid(a);
        } else if (kind == "partial") {
          gg = partial_action_groupoid(a);
        } else if (kind == "germ") {
          try {
            check_global_action(a);
          } catch (const CheckFailure& e) {
            throw InputError(std::string("action axiom violation: ") + e.what());
          }
          gg.groupoid = germ_quotient(a);
        } else {
          throw InputError("unknown construct " + kind);
        }
      }
      out.groupoid = gg.groupoid;
      out.grading = gg.grading;
      out.description = out.groupoid->describe();
      return out;
    }
    GroupoidDescription& d = out.description;
    d.id = j.contains("id") ? str(j.at("id"), "id") : fallback_id;
    d.elements = strings(need(j, "elements", "groupoid"), "elements");
    d.units = strings(need(j, "units", "groupoid"), "units");
    for (const char* key : {"range", "source"}) {
      const Json& m = need(j, key, "groupoid");
      if (!m.is_object()) throw InputError(std::string(key) + " must be a map");
      for (const auto& [k, v] : m.items()) (key[0] == 'r' ? d.range : d.source)[k] = str(v, key);
    }
    for (const auto& t : need(j, "compose", "groupoid")) {
      if (!t.is_array() || t.size() != 3) throw InputError("compose entries are [g, h, gh]");
      d.compose.push_back({str(t[0], "compose"), str(t[1], "compose"), str(t[2], "compose")});
    }
    out.report = validate_groupoid(d);
    if (!out.report.ok) return out;
    out.groupoid = FiniteGroupoid::from_description(d);
    if (j.contains("grading")) {
      out.grading = read_grading(*out.groupoid, j.at("grading"));
      const ValidationReport gr = check_grading(*out.groupoid, *out.grading);
      if (!gr.ok) throw InputError("grading is not a homomorphism: " + gr.message);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed groupoid file: ") + e.what());
  }
  return out;
} catch (const nlohmann::json::exception& e) {
  throw InputError(std::string("malformed input: ") + e.what());
}

Json groupoid_to_json(const FiniteGroupoid& G, const std::optional<Grading>& grading) {
  const GroupoidDescription d = G.describe();
  Json j;
  j["id"] = d.id;
  j["elements"] = d.elements;
  j["units"] = d.units;
  Json r = Json::object(), s = Json::object();
  for (const auto& e : d.elements) {
    r[e] = d.range.at(e);
    s[e] = d.source.at(e);
  }
  j["range"] = r;
  j["source"] = s;
  Json c = Json::array();
  for (const auto& t : d.compose) c.push_back(Json::array({t[0], t[1], t[2]}));
  j["compose"] = c;
  if (grading && grading->group->is_finite()) {
    const FiniteGroup& K = grading->group->finite();
    Json g;
    g["elements"] = K.names();
    Json table = Json::array();
    for (std::size_t a = 0; a < K.size(); ++a) {
      Json row = Json::array();
      for (std::size_t b = 0; b < K.size(); ++b) row.push_back(K.name(K.multiply(static_cast<int>(a), static_cast<int>(b))));
      table.push_back(row);
    }
    g["table"] = table;
    Json label = Json::object();
    for (std::size_t e = 0; e < G.size(); ++e) label[G.name(static_cast<Index>(e))] = grading->label[e];
    j["grading"] = {{"group", g}, {"label", label}};
  } else if (grading) {
    Json gens = Json::array();
    for (char ch : grading->group->free().generators()) gens.push_back(std::string(1, ch));
    Json label = Json::object();
    for (std::size_t e = 0; e < G.size(); ++e) label[G.name(static_cast<Index>(e))] = grading->label[e];
    j["grading"] = {{"group", {{"free", gens}}}, {"label", label}};
  }
  return j;
}

AlgebraElement read_element(const GroupoidPtr& G, const Json& j) try {
  try {
    if (j.contains("groupoid") && !G->id().empty() && str(j.at("groupoid"), "groupoid") != G->id())
      throw InputError("host mismatch: element is for groupoid " + j.at("groupoid").get<std::string>() + ", not " + G->id());
    AlgebraElement f(G);
    for (const auto& t : need(j, "terms", "element")) {
      const auto [id, c] = term_of(t, "element");
      f.add(G->index(id), c);
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed element file: ") + e.what());
  }
} catch (const nlohmann::json::exception& e) {
  throw InputError(std::string("malformed input: ") + e.what());
}

Json element_to_json(const AlgebraElement& f) {
  Json j;
  j["groupoid"] = f.host()->id();
  Json terms = Json::array();
  for (const auto& [g, c] : f.terms()) terms.push_back(Json::array({f.host()->name(g), c.real(), c.imag()}));
  j["terms"] = terms;
  return j;
}

BisectionFamily read_bisections(const FiniteGroupoid& G, const Grading* phi, const Json& j,
                                std::optional<std::vector<Index>>* neighbourhood) try {
  BisectionFamily U;
  U.x = G.unit(str(need(j, "x", "bisection file"), "x"));
  if (neighbourhood && j.contains("neighbourhood")) {
    std::vector<Index> V;
    for (const auto& u : strings(j.at("neighbourhood"), "neighbourhood")) V.push_back(G.unit(u));
    *neighbourhood = V;
  }
  if (j.value("canonical", false)) {
    if (!phi) throw InputError("canonical bisections need a grading");
    for (Index g : G.isotropy(U.x)) {
      auto& set = U.sets[g];
      for (std::size_t k = 0; k < G.size(); ++k)
        if (phi->label[k] == phi->label[g]) set.push_back(static_cast<Index>(k));
    }
    return U;
  }
  const Json& sets = need(j, "sets", "bisection file");
  if (!sets.is_object()) throw InputError("sets must map isotropy elements to element lists");
  for (const auto& [g, list] : sets.items()) {
    auto& set = U.sets[G.index(g)];
    for (const auto& e : strings(list, "bisection")) set.push_back(G.index(e));
  }
  return U;
} catch (const nlohmann::json::exception& e) {
  throw InputError(std::string("malformed input: ") + e.what());
}

StateData read_state(const FiniteGroupoid& G, const Json& j) try {
  try {
    StateData d;
    for (const auto& [u, m] : need(j, "mu", "state file").items()) d.mu[G.unit(u)] = num(m, "mass");
    if (j.contains("fields"))
      for (const auto& [u, f] : j.at("fields").items()) {
        auto& field = d.fields[G.unit(u)];
        for (const auto& [g, v] : f.items()) field[G.index(g)] = complex_of(v, "field value");
      }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed state file: ") + e.what());
  }
} catch (const nlohmann::json::exception& e) {
  throw InputError(std::string("malformed input: ") + e.what());
}

Json state_to_json(const FiniteGroupoid& G, const StateData& d) {
  Json mu = Json::object(), fields = Json::object();
  for (Index x : G.units()) {
    mu[G.name(x)] = d.mass(x);
    Json f = Json::object();
    for (Index g : G.isotropy(x)) f[G.name(g)] = complex_json(d.field(x, g));
    fields[G.name(x)] = f;
  }
  return {{"mu", mu}, {"fields", fields}};
}

StateFunctional read_functional(const GroupoidPtr& G, const Json& j) try {
  std::vector<Complex> w(G->size(), 0.0);
  try {
    for (const auto& t : need(j, "weights", "functional file")) {
      const auto [id, c] = term_of(t, "functional");
      w[G->index(id)] += c;
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed functional file: ") + e.what());
  }
  return StateFunctional(G, std::move(w));
} catch (const nlohmann::json::exception& e) {
  throw InputError(std::string("malformed input: ") + e.what());
}

QuotientTower read_tower(const Json& j) try {
  try {
    const Json& g = need(j, "group", "tower file");
    const std::string backend = str(need(g, "backend", "tower group"), "backend");
    const Json& gens = need(g, "generators", "tower group");
    std::vector<std::string> names;
    std::vector<Mat2> matrices;
    if (gens.is_array()) {
      names = strings(gens, "generators");
    } else if (gens.is_object()) {
      for (const auto& [k, v] : gens.items()) names.push_back(k);
    } else {
      throw InputError("generators must be a list or a map");
    }
    const FreeGroup alphabet = FreeGroup::from_names(names);
    if (g.contains("matrices"))
      for (const auto& n : names) matrices.push_back(matrix_of(need(g.at("matrices"), n.c_str(), "matrices")));
    std::optional<GroupModel> model;
    if (backend == "free") {
      model = GroupModel::free(alphabet);
    } else if (backend == "integer-matrix") {
      if (!gens.is_object()) throw InputError("integer-matrix generators map names to matrices");
      matrices.clear();
      for (const auto& n : names) matrices.push_back(matrix_of(gens.at(n)));
      model = GroupModel::integer_matrix(alphabet, matrices);
    } else if (backend == "finite-table") {
      if (!gens.is_object()) throw InputError("finite-table generators map names to group elements");
      GradingGroupPtr K = read_group(need(g, "table", "tower group"));
      if (!K->is_finite()) throw InputError("finite-table backend needs a finite group");
      std::vector<int> idx;
      for (const auto& n : names) idx.push_back(K->finite().index(str(gens.at(n), "generator")));
      model = GroupModel::finite_table(alphabet, K->finite_ptr(), idx);
    } else {
      throw InputError("unknown backend " + backend);
    }
    std::vector<SchreierLevel> levels;
    for (const auto& L : need(j, "levels", "tower file")) {
      if (L.contains("cyclic")) {
        if (names.size() != 1) throw InputError("cyclic levels need exactly one generator");
        levels.push_back(cyclic_level(L.at("cyclic").get<int>()));
      } else if (L.contains("congruence")) {
        if (matrices.size() != names.size()) throw InputError("congruence levels need generator matrices");
        levels.push_back(congruence_level(matrices, L.at("congruence").get<std::int64_t>()));
      } else {
        SchreierLevel S;
        S.cosets = need(L, "cosets", "level").get<std::size_t>();
        const Json& im = need(L, "images", "level");
        for (const auto& n : names) S.images.push_back(need(im, n.c_str(), "level images").get<std::vector<int>>());
        levels.push_back(std::move(S));
      }
    }
    return QuotientTower::make(std::move(*model), std::move(levels));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed tower file: ") + e.what());
  }
} catch (const nlohmann::json::exception& e) {
  throw InputError(std::string("malformed input: ") + e.what());
}

WordElement read_word_element(const FreeGroup& alphabet, const Json& j) try {
  try {
    std::vector<std::pair<std::string, Complex>> raw;
    const Json& terms = j.is_array() ? j : need(j, "terms", "tower element");
    for (const auto& t : terms) raw.push_back(term_of(t, "tower element"));
    return WordElement::parse(alphabet, raw);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed tower element: ") + e.what());
  }
} catch (const nlohmann::json::exception& e) {
  throw InputError(std::string("malformed input: ") + e.what());
}

TraceData read_trace(const QuotientTower& tower, const Json& j) try {
  try {
    TraceData t;
    const Json& mu = need(j, "mu", "trace file");
    std::map<int, std::vector<double>> levels;
    for (const auto& [k, v] : mu.items()) {
      if (k == "inf") {
        t.mu_inf = num(v, "mass at infinity");
        continue;
      }
      int n = 0;
      try {
        n = std::stoi(k);
      } catch (const std::exception&) {
        throw InputError("malformed trace data: level key " + k);
      }
      if (n < 1 || static_cast<std::size_t>(n) > tower.levels().size()) throw InputError("malformed trace data: level " + k + " out of range");
      levels[n] = v.get<std::vector<double>>();
    }
    if (!levels.empty()) {
      t.level_mu.resize(static_cast<std::size_t>(levels.rbegin()->first));
      for (std::size_t n = 0; n < t.level_mu.size(); ++n) {
        auto it = levels.find(static_cast<int>(n + 1));
        t.level_mu[n] = it != levels.end() ? it->second : std::vector<double>(tower.levels()[n].cosets, 0.0);
      }
    }
    const FreeGroup& F = tower.group().alphabet();
    if (j.contains("tau"))
      for (const auto& e : j.at("tau")) {
        const auto [w, c] = term_of(e, "tau");
        const Word word = F.parse(w);
        if (t.tau.count(word) && t.tau[word] != c) throw InputError("malformed trace data: two values for " + w);
        t.tau[word] = c;
      }
    if (j.contains("probes"))
      for (const auto& p : j.at("probes")) t.probes.push_back(read_word_element(F, p));
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed trace file: ") + e.what());
  }
} catch (const nlohmann::json::exception& e) {
  throw InputError(std::string("malformed input: ") + e.what());
}

}  // namespace isonorm
