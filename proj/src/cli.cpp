#include "isonorm/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "isonorm/errors.hpp"
#include "isonorm/io.hpp"
#include "isonorm/norms.hpp"
#include "isonorm/random.hpp"
#include "isonorm/states.hpp"
#include "isonorm/towers.hpp"

namespace isonorm {

namespace {

struct RunConfig {
  double tol = 1e-10;
  std::string seed_text = "0x9E3779B9";
  std::uint64_t seed = kDefaultSeed;
  bool csv = false;
  int jobs = 1;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string join(const std::vector<std::string>& parts, const char* sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

// Text mode prints the human line, csv mode prints key,value.
class Report {
 public:
  Report(std::ostream& out, bool csv) : out_(out), csv_(csv) {
    if (csv_) out_ << "key,value\n";
  }
  void put(const std::string& key, const std::string& value, const std::string& text) {
    if (csv_)
      out_ << key << ',' << (value.find(',') != std::string::npos ? "\"" + value + "\"" : value) << '\n';
    else
      out_ << text << '\n';
  }
  void put(const std::string& key, const std::string& value) { put(key, value, key + ": " + value); }
  void witness(const std::vector<std::string>& w) {
    if (!w.empty()) put("witness", join(w, "; "), "witness: " + join(w, ", "));
  }

 private:
  std::ostream& out_;
  bool csv_;
};

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

LoadedGroupoid load_valid(const std::string& path) {
  LoadedGroupoid L = load_groupoid(read_json_file(path), stem(path));
  if (!L.groupoid) throw InputError("invalid groupoid " + path + ": " + L.report.axiom + ": " + L.report.message);
  return L;
}

const Grading& need_grading(const LoadedGroupoid& L) {
  if (!L.grading) throw InputError("this command needs a graded groupoid (a grading field or a construct file)");
  return *L.grading;
}

struct Context {
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;

  NormOptions norm_options() const {
    NormOptions o;
    o.tol = cfg.tol;
    o.jobs = cfg.jobs;
    return o;
  }
  TowerOptions tower_options() const {
    TowerOptions o;
    o.jobs = cfg.jobs;
    o.power.jobs = cfg.jobs;
    o.power.seed = cfg.seed;
    return o;
  }
};

int cmd_validate(Context& cx, const std::string& path, bool emit) {
  LoadedGroupoid L = load_groupoid(read_json_file(path), stem(path));
  Report r(cx.out, cx.cfg.csv && !emit);
  if (!L.groupoid) {
    r.put("status", "violation", "violation: " + L.report.axiom + ": " + L.report.message);
    r.put("axiom", L.report.axiom);
    r.witness(L.report.witness);
    return 1;
  }
  if (emit) {
    cx.out << groupoid_to_json(*L.groupoid, L.grading).dump(2) << '\n';
    return 0;
  }
  const std::size_t n = L.groupoid->size(), u = L.groupoid->units().size();
  r.put("status", "ok", "ok: " + std::to_string(n) + " elements, " + std::to_string(u) + " units");
  if (cx.cfg.csv) {
    r.put("elements", std::to_string(n));
    r.put("units", std::to_string(u));
  }
  if (L.grading) r.put("grading", "homomorphism");
  return 0;
}

int cmd_norms_reduced(Context& cx, const std::string& gpath, const std::string& fpath) {
  LoadedGroupoid L = load_valid(gpath);
  const AlgebraElement f = read_element(L.groupoid, read_json_file(fpath));
  const NormReport n = reduced_norm(*L.groupoid, f, cx.norm_options());
  Report r(cx.out, cx.cfg.csv);
  r.put("reduced_norm", fmt("%.9f", n.value), "reduced norm = " + fmt("%.9f", n.value));
  if (!n.witness.empty()) r.put("attained_at", n.witness.front(), "attained at unit " + n.witness.front());
  r.put("method", n.method);
  return 0;
}

int cmd_norms_exotic(Context& cx, const std::string& gpath, const std::string& hpath, const std::string& at) {
  LoadedGroupoid L = load_valid(gpath);
  const Index x = L.groupoid->unit(at);
  const AlgebraElement h = read_element(L.groupoid, read_json_file(hpath));
  const NormReport n = exotic_norm_finite(*L.groupoid, x, h, cx.norm_options());
  Report r(cx.out, cx.cfg.csv);
  r.put("e_norm", fmt("%.9f", n.value), "e-norm = " + fmt("%.9f", n.value));
  r.put("method", n.method);
  return 0;
}

int cmd_norms_tmred(Context& cx, const std::string& gpath, const std::string& hpath, const std::string& bpath) {
  LoadedGroupoid L = load_valid(gpath);
  const Grading& phi = need_grading(L);
  std::optional<std::vector<Index>> V;
  const BisectionFamily U = read_bisections(*L.groupoid, &phi, read_json_file(bpath), &V);
  const AlgebraElement h = read_element(L.groupoid, read_json_file(hpath));
  const TmredReport t = tmred_certificate(*L.groupoid, phi, U, h, V ? &*V : nullptr, cx.norm_options());
  Report r(cx.out, cx.cfg.csv);
  const std::string& xname = L.groupoid->name(U.x);
  if (!t.passed) {
    r.put("certificate", "failed " + t.failed, "certificate: FAILED " + t.failed + " at unit " + xname);
    r.put("reason", t.message);
    r.witness(t.witness);
    return 1;
  }
  r.put("certificate", "passed", "certificate: PASSED at unit " + xname);
  r.put("e_norm", fmt("%.9f", t.e_norm), "e-norm = r-norm = " + fmt("%.9f", t.e_norm));
  r.put("extension_norm", fmt("%.9f", t.extension_norm), "extension reduced norm = " + fmt("%.9f", t.extension_norm));
  r.put("factorization_deviation", fmt("%.3e", t.max_deviation), "factorization deviation = " + fmt("%.3e", t.max_deviation));
  return 0;
}

int cmd_norms_morita(Context& cx, const std::string& gpath, const std::vector<std::string>& names) {
  LoadedGroupoid L = load_valid(gpath);
  std::vector<Index> units;
  for (const auto& n : names) units.push_back(L.groupoid->unit(n));
  const MoritaReport m = morita_restriction_check(L.groupoid, units, 8, cx.cfg.seed, cx.norm_options());
  Report r(cx.out, cx.cfg.csv);
  r.put("reduction_elements", std::to_string(m.reduction->size()),
        "reduction: " + std::to_string(m.reduction->size()) + " elements on " + std::to_string(units.size()) + " units");
  r.put("checked", std::to_string(m.checked));
  r.put("max_deviation", fmt("%.3e", m.max_deviation), "max norm deviation = " + fmt("%.3e", m.max_deviation));
  r.put("restriction", m.ok ? "isometric" : "not isometric");
  return m.ok ? 0 : 1;
}

std::size_t level_count(const QuotientTower& t, int requested) {
  if (requested < 0) return t.levels().size();
  if (requested == 0 || static_cast<std::size_t>(requested) > t.levels().size())
    throw InputError("--levels must be between 1 and " + std::to_string(t.levels().size()));
  return static_cast<std::size_t>(requested);
}

int cmd_tower_norms(Context& cx, const std::string& tpath, const std::string& apath, int levels) {
  const QuotientTower tower = read_tower(read_json_file(tpath));
  const WordElement a = read_word_element(tower.group().alphabet(), read_json_file(apath));
  const std::size_t N = level_count(tower, levels);
  const NormSequence s = quasi_norm_sequence(tower, a, N, cx.tower_options());
  Report r(cx.out, cx.cfg.csv);
  for (std::size_t n = 0; n < N; ++n) {
    const std::string k = std::to_string(n + 1);
    r.put("level_" + k, fmt("%.9f", s.values[n]),
          "level " + k + " (" + std::to_string(tower.levels()[n].cosets) + " cosets): " + fmt("%.9f", s.values[n]) + " [" + s.methods[n] + "]");
  }
  r.put("nondecreasing", s.nondecreasing ? "yes" : "no");
  return 0;
}

int cmd_tower_exotic(Context& cx, const std::string& tpath, const std::string& apath, int levels, int radius) {
  const QuotientTower tower = read_tower(read_json_file(tpath));
  const WordElement a = read_word_element(tower.group().alphabet(), read_json_file(apath));
  const std::size_t N = level_count(tower, levels);
  if (radius < 0) throw InputError("--radius must be nonnegative");
  const Verdict v = exoticness_verdict(tower, a, N, radius, cx.tower_options());
  Report r(cx.out, cx.cfg.csv);
  if (v.decidable) {
    const std::string word = v.exotic ? "EXOTIC" : "NOT EXOTIC";
    r.put("verdict", word, "e ≥ " + fmt("%.6f", v.e_lower) + ", r ≤ " + fmt("%.6f", *v.r_upper) + " → " + word);
    if (cx.cfg.csv) {
      r.put("e_lower", fmt("%.9f", v.e_lower));
      r.put("r_upper", fmt("%.9f", *v.r_upper));
    }
  } else {
    r.put("verdict", "undecidable", "e ≥ " + fmt("%.6f", v.e_lower) + ", no upper bound on r for this backend → undecidable here");
    if (cx.cfg.csv) r.put("e_lower", fmt("%.9f", v.e_lower));
  }
  if (v.r_lower)
    r.put("r_lower", fmt("%.9f", *v.r_lower), "r ≥ " + fmt("%.6f", *v.r_lower) + " (ball of radius " + std::to_string(radius) + ")");
  r.put("e_converged", v.e_converged ? "yes" : "no", std::string("e-sequence stalled: ") + (v.e_converged ? "yes" : "no"));
  return 0;
}

int cmd_tower_truncate(Context& cx, const std::string& tpath, int levels) {
  const QuotientTower tower = read_tower(read_json_file(tpath));
  const std::size_t N = level_count(tower, levels);
  const Truncation t = bundle_truncation(tower, N);
  Report r(cx.out, cx.cfg.csv);
  r.put("elements", std::to_string(t.groupoid->size()),
        "truncation: " + std::to_string(t.groupoid->size()) + " elements, " + std::to_string(t.groupoid->units().size()) + " units");
  for (std::size_t n = 0; n < t.block_sizes.size(); ++n)
    r.put("block_" + std::to_string(n + 1), std::to_string(t.block_sizes[n]),
          "level " + std::to_string(n + 1) + ": matrix block of size " + std::to_string(t.block_sizes[n]));
  r.put("blocks", t.blocks_ok ? "full" : "deficient",
        t.blocks_ok ? "every fibre representation spans its full matrix block" : "a fibre representation misses its matrix block");
  return t.blocks_ok ? 0 : 1;
}

int cmd_states_assemble(Context& cx, const std::string& gpath, const std::string& spath) {
  LoadedGroupoid L = load_valid(gpath);
  const StateData d = read_state(*L.groupoid, read_json_file(spath));
  const StateFunctional phi = assemble_state(L.groupoid, d);
  const FiniteGroupoid& G = *L.groupoid;
  if (cx.cfg.csv) {
    cx.out << "element,re,im\n";
    for (std::size_t g = 0; g < G.size(); ++g)
      cx.out << G.name(static_cast<Index>(g)) << ',' << Json(phi.weights()[g].real()).dump() << ','
             << Json(phi.weights()[g].imag()).dump() << '\n';
    return 0;
  }
  Json w = Json::array();
  for (std::size_t g = 0; g < G.size(); ++g)
    w.push_back(Json::array({G.name(static_cast<Index>(g)), phi.weights()[g].real(), phi.weights()[g].imag()}));
  Json j;
  j["groupoid"] = G.id();
  j["weights"] = w;
  cx.out << j.dump(2) << '\n';
  return 0;
}

int cmd_states_extract(Context& cx, const std::string& gpath, const std::string& fpath) {
  LoadedGroupoid L = load_valid(gpath);
  const StateFunctional phi = read_functional(L.groupoid, read_json_file(fpath));
  const StateData d = extract_pair(phi, std::max(cx.cfg.tol, 1e-12));
  const FiniteGroupoid& G = *L.groupoid;
  if (cx.cfg.csv) {
    cx.out << "unit,element,mass,re,im\n";
    for (Index x : G.units())
      for (Index g : G.isotropy(x))
        cx.out << G.name(x) << ',' << G.name(g) << ',' << Json(d.mass(x)).dump() << ',' << Json(d.field(x, g).real()).dump() << ','
               << Json(d.field(x, g).imag()).dump() << '\n';
    return 0;
  }
  cx.out << state_to_json(G, d).dump(2) << '\n';
  return 0;
}

int cmd_states_factorization(Context& cx, const std::string& tpath, const std::string& dpath) {
  const QuotientTower tower = read_tower(read_json_file(tpath));
  const TraceData data = read_trace(tower, read_json_file(dpath));
  const FactorizationVerdict v = reduced_factorization_check(tower, data, cx.cfg.tol, cx.tower_options());
  Report r(cx.out, cx.cfg.csv);
  r.put("verdict", v.pass ? "pass" : "fail", std::string("factorization through the reduced norm: ") + (v.pass ? "PASS" : "FAIL"));
  r.put("reason", v.reason);
  for (const auto& p : v.probes)
    r.put("probe " + p.label, fmt("%.9f", p.tau_abs) + " <= " + fmt("%.9f", p.e_estimate),
          "probe " + p.label + ": |tau(a)| = " + fmt("%.9f", p.tau_abs) + ", e-estimate = " + fmt("%.9f", p.e_estimate));
  r.witness(v.witness);
  return v.pass ? 0 : 1;
}

int cmd_certify(Context& cx, const std::string& gpath) {
  LoadedGroupoid L = load_valid(gpath);
  const Grading& phi = need_grading(L);
  const FiniteGroupoid& G = *L.groupoid;
  Report r(cx.out, cx.cfg.csv);
  Rng rng(cx.cfg.seed);
  bool all = true;
  for (Index x : G.units()) {
    const std::vector<Index> iso = G.isotropy(x);
    const AlgebraElement h = random_element_on(L.groupoid, iso, rng);
    const TmredReport t = tmred_certificate(G, phi, canonical_bisections(G, phi, x), h, nullptr, cx.norm_options());
    const NormReport e = exotic_norm_finite(G, x, h, cx.norm_options());
    const double lam = isotropy_regular_norm(G, x, h);
    const bool agree = std::abs(e.value - lam) <= cx.cfg.tol;
    const std::string u = G.name(x);
    if (t.passed)
      r.put("unit " + u, "passed", "unit " + u + ": certificate passed, e-norm = r-norm = " + fmt("%.9f", t.e_norm));
    else
      r.put("unit " + u, "failed " + t.failed, "unit " + u + ": certificate FAILED " + t.failed + ": " + t.message);
    if (!t.passed) r.witness(t.witness);
    r.put("unit " + u + " exotic=regular", agree ? "yes" : "no",
          "unit " + u + ": e-norm " + fmt("%.9f", e.value) + (agree ? " = " : " != ") + "isotropy regular norm " + fmt("%.9f", lam));
    all = all && t.passed && agree;
  }
  r.put("certify", all ? "ok" : "failed", all ? "certify: ok" : "certify: FAILED");
  return all ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Norms on finite groupoid algebras and quotient towers", "isonorm"};
  app.require_subcommand(1);
  app.fallthrough();
  Context cx{{}, out, err};
  RunConfig& cfg = cx.cfg;
  app.add_option("--tol", cfg.tol, "tolerance (> 0)")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed_text, "random seed");
  app.add_flag("--csv", cfg.csv, "csv output");
  app.add_option("--jobs", cfg.jobs, "worker count (>= 1)")->check(CLI::Range(1, 1024));

  std::string g, f, t, extra;
  bool emit = false;
  std::string at, bisections;
  std::vector<std::string> unit_list;
  int levels = -1, radius = 8;

  auto* validate = app.add_subcommand("validate", "check the groupoid axioms");
  validate->add_option("groupoid", g)->required();
  validate->add_flag("--emit", emit, "print the canonical JSON form");

  auto* norms = app.add_subcommand("norms", "reduced and exotic norms");
  norms->require_subcommand(1);
  auto* reduced = norms->add_subcommand("reduced", "reduced norm of an element");
  reduced->add_option("groupoid", g)->required();
  reduced->add_option("element", f)->required();
  auto* exotic = norms->add_subcommand("exotic", "e-norm of an isotropy element");
  exotic->add_option("--at", at, "unit")->required();
  exotic->add_option("groupoid", g)->required();
  exotic->add_option("element", f)->required();
  auto* tmred = norms->add_subcommand("tmred", "graded-norm certificate");
  tmred->add_option("--bisections", bisections, "bisection family file")->required();
  tmred->add_option("groupoid", g)->required();
  tmred->add_option("element", f)->required();
  auto* morita = norms->add_subcommand("morita", "restriction isometry on a unit subset");
  morita->add_option("--units", unit_list, "comma separated units")->required()->delimiter(',');
  morita->add_option("groupoid", g)->required();

  auto* tower = app.add_subcommand("tower", "quotient towers");
  tower->require_subcommand(1);
  auto* tnorms = tower->add_subcommand("norms", "quasi-regular norm sequence");
  tnorms->add_option("tower", t)->required();
  tnorms->add_option("element", f)->required();
  tnorms->add_option("--levels", levels, "number of levels");
  auto* texotic = tower->add_subcommand("exotic", "exoticness verdict");
  texotic->add_option("tower", t)->required();
  texotic->add_option("element", f)->required();
  texotic->add_option("--levels", levels, "number of levels");
  texotic->add_option("--radius", radius, "ball radius for the lower bound on the reduced norm");
  auto* truncate = tower->add_subcommand("truncate", "finite bundle truncation");
  truncate->add_option("--levels", levels, "number of levels")->required();
  truncate->add_option("tower", t)->required();

  auto* states = app.add_subcommand("states", "states from isotropy data");
  states->require_subcommand(1);
  auto* assemble = states->add_subcommand("assemble", "state from (mu, phi)");
  assemble->add_option("groupoid", g)->required();
  assemble->add_option("state", extra)->required();
  auto* extract = states->add_subcommand("extract", "(mu, phi) from a state");
  extract->add_option("groupoid", g)->required();
  extract->add_option("functional", extra)->required();
  auto* factor = states->add_subcommand("check-factorization", "trace factorization through the reduced norm");
  factor->add_option("tower", t)->required();
  factor->add_option("trace", extra)->required();

  auto* certify = app.add_subcommand("certify", "graded-norm certificate at every unit");
  certify->add_option("groupoid", g)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n' << app.help("", CLI::AppFormatMode::Normal);
    return 2;
  }

  try {
    try {
      cfg.seed = std::stoull(cfg.seed_text, nullptr, 0);
    } catch (const std::exception&) {
      throw InputError("--seed must be an integer");
    }
    if (*validate) return cmd_validate(cx, g, emit);
    if (*reduced) return cmd_norms_reduced(cx, g, f);
    if (*exotic) return cmd_norms_exotic(cx, g, f, at);
    if (*tmred) return cmd_norms_tmred(cx, g, f, bisections);
    if (*morita) return cmd_norms_morita(cx, g, unit_list);
    if (*tnorms) return cmd_tower_norms(cx, t, f, levels);
    if (*texotic) return cmd_tower_exotic(cx, t, f, levels, radius);
    if (*truncate) return cmd_tower_truncate(cx, t, levels);
    if (*assemble) return cmd_states_assemble(cx, g, extra);
    if (*extract) return cmd_states_extract(cx, g, extra);
    if (*factor) return cmd_states_factorization(cx, t, extra);
    if (*certify) return cmd_certify(cx, g);
  } catch (const CheckFailure& e) {
    out << "check failed: " << e.what() << '\n';
    if (!e.witness().empty()) out << "witness: " << join(e.witness()) << '\n';
    return 1;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  }
  err << app.help();
  return 2;
}

}  // namespace isonorm
