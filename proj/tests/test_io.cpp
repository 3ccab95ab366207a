#include <doctest.h>

#include "corpus.hpp"
#include "isonorm/errors.hpp"
#include "isonorm/io.hpp"
#include "isonorm/isomorphism.hpp"
#include "oracles.hpp"

using namespace isonorm;
using namespace isonorm::testing;

namespace {

std::string data(const std::string& name) { return std::string(ISONORM_DATA_DIR) + "/" + name; }

LoadedGroupoid load(const std::string& name) { return load_groupoid(read_json_file(data(name))); }

}  // namespace

TEST_CASE("data groupoids load") {
  const LoadedGroupoid g = load("g.json");
  REQUIRE(g.groupoid);
  CHECK(g.groupoid->size() == 4);
  CHECK(g.grading.has_value());
  CHECK(check_grading(*g.groupoid, *g.grading).ok);
  for (const char* name : {"swap.json", "partial.json", "linking.json"}) {
    const LoadedGroupoid l = load(name);
    REQUIRE(l.groupoid);
    CHECK(brute_force_axioms(l.groupoid->describe()));
  }
}

TEST_CASE("groupoid JSON round trip") {
  for (const auto& c : build_corpus(12, 3, 30)) {
    const Json j = groupoid_to_json(*c.g.groupoid, c.g.grading);
    const LoadedGroupoid back = load_groupoid(Json::parse(j.dump()));
    REQUIRE(back.groupoid);
    CHECK(back.groupoid->names() == c.g.groupoid->names());
    CHECK(isomorphic(*back.groupoid, *c.g.groupoid));
    CHECK(back.grading.has_value() == c.g.grading.has_value());
    if (c.g.grading) CHECK(back.grading->label == c.g.grading->label);
  }
}

TEST_CASE("element and state round trips") {
  const LoadedGroupoid g = load("g.json");
  Rng rng(4);
  const AlgebraElement f = random_element(g.groupoid, rng, 1.0);
  CHECK(read_element(g.groupoid, Json::parse(element_to_json(f).dump())) == f);

  const StateData d = random_dyadic_state(*g.groupoid, rng);
  CHECK(same_state_data(*g.groupoid, d, read_state(*g.groupoid, Json::parse(state_to_json(*g.groupoid, d).dump()))));

  const StateData s = read_state(*g.groupoid, read_json_file(data("state.json")));
  CHECK(s.mass(g.groupoid->unit("u0")) == 0.5);
  CHECK(s.field(g.groupoid->unit("u1"), g.groupoid->index("g1")) == Complex(-0.25));
}

TEST_CASE("towers, elements and traces load") {
  const QuotientTower f2 = read_tower(read_json_file(data("f2tower.json")));
  CHECK(f2.levels().size() == 3);
  CHECK(f2.levels()[0].cosets == 24);
  const WordElement a = read_word_element(f2.group().alphabet(), read_json_file(data("gensum.json")));
  CHECK(a.terms.size() == 4);
  CHECK(a.is_self_adjoint());
  const TraceData t = read_trace(f2, read_json_file(data("trace.json")));
  CHECK(t.mu_inf == 1.0);
  CHECK(t.tau.size() == 17);

  const QuotientTower sl2 = read_tower(read_json_file(data("sl2tower.json")));
  CHECK(sl2.group().backend() == Backend::IntegerMatrix);
  const QuotientTower z = read_tower(read_json_file(data("ztower.json")));
  CHECK(z.levels().front().cosets == 2);
}

TEST_CASE("bisection families load") {
  const LoadedGroupoid g = load("g.json");
  const BisectionFamily U = read_bisections(*g.groupoid, &*g.grading, read_json_file(data("bisections.json")));
  CHECK(U.x == g.groupoid->unit("u0"));
  CHECK(U.sets.size() == 2);
  const BisectionFamily C = read_bisections(*g.groupoid, &*g.grading, Json::parse(R"({"x": "u1", "canonical": true})"));
  CHECK(C.sets.at(g.groupoid->index("g1")).size() == 2);
}

TEST_CASE("malformed input is an input error") {
  CHECK_THROWS_AS(read_json_file(data("missing.json")), InputError);
  CHECK_THROWS_AS(load_groupoid(Json::parse(R"({"elements": ["e"]})")), InputError);
  const LoadedGroupoid g = load("g.json");
  CHECK_THROWS_AS(read_element(g.groupoid, Json::parse(R"({"groupoid": "other", "terms": []})")), InputError);
  CHECK_THROWS_AS(read_element(g.groupoid, Json::parse(R"({"groupoid": "g", "terms": [["nope", 1, 0]]})")), InputError);
  CHECK_THROWS_AS(read_group(Json::parse(R"({"cyclic": "x"})")), InputError);
  CHECK_THROWS_AS(read_tower(Json::parse(R"({"group": {"backend": "free", "generators": ["t"]}, "levels": [{"cyclic": 4}, {"cyclic": 2}]})")),
                  InputError);
  CHECK_THROWS_AS(read_word_element(FreeGroup({'a'}), Json::parse(R"([["c", 1, 0]])")), InputError);

  Json bad = groupoid_to_json(*g.groupoid, g.grading);
  bad["compose"][3][2] = "g0";
  const LoadedGroupoid l = load_groupoid(bad);
  CHECK_FALSE(l.groupoid);
  CHECK_FALSE(l.report.ok);
}
