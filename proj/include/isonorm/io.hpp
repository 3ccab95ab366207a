#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "isonorm/algebra.hpp"
#include "isonorm/constructions.hpp"
#include "isonorm/grading.hpp"
#include "isonorm/groupoid.hpp"
#include "isonorm/representations.hpp"
#include "isonorm/states.hpp"
#include "isonorm/towers.hpp"

namespace isonorm {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);  // throws InputError

// Either a groupoid description (elements/units/range/source/compose, optional grading)
// or a construct file {"construct": "transformation"|"partial"|"germ", group, points, action}.
struct LoadedGroupoid {
  GroupoidDescription description;  // raw, before validation
  GroupoidPtr groupoid;             // null when validation failed
  std::optional<Grading> grading;
  ValidationReport report;
};
LoadedGroupoid load_groupoid(const Json& j, const std::string& fallback_id = "G");

GradingGroupPtr read_group(const Json& j);
Grading read_grading(const FiniteGroupoid& G, const Json& j);
Json groupoid_to_json(const FiniteGroupoid& G, const std::optional<Grading>& grading = std::nullopt);

AlgebraElement read_element(const GroupoidPtr& G, const Json& j);
Json element_to_json(const AlgebraElement& f);

BisectionFamily read_bisections(const FiniteGroupoid& G, const Grading* phi, const Json& j,
                                std::optional<std::vector<Index>>* neighbourhood = nullptr);

StateData read_state(const FiniteGroupoid& G, const Json& j);
Json state_to_json(const FiniteGroupoid& G, const StateData& d);
StateFunctional read_functional(const GroupoidPtr& G, const Json& j);

QuotientTower read_tower(const Json& j);
WordElement read_word_element(const FreeGroup& alphabet, const Json& j);
TraceData read_trace(const QuotientTower& tower, const Json& j);

}  // namespace isonorm
