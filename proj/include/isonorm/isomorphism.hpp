#pragma once

#include <optional>
#include <vector>

#include "isonorm/groupoid.hpp"

namespace isonorm {

// Bijection A -> B preserving range, source and composition, found by
// signature-pruned backtracking with forced propagation. Inputs above 512
// elements are rejected with InputError.
std::optional<std::vector<Index>> find_isomorphism(const FiniteGroupoid& A, const FiniteGroupoid& B);
bool isomorphic(const FiniteGroupoid& A, const FiniteGroupoid& B);
bool groups_isomorphic(const FiniteGroup& A, const FiniteGroup& B);

}  // namespace isonorm
