#pragma once

#include "spm/assignment.hpp"

namespace spm {

// Optimal linear-assignment rounding: returns the permutation maximizing
// sum_i scores(i, map(i)). Among optima (within a small relative tolerance,
// covering exact score ties) the lexicographically smallest map is returned,
// which makes golden-file comparisons deterministic.
permutation hungarian(const assignment_matrix& scores);

// Fast fallback rounding: repeatedly take the global maximum entry and strike
// its row and column; ties broken by smallest (row, col).
permutation greedy_discretize(const assignment_matrix& scores);

// Total score of a discrete assignment under `scores`.
double assignment_total(const assignment_matrix& scores, const permutation& p);

} // namespace spm
