#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spm/assignment.hpp"
#include "spm/instance.hpp"
#include "spm/solver.hpp"

namespace spm {

// Synthetic matching instance: n_inliers uniform points in [0,1]^2 plus
// outliers on the model side; the data side is a random rigid copy of the
// inliers with additive Gaussian noise plus fresh outliers, in shuffled
// order. Ground truth maps each inlier to its copy; outliers are don't-care.
// Fully determined by the seed.
match_instance gen_synthetic(int n_inliers, int n_outliers_each, double noise_sigma,
                             std::uint64_t seed);

// Fraction of ground-truth-labeled model rows where pred agrees with gt
// (gt entry -1 = don't care). Vacuously 1 when no row is labeled.
double accuracy(const permutation& pred, std::span<const int> gt);

// Number of entries above threshold * max_entry(X).
int sparsity(const assignment_matrix& x, double threshold = 1e-3);

// Mean off-diagonal entry of X X^T (0 for n = 1); zero exactly for scaled
// permutation matrices.
double orthogonality(const assignment_matrix& x);

// Exact IQP optimum by enumerating all n! permutations (n <= 8); ties broken
// by lexicographically smallest map.
std::pair<permutation, double> brute_force_oracle(const affinity_matrix& w);

struct metrics_row {
    std::string method;
    int outliers = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    double objective = 0.0; // discrete IQP objective of the rounded permutation
    double relative_objective = 0.0;
    int iterations = 0;
    double wall_ms = 0.0;
    int sparsity = 0;
    double orthogonality = 0.0;
};

struct sweep_config {
    std::vector<std::string> methods{"spm", "replicator", "spectral"};
    int n_inliers = 15;
    int outlier_min = 0;
    int outlier_max = 10;
    int trials = 20;
    double noise_sigma = 0.02;
    std::uint64_t base_seed = 20240901;
    solver_config solver;
    double sparsity_threshold = 1e-3;
};

// For each outlier count and trial: generate one instance, build its affinity
// once, run every method on it. One row per (method, instance); rows ordered
// by (outliers, trial, method). relative_objective = objective / best
// objective among the compared methods on that instance.
std::vector<metrics_row> run_sweep(const sweep_config& cfg);

// Header: method,outliers,trial,seed,accuracy,objective,relative_objective,
// iterations,wall_ms,sparsity,orthogonality
void write_metrics_csv(std::ostream& out, std::span<const metrics_row> rows);

// Shortest round-trip decimal representation.
std::string format_double(double v);

} // namespace spm
