#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "spm/affinity.hpp"
#include "spm/assignment.hpp"

namespace spm {

// Constant matrix sitting exactly on the sparsity-constraint surface:
// every entry (2n^3)^(-1/2).
struct uniform_feasible_init {};

// Uniform feasible entries, each multiplied by (1 + u) with u drawn
// uniformly from [-magnitude, magnitude]; breaks symmetric ties.
struct uniform_perturbed_init {
    std::uint64_t seed = 0;
    double magnitude = 0.01;
};

struct given_init {
    assignment_matrix x0;
};

using init_mode = std::variant<uniform_feasible_init, uniform_perturbed_init, given_init>;

struct solver_config {
    int max_iters = 1000;
    double tol = 1e-9;        // on relative objective change
    double eps_guard = 1e-12; // denominator floor in the multiplicative step
    init_mode init = uniform_feasible_init{};

    void validate() const; // throws invalid_argument
};

struct solve_report {
    assignment_matrix final_x;
    int iterations = 0;
    // Per-iterate values, index 0 = initial solution; length iterations + 1.
    std::vector<double> objective_trace;
    std::vector<double> lagrangian_trace;
    // Residuals of the method's own constraint / stationarity system at exit.
    double constraint_residual = 0.0;
    double kkt_residual = 0.0;
    bool converged = false;
};

assignment_matrix init_solution(int n, const init_mode& mode);

// M = n-by-n reshape of W * vec(X) (column-major).
assignment_matrix affinity_apply(const affinity_matrix& w, const assignment_matrix& x);

// Objective vec(X)^T W vec(X).
double compute_alpha(const affinity_matrix& w, const assignment_matrix& x);

// Sparsity-constraint value: sum_i ||X_i.||_1^2 + sum_j ||X_.j||_1^2,
// equal to 1^T (X^T X + X X^T) 1 for nonnegative X.
double constraint_value(const assignment_matrix& x);

// One multiplicative update
//   X'_ij = X_ij * sqrt(M_ij / max(alpha * (rowsum_i + colsum_j), eps_guard));
// returns the updated matrix and alpha evaluated at the input X.
// Throws degenerate_objective when alpha = 0.
std::pair<assignment_matrix, double> spm_step(const assignment_matrix& x,
                                              const affinity_matrix& w,
                                              double eps_guard);

// Iterates spm_step from the configured initial solution until the relative
// objective change drops below tol or max_iters is reached.
solve_report spm_solve(const affinity_matrix& w, const solver_config& cfg);

// objective(X) - alpha * (constraint_value(X) - 1).
double lagrangian(const assignment_matrix& x, const affinity_matrix& w, double alpha);

// Complementary-slackness residual of the update's fixed-point condition:
// max_ij |X_ij * (M_ij - alpha*(rowsum_i + colsum_j))| / max(1, alpha).
double kkt_residual(const assignment_matrix& x, const affinity_matrix& w);

// L1-simplex baseline: X_ij <- X_ij * M_ij / alpha with ||X||_1 = 1 kept by
// explicit renormalization. Requires a strictly positive initial solution.
solve_report replicator_solve(const affinity_matrix& w, const solver_config& cfg);

// Power-iteration baseline: nonnegative principal-eigenvector estimate of W
// reshaped to n-by-n, ||vec(X)||_2 = 1; kkt_residual carries ||Wv - lambda v||_2.
solve_report spectral_solve(const affinity_matrix& w, const solver_config& cfg);

inline constexpr const char* method_names[] = {"spm", "replicator", "spectral"};

// Dispatch by method name; throws invalid_argument listing the valid set.
solve_report solve_with_method(const std::string& method, const affinity_matrix& w,
                               const solver_config& cfg);

namespace detail {
// Work counter for the most recent spm_step (or solver iteration) on this
// thread; counts one unit per touched nonzero plus one per dense entry.
// Lets tests pin the O(nnz + n^2) per-iteration bound.
std::uint64_t last_step_ops();
} // namespace detail

} // namespace spm
