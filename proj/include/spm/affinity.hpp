#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spm/geometry.hpp"

namespace spm {

struct affinity_entry {
    int row = 0; // vec position of candidate assignment (i, j)
    int col = 0; // vec position of candidate assignment (k, l)
    double value = 0.0;
};

// Sparse symmetric nonnegative N-by-N matrix, N = n^2, scoring the
// compatibility of candidate-assignment pairs. Stored CSR over vec positions
// so the solver's W * vec(X) products run in O(nnz). Zeros are not stored;
// construction validates symmetry, nonnegativity and finiteness.
class affinity_matrix {
public:
    affinity_matrix() = default;

    // `entries` must contain both (p,q) and (q,p) for every stored pair and
    // no duplicate keys; zero values are dropped.
    static affinity_matrix from_entries(int n, std::vector<affinity_entry> entries);

    int n() const { return n_; }
    int dim() const { return n_ * n_; }
    std::size_t nnz() const { return val_.size(); }

    double value_at(int row, int col) const; // 0 when absent

    // y = W x over vec positions; sequential accumulation within each row.
    void apply(std::span<const double> x, std::span<double> y) const;

    std::span<const int> row_cols(int row) const;
    std::span<const double> row_vals(int row) const;

private:
    int n_ = 0;
    std::vector<int> row_ptr_; // size dim()+1
    std::vector<int> col_;
    std::vector<double> val_;
};

struct affinity_params {
    double sigma_d = 1.0;
    double sigma_theta = 0.78539816339744830961; // pi/4
};

// Circular distance between undirected edge orientations, both in [0, pi).
double angle_distance(double a, double b);

// Pairwise-geometry affinity between two attribute-filled graphs of equal
// node count: for every model edge (i,k) and data edge (j,l),
//   W[(i,j),(k,l)] = W[(i,l),(k,j)] = exp(-(d_ik-d_jl)^2/sigma_d^2
//                                         - dtheta^2/sigma_theta^2),
// mirrored to keep W symmetric; all other entries are zero.
affinity_matrix build_affinity(const attributed_graph& model,
                               const attributed_graph& data,
                               const affinity_params& params);

} // namespace spm
