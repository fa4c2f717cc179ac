#pragma once

#include <span>
#include <vector>

namespace spm {

// Column index of matrix entry (i, j) in the column-major vectorization
// vec(X) = (X_00, X_10, ..., X_{n-1,n-1}). Every reshape in the code base
// uses this order.
inline int vec_index(int n, int i, int j) { return j * n + i; }

// Dense n-by-n nonnegative real matrix holding a relaxed assignment.
// Storage is column-major so values() is exactly vec(X).
class assignment_matrix {
public:
    assignment_matrix() = default;
    explicit assignment_matrix(int n, double fill = 0.0);
    static assignment_matrix from_values(int n, std::vector<double> column_major);

    int n() const { return n_; }
    double operator()(int i, int j) const { return v_[static_cast<std::size_t>(vec_index(n_, i, j))]; }
    double& operator()(int i, int j) { return v_[static_cast<std::size_t>(vec_index(n_, i, j))]; }

    std::span<const double> values() const { return v_; }
    std::span<double> values() { return {v_.data(), v_.size()}; }

    double max_entry() const;
    double min_entry() const;
    bool all_finite() const;

    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;

private:
    int n_ = 0;
    std::vector<double> v_;
};

// Bijection on [0, n): map(i) = j assigns model node i to data node j.
class permutation {
public:
    permutation() = default;
    explicit permutation(std::vector<int> map); // validates bijection

    int n() const { return static_cast<int>(map_.size()); }
    int operator[](int i) const { return map_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& map() const { return map_; }
    permutation inverse() const;

    bool operator==(const permutation& other) const { return map_ == other.map_; }

    // The 0/1 matrix with ones at (i, map(i)).
    assignment_matrix to_matrix() const;

private:
    std::vector<int> map_;
};

} // namespace spm
