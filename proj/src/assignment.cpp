#include "spm/assignment.hpp"

#include <algorithm>
#include <cmath>

#include "spm/errors.hpp"

namespace spm {

assignment_matrix::assignment_matrix(int n, double fill) : n_(n) {
    if (n < 1)
        throw invalid_argument("assignment_matrix: n must be positive");
    if (!(fill >= 0.0) || !std::isfinite(fill))
        throw invalid_argument("assignment_matrix: fill must be finite and nonnegative");
    v_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill);
}

assignment_matrix assignment_matrix::from_values(int n, std::vector<double> column_major) {
    if (n < 1)
        throw invalid_argument("assignment_matrix: n must be positive");
    if (column_major.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw dimension_mismatch("assignment_matrix: value count != n*n");
    for (double v : column_major)
        if (!std::isfinite(v) || v < 0.0)
            throw invalid_argument("assignment_matrix: entries must be finite and nonnegative");
    assignment_matrix m;
    m.n_ = n;
    m.v_ = std::move(column_major);
    return m;
}

double assignment_matrix::max_entry() const {
    return v_.empty() ? 0.0 : *std::max_element(v_.begin(), v_.end());
}

double assignment_matrix::min_entry() const {
    return v_.empty() ? 0.0 : *std::min_element(v_.begin(), v_.end());
}

bool assignment_matrix::all_finite() const {
    return std::all_of(v_.begin(), v_.end(), [](double v) { return std::isfinite(v); });
}

std::vector<double> assignment_matrix::row_sums() const {
    std::vector<double> r(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i)
            r[static_cast<std::size_t>(i)] += (*this)(i, j);
    return r;
}

std::vector<double> assignment_matrix::col_sums() const {
    std::vector<double> c(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i)
            c[static_cast<std::size_t>(j)] += (*this)(i, j);
    return c;
}

permutation::permutation(std::vector<int> map) : map_(std::move(map)) {
    if (map_.empty())
        throw invalid_argument("permutation: empty map");
    std::vector<char> seen(map_.size(), 0);
    for (int j : map_) {
        if (j < 0 || j >= static_cast<int>(map_.size()) || seen[static_cast<std::size_t>(j)])
            throw invalid_argument("permutation: map is not a bijection");
        seen[static_cast<std::size_t>(j)] = 1;
    }
}

permutation permutation::inverse() const {
    std::vector<int> inv(map_.size(), 0);
    for (int i = 0; i < n(); ++i)
        inv[static_cast<std::size_t>(map_[static_cast<std::size_t>(i)])] = i;
    return permutation(std::move(inv));
}

assignment_matrix permutation::to_matrix() const {
    assignment_matrix m(n());
    for (int i = 0; i < n(); ++i)
        m(i, (*this)[i]) = 1.0;
    return m;
}

} // namespace spm
