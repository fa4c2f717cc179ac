#include "spm/affinity.hpp"

#include <algorithm>
#include <cmath>

#include "spm/assignment.hpp"
#include "spm/errors.hpp"

namespace spm {

affinity_matrix affinity_matrix::from_entries(int n, std::vector<affinity_entry> entries) {
    if (n < 1)
        throw invalid_argument("affinity_matrix: n must be positive");
    const int dim = n * n;

    std::erase_if(entries, [](const affinity_entry& e) { return e.value == 0.0; });
    for (const auto& e : entries) {
        if (e.row < 0 || e.row >= dim || e.col < 0 || e.col >= dim)
            throw invalid_argument("affinity_matrix: entry index out of range");
        if (!std::isfinite(e.value) || e.value < 0.0)
            throw invalid_argument("affinity_matrix: entries must be finite and nonnegative");
    }
    std::sort(entries.begin(), entries.end(), [](const affinity_entry& a, const affinity_entry& b) {
        return a.row < b.row || (a.row == b.row && a.col < b.col);
    });
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (entries[i].row == entries[i - 1].row && entries[i].col == entries[i - 1].col)
            throw invalid_argument("affinity_matrix: duplicate entry key");

    affinity_matrix w;
    w.n_ = n;
    w.row_ptr_.assign(static_cast<std::size_t>(dim) + 1, 0);
    w.col_.reserve(entries.size());
    w.val_.reserve(entries.size());
    for (const auto& e : entries)
        ++w.row_ptr_[static_cast<std::size_t>(e.row) + 1];
    for (std::size_t r = 0; r < static_cast<std::size_t>(dim); ++r)
        w.row_ptr_[r + 1] += w.row_ptr_[r];
    for (const auto& e : entries) {
        w.col_.push_back(e.col);
        w.val_.push_back(e.value);
    }

    for (const auto& e : entries)
        if (w.value_at(e.col, e.row) != e.value)
            throw invalid_argument("affinity_matrix: entries must be symmetric");
    return w;
}

double affinity_matrix::value_at(int row, int col) const {
    const auto cols = row_cols(row);
    const auto it = std::lower_bound(cols.begin(), cols.end(), col);
    if (it == cols.end() || *it != col)
        return 0.0;
    return val_[static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(row)] +
                                         (it - cols.begin()))];
}

void affinity_matrix::apply(std::span<const double> x, std::span<double> y) const {
    const std::size_t dim = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
    if (x.size() != dim || y.size() != dim)
        throw dimension_mismatch("affinity_matrix::apply: vector size != n*n");
    for (std::size_t r = 0; r < dim; ++r) {
        double acc = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            acc += val_[static_cast<std::size_t>(k)] *
                   x[static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])];
        y[r] = acc;
    }
}

std::span<const int> affinity_matrix::row_cols(int row) const {
    const auto lo = static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(row)]);
    const auto hi = static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(row) + 1]);
    return {col_.data() + lo, hi - lo};
}

std::span<const double> affinity_matrix::row_vals(int row) const {
    const auto lo = static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(row)]);
    const auto hi = static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(row) + 1]);
    return {val_.data() + lo, hi - lo};
}

double angle_distance(double a, double b) {
    constexpr double pi = 3.14159265358979323846;
    const double d = std::abs(a - b);
    return std::min(d, pi - d);
}

affinity_matrix build_affinity(const attributed_graph& model, const attributed_graph& data,
                               const affinity_params& params) {
    if (model.node_count() != data.node_count())
        throw dimension_mismatch("build_affinity: node counts differ (pad the smaller side first)");
    if (!(params.sigma_d > 0.0) || !(params.sigma_theta > 0.0))
        throw invalid_argument("build_affinity: sigmas must be positive");
    if (!model.has_attrs() || !data.has_attrs())
        throw invalid_argument("build_affinity: edge attributes missing");

    const int n = model.node_count();
    const double inv_sd2 = 1.0 / (params.sigma_d * params.sigma_d);
    const double inv_st2 = 1.0 / (params.sigma_theta * params.sigma_theta);

    std::vector<affinity_entry> entries;
    entries.reserve(4 * model.edges().size() * data.edges().size());
    for (std::size_t em = 0; em < model.edges().size(); ++em) {
        const auto [i, k] = model.edges()[em];
        const auto& am = model.attrs()[em];
        for (std::size_t ed = 0; ed < data.edges().size(); ++ed) {
            const auto [j, l] = data.edges()[ed];
            const auto& ad = data.attrs()[ed];
            const double dd = am.distance - ad.distance;
            const double dt = angle_distance(am.angle, ad.angle);
            const double w = std::exp(-dd * dd * inv_sd2 - dt * dt * inv_st2);
            // Both orientations of the data edge, mirrored for symmetry.
            const int pij = vec_index(n, i, j);
            const int pkl = vec_index(n, k, l);
            const int pil = vec_index(n, i, l);
            const int pkj = vec_index(n, k, j);
            entries.push_back({pij, pkl, w});
            entries.push_back({pkl, pij, w});
            entries.push_back({pil, pkj, w});
            entries.push_back({pkj, pil, w});
        }
    }
    return affinity_matrix::from_entries(n, std::move(entries));
}

} // namespace spm
