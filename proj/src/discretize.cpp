#include "spm/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "spm/errors.hpp"

namespace spm {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Jonker-Volgenant style shortest-augmenting-path assignment, minimizing
// sum cost[i*m + j] over perfect matchings of an n-by-n cost matrix.
// Returns the optimal total; `match` (when non-null) receives row -> col.
double lap_min(const std::vector<double>& cost, int n, std::vector<int>* match) {
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);   // col -> row (1-based)
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
    std::vector<double> minv(static_cast<std::size_t>(n) + 1);
    std::vector<char> used(static_cast<std::size_t>(n) + 1);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = p[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)])
                    continue;
                const double cur = cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] -
                                   u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    double total = 0.0;
    for (int j = 1; j <= n; ++j)
        total += cost[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1) * n + (j - 1)];
    if (match) {
        match->assign(static_cast<std::size_t>(n), -1);
        for (int j = 1; j <= n; ++j)
            (*match)[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
    }
    return total;
}

// Best completion total over `rows` x `cols` (maximization).
double best_completion(const assignment_matrix& scores, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
    const int m = static_cast<int>(rows.size());
    if (m == 0)
        return 0.0;
    std::vector<double> cost(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            cost[static_cast<std::size_t>(a) * m + b] =
                -scores(rows[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)]);
    return -lap_min(cost, m, nullptr);
}

void check_scores(const assignment_matrix& scores) {
    if (scores.n() < 1)
        throw invalid_argument("discretize: empty score matrix");
    if (!scores.all_finite())
        throw invalid_argument("discretize: scores must be finite");
}

} // namespace

permutation hungarian(const assignment_matrix& scores) {
    check_scores(scores);
    const int n = scores.n();

    // Row by row, fix the smallest column that still admits an optimal
    // completion; the tolerance covers rounding in re-derived optima so exact
    // score ties resolve lexicographically.
    std::vector<int> map(static_cast<std::size_t>(n), -1);
    std::vector<int> rows;
    std::vector<int> avail;
    for (int j = 0; j < n; ++j)
        avail.push_back(j);
    for (int i = 0; i < n; ++i) {
        rows.clear();
        for (int r = i + 1; r < n; ++r)
            rows.push_back(r);
        double best = -inf;
        std::vector<double> value(avail.size());
        for (std::size_t c = 0; c < avail.size(); ++c) {
            std::vector<int> rest_cols;
            for (std::size_t d = 0; d < avail.size(); ++d)
                if (d != c)
                    rest_cols.push_back(avail[d]);
            value[c] = scores(i, avail[c]) + best_completion(scores, rows, rest_cols);
            best = std::max(best, value[c]);
        }
        const double tol = 1e-9 * std::max(1.0, std::abs(best));
        for (std::size_t c = 0; c < avail.size(); ++c) {
            if (value[c] >= best - tol) {
                map[static_cast<std::size_t>(i)] = avail[c];
                avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(c));
                break;
            }
        }
    }
    return permutation(std::move(map));
}

permutation greedy_discretize(const assignment_matrix& scores) {
    check_scores(scores);
    const int n = scores.n();
    std::vector<int> map(static_cast<std::size_t>(n), -1);
    std::vector<char> row_done(static_cast<std::size_t>(n), 0);
    std::vector<char> col_done(static_cast<std::size_t>(n), 0);
    for (int round = 0; round < n; ++round) {
        int bi = -1, bj = -1;
        double best = -inf;
        for (int i = 0; i < n; ++i) {
            if (row_done[static_cast<std::size_t>(i)])
                continue;
            for (int j = 0; j < n; ++j) {
                if (col_done[static_cast<std::size_t>(j)])
                    continue;
                if (scores(i, j) > best) {
                    best = scores(i, j);
                    bi = i;
                    bj = j;
                }
            }
        }
        map[static_cast<std::size_t>(bi)] = bj;
        row_done[static_cast<std::size_t>(bi)] = 1;
        col_done[static_cast<std::size_t>(bj)] = 1;
    }
    return permutation(std::move(map));
}

double assignment_total(const assignment_matrix& scores, const permutation& p) {
    if (scores.n() != p.n())
        throw dimension_mismatch("assignment_total: sizes differ");
    double total = 0.0;
    for (int i = 0; i < p.n(); ++i)
        total += scores(i, p[i]);
    return total;
}

} // namespace spm
