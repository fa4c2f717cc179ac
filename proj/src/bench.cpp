#include "spm/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

#include "spm/discretize.hpp"
#include "spm/errors.hpp"
#include "spm/rng.hpp"

namespace spm {

namespace {
constexpr double pi = 3.14159265358979323846;
// Rotations are kept small: the edge-angle attribute is measured in a fixed
// frame, so large rotations between the two sides shift every consistent
// pair's angle difference and the planted matching stops being the global
// optimum. +/- 15 degrees mirrors near-frontal image pairs.
constexpr double max_rotation = pi / 12.0;
} // namespace

match_instance gen_synthetic(int n_inliers, int n_outliers_each, double noise_sigma,
                             std::uint64_t seed) {
    if (n_inliers < 3)
        throw invalid_argument("gen_synthetic: at least 3 inliers required");
    if (n_outliers_each < 0)
        throw invalid_argument("gen_synthetic: outlier count must be nonnegative");
    if (noise_sigma < 0.0)
        throw invalid_argument("gen_synthetic: noise sigma must be nonnegative");

    rng r(seed);
    const int total = n_inliers + n_outliers_each;

    std::vector<point> model(static_cast<std::size_t>(total));
    for (auto& p : model) {
        p.x = r.uniform();
        p.y = r.uniform();
    }

    const double phi = r.uniform(-max_rotation, max_rotation);
    const double tx = r.uniform(-0.5, 0.5);
    const double ty = r.uniform(-0.5, 0.5);
    const double c = std::cos(phi), s = std::sin(phi);
    auto rigid = [&](const point& p) {
        const double x = p.x - 0.5, y = p.y - 0.5;
        return point{c * x - s * y + 0.5 + tx, s * x + c * y + 0.5 + ty};
    };

    std::vector<point> data(static_cast<std::size_t>(total));
    for (int i = 0; i < n_inliers; ++i) {
        point q = rigid(model[static_cast<std::size_t>(i)]);
        q.x += r.normal(0.0, noise_sigma);
        q.y += r.normal(0.0, noise_sigma);
        data[static_cast<std::size_t>(i)] = q;
    }
    for (int i = n_inliers; i < total; ++i)
        data[static_cast<std::size_t>(i)] = rigid(point{r.uniform(), r.uniform()});

    // Shuffle the data side so the planted matching is not the identity.
    std::vector<int> pos(static_cast<std::size_t>(total));
    std::iota(pos.begin(), pos.end(), 0);
    for (int i = total - 1; i > 0; --i) {
        const auto j = static_cast<int>(r.uniform_index(static_cast<std::uint64_t>(i) + 1));
        std::swap(data[static_cast<std::size_t>(i)], data[static_cast<std::size_t>(j)]);
        std::swap(pos[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(j)]);
    }
    std::vector<int> where(static_cast<std::size_t>(total));
    for (int slot = 0; slot < total; ++slot)
        where[static_cast<std::size_t>(pos[static_cast<std::size_t>(slot)])] = slot;

    std::vector<int> gt(static_cast<std::size_t>(total), -1);
    for (int i = 0; i < n_inliers; ++i)
        gt[static_cast<std::size_t>(i)] = where[static_cast<std::size_t>(i)];

    match_instance inst;
    inst.model = point_set(std::move(model));
    inst.data = point_set(std::move(data));
    inst.ground_truth = std::move(gt);
    inst.meta = {seed, noise_sigma, n_inliers, n_outliers_each, phi, tx, ty};
    return inst;
}

double accuracy(const permutation& pred, std::span<const int> gt) {
    if (static_cast<std::size_t>(pred.n()) != gt.size())
        throw dimension_mismatch("accuracy: prediction and ground truth sizes differ");
    int labeled = 0, correct = 0;
    for (int i = 0; i < pred.n(); ++i) {
        if (gt[static_cast<std::size_t>(i)] < 0)
            continue;
        ++labeled;
        if (pred[i] == gt[static_cast<std::size_t>(i)])
            ++correct;
    }
    if (labeled == 0)
        return 1.0;
    return static_cast<double>(correct) / static_cast<double>(labeled);
}

int sparsity(const assignment_matrix& x, double threshold) {
    if (!(threshold > 0.0))
        throw invalid_argument("sparsity: threshold must be positive");
    const double cut = threshold * x.max_entry();
    int count = 0;
    for (double v : x.values())
        if (v > cut)
            ++count;
    return count;
}

double orthogonality(const assignment_matrix& x) {
    const int n = x.n();
    if (n == 1)
        return 0.0;
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (i == k)
                continue;
            double dot = 0.0;
            for (int j = 0; j < n; ++j)
                dot += x(i, j) * x(k, j);
            total += dot;
        }
    return total / (static_cast<double>(n) * (n - 1));
}

std::pair<permutation, double> brute_force_oracle(const affinity_matrix& w) {
    const int n = w.n();
    if (n > 8)
        throw invalid_argument("brute_force_oracle: capped at n <= 8");

    // Dense copy: n <= 8 means at most a 64x64 table.
    const int dim = w.dim();
    std::vector<double> dense(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0.0);
    for (int p = 0; p < dim; ++p) {
        const auto cols = w.row_cols(p);
        const auto vals = w.row_vals(p);
        for (std::size_t k = 0; k < cols.size(); ++k)
            dense[static_cast<std::size_t>(p) * dim + cols[k]] = vals[k];
    }

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best_perm = perm;
    double best = -1.0;
    do {
        double obj = 0.0;
        for (int i = 0; i < n; ++i) {
            const int p = vec_index(n, i, perm[static_cast<std::size_t>(i)]);
            for (int k = 0; k < n; ++k) {
                if (k == i)
                    continue;
                obj += dense[static_cast<std::size_t>(p) * dim +
                             vec_index(n, k, perm[static_cast<std::size_t>(k)])];
            }
        }
        if (obj > best) { // strictly-greater keeps the lexicographically first tie
            best = obj;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {permutation(std::move(best_perm)), best};
}

std::vector<metrics_row> run_sweep(const sweep_config& cfg) {
    if (cfg.methods.empty())
        throw invalid_argument("run_sweep: no methods selected");
    for (const auto& m : cfg.methods)
        if (m != "spm" && m != "replicator" && m != "spectral")
            throw invalid_argument("unknown method '" + m +
                                   "' (valid: spm, replicator, spectral)");
    if (cfg.outlier_min < 0 || cfg.outlier_max < cfg.outlier_min)
        throw invalid_argument("run_sweep: bad outlier range");
    if (cfg.trials < 1)
        throw invalid_argument("run_sweep: trials must be positive");

    std::vector<metrics_row> rows;
    for (int outliers = cfg.outlier_min; outliers <= cfg.outlier_max; ++outliers) {
        for (int trial = 0; trial < cfg.trials; ++trial) {
            const std::uint64_t seed = derive_seed(cfg.base_seed,
                                                   static_cast<std::uint64_t>(outliers),
                                                   static_cast<std::uint64_t>(trial));
            const match_instance inst =
                gen_synthetic(cfg.n_inliers, outliers, cfg.noise_sigma, seed);
            const instance_problem prob = build_problem(inst);

            const std::size_t first = rows.size();
            double best_obj = 0.0;
            for (const auto& method : cfg.methods) {
                const auto t0 = std::chrono::steady_clock::now();
                const solve_report rep = solve_with_method(method, prob.w, cfg.solver);
                const permutation p = hungarian(rep.final_x);
                const auto t1 = std::chrono::steady_clock::now();

                metrics_row row;
                row.method = method;
                row.outliers = outliers;
                row.trial = trial;
                row.seed = seed;
                row.accuracy = accuracy(p, prob.ground_truth);
                row.objective = compute_alpha(prob.w, p.to_matrix());
                row.iterations = rep.iterations;
                row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                row.sparsity = sparsity(rep.final_x, cfg.sparsity_threshold);
                row.orthogonality = orthogonality(rep.final_x);
                best_obj = std::max(best_obj, row.objective);
                rows.push_back(std::move(row));
            }
            for (std::size_t r = first; r < rows.size(); ++r)
                rows[r].relative_objective = best_obj > 0.0 ? rows[r].objective / best_obj : 1.0;
        }
    }
    return rows;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_metrics_csv(std::ostream& out, std::span<const metrics_row> rows) {
    out << "method,outliers,trial,seed,accuracy,objective,relative_objective,"
           "iterations,wall_ms,sparsity,orthogonality\n";
    for (const auto& r : rows) {
        out << r.method << ',' << r.outliers << ',' << r.trial << ',' << r.seed << ','
            << format_double(r.accuracy) << ',' << format_double(r.objective) << ','
            << format_double(r.relative_objective) << ',' << r.iterations << ','
            << format_double(r.wall_ms) << ',' << r.sparsity << ','
            << format_double(r.orthogonality) << '\n';
    }
}

} // namespace spm
