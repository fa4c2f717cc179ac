#include "spm/solver.hpp"

#include <cassert>
#include <cmath>
#include <numeric>

#include "spm/errors.hpp"
#include "spm/rng.hpp"

namespace spm {

namespace detail {
namespace {
thread_local std::uint64_t g_step_ops = 0;
} // namespace

std::uint64_t last_step_ops() { return g_step_ops; }
} // namespace detail

void solver_config::validate() const {
    if (max_iters < 1)
        throw invalid_argument("solver_config: max_iters must be positive");
    if (!(tol > 0.0))
        throw invalid_argument("solver_config: tol must be positive");
    if (!(eps_guard > 0.0))
        throw invalid_argument("solver_config: eps_guard must be positive");
    if (const auto* p = std::get_if<uniform_perturbed_init>(&init)) {
        if (!(p->magnitude > 0.0) || !(p->magnitude < 1.0))
            throw invalid_argument("solver_config: perturbation magnitude must be in (0, 1)");
    }
}

assignment_matrix init_solution(int n, const init_mode& mode) {
    if (n < 1)
        throw invalid_argument("init_solution: n must be positive");
    // 2*n^3*c^2 = 1 puts the constant matrix exactly on the constraint surface.
    const double c = 1.0 / std::sqrt(2.0 * static_cast<double>(n) * n * n);
    if (std::holds_alternative<uniform_feasible_init>(mode))
        return assignment_matrix(n, c);
    if (const auto* p = std::get_if<uniform_perturbed_init>(&mode)) {
        if (!(p->magnitude > 0.0) || !(p->magnitude < 1.0))
            throw invalid_argument("init_solution: perturbation magnitude must be in (0, 1)");
        rng r(p->seed);
        assignment_matrix x(n, c);
        for (double& v : x.values())
            v *= 1.0 + r.uniform(-p->magnitude, p->magnitude);
        return x;
    }
    const auto& given = std::get<given_init>(mode).x0;
    if (given.n() != n)
        throw dimension_mismatch("init_solution: given matrix has wrong size");
    if (!given.all_finite() || given.min_entry() < 0.0)
        throw invalid_argument("init_solution: given matrix must be finite and nonnegative");
    return given;
}

assignment_matrix affinity_apply(const affinity_matrix& w, const assignment_matrix& x) {
    if (w.n() != x.n())
        throw dimension_mismatch("affinity_apply: W and X sizes differ");
    assignment_matrix m(x.n());
    w.apply(x.values(), m.values());
    return m;
}

double compute_alpha(const affinity_matrix& w, const assignment_matrix& x) {
    const assignment_matrix m = affinity_apply(w, x);
    const auto xv = x.values();
    const auto mv = m.values();
    double acc = 0.0;
    for (std::size_t p = 0; p < xv.size(); ++p)
        acc += xv[p] * mv[p];
    return acc;
}

double constraint_value(const assignment_matrix& x) {
    double total = 0.0;
    for (double s : x.row_sums())
        total += s * s;
    for (double s : x.col_sums())
        total += s * s;
    return total;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += a[i] * b[i];
    return acc;
}

// Multiplicative update with all inputs precomputed; alpha must be positive.
assignment_matrix step_kernel(const assignment_matrix& x, const assignment_matrix& m,
                              double alpha, double eps_guard) {
    const int n = x.n();
    const auto rs = x.row_sums();
    const auto cs = x.col_sums();
    assignment_matrix out(n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double xi = x(i, j);
            if (xi == 0.0)
                continue; // zeros are locked by the multiplicative form
            double denom = alpha * (rs[static_cast<std::size_t>(i)] + cs[static_cast<std::size_t>(j)]);
            if (denom < eps_guard)
                denom = eps_guard;
            out(i, j) = xi * std::sqrt(m(i, j) / denom);
        }
    }
    if (!out.all_finite())
        throw non_finite_entry("spm_step: update produced a non-finite entry");
    return out;
}

} // namespace

std::pair<assignment_matrix, double> spm_step(const assignment_matrix& x,
                                              const affinity_matrix& w, double eps_guard) {
    if (!(eps_guard > 0.0))
        throw invalid_argument("spm_step: eps_guard must be positive");
    const int n = x.n();
    const assignment_matrix m = affinity_apply(w, x);
    const double alpha = dot(x.values(), m.values());
    if (alpha <= 0.0)
        throw degenerate_objective("spm_step: objective is zero (W annihilates vec(X))");
    assignment_matrix out = step_kernel(x, m, alpha, eps_guard);
    detail::g_step_ops = w.nnz() + 4u * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
    return {std::move(out), alpha};
}

solve_report spm_solve(const affinity_matrix& w, const solver_config& cfg) {
    cfg.validate();
    const int n = w.n();
    assignment_matrix x = init_solution(n, cfg.init);

    solve_report rep;
    rep.objective_trace.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
    rep.lagrangian_trace.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);

    double prev_obj = 0.0;
    for (int t = 0;; ++t) {
        const assignment_matrix m = affinity_apply(w, x);
        const double alpha = dot(x.values(), m.values());
        if (alpha <= 0.0)
            throw degenerate_objective("spm_solve: objective is zero at iterate " +
                                       std::to_string(t));
        const double cval = constraint_value(x);
        rep.objective_trace.push_back(alpha);
        rep.lagrangian_trace.push_back(alpha - alpha * (cval - 1.0));
        if (t > 0 && std::abs(alpha - prev_obj) <= cfg.tol * std::max(1.0, prev_obj)) {
            rep.converged = true;
            break;
        }
        if (t == cfg.max_iters)
            break;
        x = step_kernel(x, m, alpha, cfg.eps_guard);
        detail::g_step_ops =
            w.nnz() + 4u * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
        assert(detail::g_step_ops <=
               8 * (w.nnz() + static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n) + 1));
        prev_obj = alpha;
    }

    rep.iterations = static_cast<int>(rep.objective_trace.size()) - 1;
    rep.constraint_residual = std::abs(constraint_value(x) - 1.0);
    rep.kkt_residual = kkt_residual(x, w);
    rep.final_x = std::move(x);
    return rep;
}

double lagrangian(const assignment_matrix& x, const affinity_matrix& w, double alpha) {
    return compute_alpha(w, x) - alpha * (constraint_value(x) - 1.0);
}

double kkt_residual(const assignment_matrix& x, const affinity_matrix& w) {
    const assignment_matrix m = affinity_apply(w, x);
    const double alpha = dot(x.values(), m.values());
    if (alpha <= 0.0)
        throw degenerate_objective("kkt_residual: objective is zero");
    const int n = x.n();
    const auto rs = x.row_sums();
    const auto cs = x.col_sums();
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double slack = x(i, j) * (m(i, j) - alpha * (rs[static_cast<std::size_t>(i)] +
                                                               cs[static_cast<std::size_t>(j)]));
            worst = std::max(worst, std::abs(slack));
        }
    return worst / std::max(1.0, alpha);
}

solve_report replicator_solve(const affinity_matrix& w, const solver_config& cfg) {
    cfg.validate();
    const int n = w.n();
    assignment_matrix x = init_solution(n, cfg.init);
    if (x.min_entry() <= 0.0)
        throw invalid_argument("replicator_solve: initial solution must be strictly positive");
    {
        double sum = std::accumulate(x.values().begin(), x.values().end(), 0.0);
        for (double& v : x.values())
            v /= sum;
    }

    solve_report rep;
    double prev_obj = 0.0;
    for (int t = 0;; ++t) {
        const assignment_matrix m = affinity_apply(w, x);
        const double alpha = dot(x.values(), m.values());
        if (alpha <= 0.0)
            throw degenerate_objective("replicator_solve: objective is zero at iterate " +
                                       std::to_string(t));
        rep.objective_trace.push_back(alpha);
        rep.lagrangian_trace.push_back(alpha); // feasible at every iterate: ||X||_1 = 1
        if (t > 0 && std::abs(alpha - prev_obj) <= cfg.tol * std::max(1.0, prev_obj)) {
            rep.converged = true;
            break;
        }
        if (t == cfg.max_iters)
            break;
        const auto xv = x.values();
        const auto mv = m.values();
        double sum = 0.0;
        for (std::size_t p = 0; p < xv.size(); ++p) {
            xv[p] *= mv[p] / alpha;
            sum += xv[p];
        }
        for (std::size_t p = 0; p < xv.size(); ++p)
            xv[p] /= sum;
        prev_obj = alpha;
    }

    rep.iterations = static_cast<int>(rep.objective_trace.size()) - 1;
    {
        const double l1 = std::accumulate(x.values().begin(), x.values().end(), 0.0);
        rep.constraint_residual = std::abs(l1 - 1.0);
        const assignment_matrix m = affinity_apply(w, x);
        const double alpha = dot(x.values(), m.values());
        double worst = 0.0;
        for (std::size_t p = 0; p < x.values().size(); ++p)
            worst = std::max(worst, std::abs(x.values()[p] * (m.values()[p] - alpha)));
        rep.kkt_residual = worst / std::max(1.0, alpha);
    }
    rep.final_x = std::move(x);
    return rep;
}

solve_report spectral_solve(const affinity_matrix& w, const solver_config& cfg) {
    cfg.validate();
    if (w.nnz() == 0)
        throw degenerate_objective("spectral_solve: W is all-zero");
    const int n = w.n();
    assignment_matrix x = init_solution(n, cfg.init);
    if (x.max_entry() <= 0.0)
        throw invalid_argument("spectral_solve: initial solution must be nonzero");
    {
        const double norm = std::sqrt(dot(x.values(), x.values()));
        for (double& v : x.values())
            v /= norm;
    }

    solve_report rep;
    assignment_matrix y(n);
    double lambda = 0.0;
    double resid = 0.0;
    for (int t = 0;; ++t) {
        w.apply(x.values(), y.values());
        lambda = dot(x.values(), y.values()); // Rayleigh quotient, ||x||_2 = 1
        rep.objective_trace.push_back(lambda);
        rep.lagrangian_trace.push_back(lambda);
        double r2 = 0.0;
        for (std::size_t p = 0; p < y.values().size(); ++p) {
            const double d = y.values()[p] - lambda * x.values()[p];
            r2 += d * d;
        }
        resid = std::sqrt(r2);
        if (resid <= cfg.tol * std::max(1.0, lambda)) {
            rep.converged = true;
            break;
        }
        if (t == cfg.max_iters)
            break;
        const double ny = std::sqrt(dot(y.values(), y.values()));
        if (ny == 0.0)
            throw degenerate_objective("spectral_solve: W maps the iterate to zero");
        for (std::size_t p = 0; p < x.values().size(); ++p)
            x.values()[p] = y.values()[p] / ny;
    }

    rep.iterations = static_cast<int>(rep.objective_trace.size()) - 1;
    rep.constraint_residual = std::abs(std::sqrt(dot(x.values(), x.values())) - 1.0);
    rep.kkt_residual = resid; // ||W v - lambda v||_2
    rep.final_x = std::move(x);
    return rep;
}

solve_report solve_with_method(const std::string& method, const affinity_matrix& w,
                               const solver_config& cfg) {
    if (method == "spm")
        return spm_solve(w, cfg);
    if (method == "replicator")
        return replicator_solve(w, cfg);
    if (method == "spectral")
        return spectral_solve(w, cfg);
    throw invalid_argument("unknown method '" + method + "' (valid: spm, replicator, spectral)");
}

} // namespace spm
