// spm command-line tool: solve one instance, run an outlier sweep, or check a
// small instance against the exhaustive assignment oracle.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spm/bench.hpp"
#include "spm/discretize.hpp"
#include "spm/errors.hpp"
#include "spm/instance.hpp"
#include "spm/solver.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_input_error = 1;
constexpr int exit_not_converged = 2;

struct cli_config {
    std::string input;
    std::string output;
    std::vector<std::string> methods;
    std::optional<int> max_iters;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::string outliers = "0..10";
    int trials = 20;
    std::string format; // csv | json
};

spm::solver_config make_solver_config(const cli_config& cfg) {
    spm::solver_config sc;
    if (cfg.max_iters)
        sc.max_iters = *cfg.max_iters;
    if (cfg.tol)
        sc.tol = *cfg.tol;
    if (cfg.seed)
        sc.init = spm::uniform_perturbed_init{*cfg.seed, 0.01};
    return sc;
}

std::string single_method(const cli_config& cfg) {
    if (cfg.methods.empty())
        return "spm";
    if (cfg.methods.size() > 1)
        throw spm::invalid_argument("this subcommand takes a single --method");
    return cfg.methods.front();
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw spm::error("cannot write output file: " + path);
    out << text;
}

std::pair<int, int> parse_range(const std::string& spec) {
    const auto sep = spec.find("..");
    int lo = 0, hi = 0;
    try {
        if (sep == std::string::npos) {
            lo = hi = std::stoi(spec);
        } else {
            lo = std::stoi(spec.substr(0, sep));
            hi = std::stoi(spec.substr(sep + 2));
        }
    } catch (const std::exception&) {
        throw spm::invalid_argument("--outliers expects A..B, got '" + spec + "'");
    }
    if (lo < 0 || hi < lo)
        throw spm::invalid_argument("--outliers expects 0 <= A <= B, got '" + spec + "'");
    return {lo, hi};
}

int cmd_solve(const cli_config& cfg) {
    const auto loaded = spm::load_instance(cfg.input);
    const auto prob = spm::build_problem(loaded.instance, loaded.params);
    const std::string method = single_method(cfg);

    const auto t0 = std::chrono::steady_clock::now();
    const spm::solve_report rep = spm::solve_with_method(method, prob.w, make_solver_config(cfg));
    const spm::permutation perm = spm::hungarian(rep.final_x);
    const auto t1 = std::chrono::steady_clock::now();
    const double wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    const double objective = spm::compute_alpha(prob.w, perm.to_matrix());
    std::optional<double> acc;
    if (!prob.ground_truth.empty())
        acc = spm::accuracy(perm, prob.ground_truth);

    std::string text;
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "method,n,converged,iterations,objective,relaxed_objective,"
              "constraint_residual,kkt_residual,accuracy,permutation,wall_ms\n";
        os << method << ',' << prob.n << ',' << (rep.converged ? "true" : "false") << ','
           << rep.iterations << ',' << spm::format_double(objective) << ','
           << spm::format_double(rep.objective_trace.back()) << ','
           << spm::format_double(rep.constraint_residual) << ','
           << spm::format_double(rep.kkt_residual) << ',';
        if (acc)
            os << spm::format_double(*acc);
        os << ',';
        for (int i = 0; i < perm.n(); ++i)
            os << (i ? " " : "") << perm[i];
        os << ',' << spm::format_double(wall_ms) << '\n';
        text = os.str();
    } else {
        json doc;
        doc["method"] = method;
        doc["n"] = prob.n;
        doc["converged"] = rep.converged;
        doc["iterations"] = rep.iterations;
        doc["objective"] = objective;
        doc["relaxed_objective"] = rep.objective_trace.back();
        doc["constraint_residual"] = rep.constraint_residual;
        doc["kkt_residual"] = rep.kkt_residual;
        doc["permutation"] = perm.map();
        if (acc)
            doc["accuracy"] = *acc;
        doc["wall_ms"] = wall_ms;
        text = doc.dump(2) + "\n";
    }
    write_text(cfg.output, text);
    return rep.converged ? exit_ok : exit_not_converged;
}

int cmd_sweep(const cli_config& cfg) {
    spm::sweep_config sc;
    if (!cfg.methods.empty())
        sc.methods = cfg.methods;
    const auto [lo, hi] = parse_range(cfg.outliers);
    sc.outlier_min = lo;
    sc.outlier_max = hi;
    sc.trials = cfg.trials;
    if (cfg.seed)
        sc.base_seed = *cfg.seed;
    if (cfg.max_iters)
        sc.solver.max_iters = *cfg.max_iters;
    if (cfg.tol)
        sc.solver.tol = *cfg.tol;

    const auto rows = spm::run_sweep(sc);

    std::string text;
    if (cfg.format == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            json row;
            row["method"] = r.method;
            row["outliers"] = r.outliers;
            row["trial"] = r.trial;
            row["seed"] = r.seed;
            row["accuracy"] = r.accuracy;
            row["objective"] = r.objective;
            row["relative_objective"] = r.relative_objective;
            row["iterations"] = r.iterations;
            row["wall_ms"] = r.wall_ms;
            row["sparsity"] = r.sparsity;
            row["orthogonality"] = r.orthogonality;
            arr.push_back(std::move(row));
        }
        text = arr.dump(2) + "\n";
    } else {
        std::ostringstream os;
        spm::write_metrics_csv(os, rows);
        text = os.str();
    }
    write_text(cfg.output, text);

    // Per-outlier-count mean accuracy table.
    std::map<std::pair<int, std::string>, std::pair<double, int>> sums;
    for (const auto& r : rows) {
        auto& slot = sums[{r.outliers, r.method}];
        slot.first += r.accuracy;
        slot.second += 1;
    }
    std::cout << "outliers";
    for (const auto& m : sc.methods)
        std::cout << std::setw(12) << m;
    std::cout << "\n";
    for (int o = sc.outlier_min; o <= sc.outlier_max; ++o) {
        std::cout << std::setw(8) << o;
        for (const auto& m : sc.methods) {
            const auto& slot = sums[{o, m}];
            std::cout << std::setw(12) << std::fixed << std::setprecision(4)
                      << (slot.second ? slot.first / slot.second : 0.0);
        }
        std::cout << "\n";
    }
    return exit_ok;
}

int cmd_oracle_check(const cli_config& cfg) {
    const auto loaded = spm::load_instance(cfg.input);
    const auto prob = spm::build_problem(loaded.instance, loaded.params);
    if (prob.n > 8) {
        std::cerr << "error: oracle check is capped at n <= 8 (instance has n=" << prob.n
                  << ")\n";
        return exit_input_error;
    }
    const std::string method = single_method(cfg);
    const spm::solve_report rep = spm::solve_with_method(method, prob.w, make_solver_config(cfg));
    const spm::permutation perm = spm::hungarian(rep.final_x);
    const double objective = spm::compute_alpha(prob.w, perm.to_matrix());

    const auto [oracle_perm, oracle_obj] = spm::brute_force_oracle(prob.w);
    const double ratio = oracle_obj > 0.0 ? objective / oracle_obj : 1.0;
    std::cout << "method=" << method << " objective=" << spm::format_double(objective)
              << " oracle_objective=" << spm::format_double(oracle_obj)
              << " ratio=" << spm::format_double(ratio)
              << " agree=" << (perm == oracle_perm ? "true" : "false") << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse constraint-preserving matching: solver and benchmark"};
    app.require_subcommand(1);

    cli_config cfg;

    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--method", cfg.methods, "method: spm | replicator | spectral");
        cmd->add_option("--max-iters", cfg.max_iters, "iteration cap");
        cmd->add_option("--tol", cfg.tol, "relative objective-change tolerance");
        cmd->add_option("--seed", cfg.seed, "seed (perturbed init for solve, base seed for sweep)");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve one instance file");
    solve->add_option("--input", cfg.input, "instance file")->required();
    solve->add_option("--output", cfg.output, "result file (default: stdout)");
    solve->add_option("--format", cfg.format, "csv | json (default json)")
        ->check(CLI::IsMember({"csv", "json"}));
    add_solver_flags(solve);

    CLI::App* sweep = app.add_subcommand("sweep", "synthetic outlier sweep");
    sweep->add_option("--output", cfg.output, "metrics file")->required();
    sweep->add_option("--outliers", cfg.outliers, "outlier range A..B (default 0..10)");
    sweep->add_option("--trials", cfg.trials, "trials per outlier count (default 20)")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--format", cfg.format, "csv | json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    add_solver_flags(sweep);

    CLI::App* oracle = app.add_subcommand("oracle-check", "compare against the exhaustive oracle");
    oracle->add_option("--input", cfg.input, "instance file (n <= 8)")->required();
    add_solver_flags(oracle);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        if (solve->parsed())
            return cmd_solve(cfg);
        if (sweep->parsed())
            return cmd_sweep(cfg);
        return cmd_oracle_check(cfg);
    } catch (const spm::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
}
