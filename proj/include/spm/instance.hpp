#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "spm/affinity.hpp"
#include "spm/geometry.hpp"

namespace spm {

struct instance_meta {
    std::uint64_t seed = 0;
    double noise_sigma = 0.0;
    int n_inliers = 0;
    int n_outliers_each = 0;
    double rotation = 0.0; // radians
    double translate_x = 0.0;
    double translate_y = 0.0;
};

// A pair of point sets to match, with optional ground truth. Nodes past the
// real points are dummies: they take part in no graph edges and their rows
// carry no ground truth. ground_truth[i] = data index for model node i, -1
// for don't-care; length equals the padded model side when present.
struct match_instance {
    point_set model;
    point_set data;
    int model_dummies = 0;
    int data_dummies = 0;
    std::optional<std::vector<int>> ground_truth;
    instance_meta meta;

    int model_nodes() const { return model.size() + model_dummies; }
    int data_nodes() const { return data.size() + data_dummies; }
};

// Equalizes the two sides by adding dummy nodes to the smaller one; existing
// ground truth is extended with -1 for dummy model rows.
match_instance pad_dummy(match_instance inst);

enum class graph_kind { delaunay, knn };

struct pipeline_params {
    std::optional<double> sigma_d;     // default: mean model-edge length
    std::optional<double> sigma_theta; // default: pi/4
    graph_kind graph = graph_kind::delaunay;
    int knn_k = 5;
};

// The affinity problem built from an instance, plus the padded ground truth.
struct instance_problem {
    affinity_matrix w;
    int n = 0;
    std::vector<int> ground_truth; // empty when the instance has none
};

// Full pipeline: pad to equal sizes, build a graph per side (Delaunay with a
// knn fallback for degenerate inputs), fill edge attributes, assemble W.
instance_problem build_problem(const match_instance& inst, const pipeline_params& params = {});

struct loaded_instance {
    match_instance instance;
    pipeline_params params;
};

// Instance document: {"model_points": [[x,y],...], "data_points": [[x,y],...],
// "ground_truth": [j0,...] (optional, -1 = don't care),
// "params": {"sigma_d", "sigma_theta", "graph": "delaunay"|"knn", "k"} (optional)}.
loaded_instance load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const match_instance& inst);

} // namespace spm
