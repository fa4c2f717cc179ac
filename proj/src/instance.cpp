#include "spm/instance.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "spm/errors.hpp"

namespace spm {

using json = nlohmann::ordered_json;

match_instance pad_dummy(match_instance inst) {
    const int nm = inst.model_nodes();
    const int nd = inst.data_nodes();
    if (nm < nd)
        inst.model_dummies += nd - nm;
    else if (nd < nm)
        inst.data_dummies += nm - nd;
    if (inst.ground_truth) {
        inst.ground_truth->resize(static_cast<std::size_t>(inst.model_nodes()), -1);
    }
    return inst;
}

namespace {

// Delaunay with a knn fallback so the pipeline stays total on degenerate
// input (collinear sets, duplicates, fewer than 3 points).
attributed_graph connect(const point_set& pts, graph_kind kind, int knn_k, const char* side) {
    const int n = pts.size();
    if (n == 1)
        return attributed_graph(1, {});
    const int k = std::min(knn_k, n - 1);
    if (kind == graph_kind::knn)
        return knn_graph(pts, k);
    try {
        return delaunay_triangulate(pts);
    } catch (const error& e) {
        const int fk = std::min(5, n - 1);
        std::cerr << "warning: " << side << " triangulation failed (" << e.what()
                  << "); falling back to knn(k=" << fk << ")\n";
        return knn_graph(pts, fk);
    }
}

} // namespace

instance_problem build_problem(const match_instance& inst, const pipeline_params& params) {
    const match_instance padded = pad_dummy(inst);
    const int n = padded.model_nodes();

    attributed_graph gm = connect(padded.model, params.graph, params.knn_k, "model");
    attributed_graph gd = connect(padded.data, params.graph, params.knn_k, "data");
    gm = compute_edge_attrs(padded.model, gm);
    gd = compute_edge_attrs(padded.data, gd);
    gm = gm.padded_to(n);
    gd = gd.padded_to(n);

    affinity_params ap;
    if (params.sigma_d) {
        ap.sigma_d = *params.sigma_d;
    } else {
        const double mean = mean_edge_length(gm);
        ap.sigma_d = mean > 0.0 ? mean : 1.0;
    }
    if (params.sigma_theta)
        ap.sigma_theta = *params.sigma_theta;

    instance_problem prob;
    prob.w = build_affinity(gm, gd, ap);
    prob.n = n;
    if (padded.ground_truth)
        prob.ground_truth = *padded.ground_truth;
    return prob;
}

namespace {

std::vector<point> parse_points(const json& doc, const char* field) {
    if (!doc.contains(field))
        throw parse_error(std::string("missing field '") + field + "'");
    const auto& arr = doc.at(field);
    if (!arr.is_array() || arr.empty())
        throw parse_error(std::string("field '") + field + "' must be a nonempty array");
    std::vector<point> pts;
    pts.reserve(arr.size());
    for (const auto& item : arr) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number())
            throw parse_error(std::string("field '") + field + "' entries must be [x, y] pairs");
        const double x = item[0].get<double>();
        const double y = item[1].get<double>();
        if (!std::isfinite(x) || !std::isfinite(y))
            throw parse_error(std::string("field '") + field + "' coordinates must be finite");
        pts.push_back({x, y});
    }
    return pts;
}

} // namespace

loaded_instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open instance file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw parse_error("instance file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object())
        throw parse_error("instance document must be a JSON object");

    loaded_instance out;
    out.instance.model = point_set(parse_points(doc, "model_points"));
    out.instance.data = point_set(parse_points(doc, "data_points"));

    if (doc.contains("ground_truth")) {
        const auto& arr = doc.at("ground_truth");
        if (!arr.is_array() || arr.size() != static_cast<std::size_t>(out.instance.model.size()))
            throw parse_error("field 'ground_truth' must list one entry per model point");
        std::vector<int> gt;
        for (const auto& item : arr) {
            if (!item.is_number_integer())
                throw parse_error("field 'ground_truth' entries must be integers");
            const int j = item.get<int>();
            if (j < -1 || j >= out.instance.data.size())
                throw parse_error("field 'ground_truth' index out of range");
            gt.push_back(j);
        }
        out.instance.ground_truth = std::move(gt);
    }

    if (doc.contains("params")) {
        const auto& p = doc.at("params");
        if (!p.is_object())
            throw parse_error("field 'params' must be an object");
        if (p.contains("sigma_d")) {
            const double v = p.at("sigma_d").get<double>();
            if (!(v > 0.0))
                throw parse_error("field 'params.sigma_d' must be positive");
            out.params.sigma_d = v;
        }
        if (p.contains("sigma_theta")) {
            const double v = p.at("sigma_theta").get<double>();
            if (!(v > 0.0))
                throw parse_error("field 'params.sigma_theta' must be positive");
            out.params.sigma_theta = v;
        }
        if (p.contains("graph")) {
            const std::string g = p.at("graph").get<std::string>();
            if (g == "delaunay")
                out.params.graph = graph_kind::delaunay;
            else if (g == "knn")
                out.params.graph = graph_kind::knn;
            else
                throw parse_error("field 'params.graph' must be \"delaunay\" or \"knn\"");
        }
        if (p.contains("k")) {
            const int k = p.at("k").get<int>();
            if (k < 1)
                throw parse_error("field 'params.k' must be positive");
            out.params.knn_k = k;
        }
    }
    return out;
}

void save_instance(const std::filesystem::path& path, const match_instance& inst) {
    json doc;
    auto points_to_json = [](const point_set& ps) {
        json arr = json::array();
        for (const auto& p : ps.points())
            arr.push_back({p.x, p.y});
        return arr;
    };
    doc["model_points"] = points_to_json(inst.model);
    doc["data_points"] = points_to_json(inst.data);
    if (inst.ground_truth)
        doc["ground_truth"] = *inst.ground_truth;
    std::ofstream out(path);
    if (!out)
        throw error("cannot write instance file: " + path.string());
    out << doc.dump(2) << "\n";
}

} // namespace spm
