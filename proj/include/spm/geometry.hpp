#pragma once

#include <utility>
#include <vector>

namespace spm {

struct point {
    double x = 0.0;
    double y = 0.0;
};

// Immutable 2D point set. Coordinates must be finite and the set nonempty;
// optional integer labels must be unique.
class point_set {
public:
    point_set() = default;
    explicit point_set(std::vector<point> pts, std::vector<int> labels = {});

    int size() const { return static_cast<int>(points_.size()); }
    const point& operator[](int i) const { return points_[static_cast<std::size_t>(i)]; }
    const std::vector<point>& points() const { return points_; }
    bool has_labels() const { return !labels_.empty(); }
    const std::vector<int>& labels() const { return labels_; }

private:
    std::vector<point> points_;
    std::vector<int> labels_;
};

struct edge_attr {
    double distance = 0.0;
    double angle = 0.0; // undirected line orientation, in [0, pi)
};

// Undirected simple graph on point indices with optional per-edge attributes.
// Edges are normalized to (lo, hi) and kept sorted; no self-loops, no
// duplicates. Attributes (when present) are parallel to edges().
class attributed_graph {
public:
    attributed_graph() = default;
    attributed_graph(int node_count, std::vector<std::pair<int, int>> edges);

    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    bool has_attrs() const { return !attrs_.empty(); }
    const std::vector<edge_attr>& attrs() const { return attrs_; }

    // Same edges, node count raised to `node_count`; the new nodes are
    // isolated (dummy padding).
    attributed_graph padded_to(int node_count) const;

private:
    friend attributed_graph compute_edge_attrs(const point_set& pts, const attributed_graph& g);

    int node_count_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<edge_attr> attrs_;
};

// Delaunay triangulation edge set via incremental construction + Lawson
// flips. Throws collinear_input when every point lies on one line and
// duplicate_points on coordinate-identical points.
attributed_graph delaunay_triangulate(const point_set& pts);

// Symmetrized k-nearest-neighbor graph; ties broken by lower point index.
// Fallback connectivity for inputs that cannot be triangulated.
attributed_graph knn_graph(const point_set& pts, int k);

// Fills distance and undirected angle for every edge.
attributed_graph compute_edge_attrs(const point_set& pts, const attributed_graph& g);

// Mean edge length of an attribute-filled graph (0 if the graph has no edges).
double mean_edge_length(const attributed_graph& g);

} // namespace spm
