#include "spm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "spm/errors.hpp"

namespace spm {

point_set::point_set(std::vector<point> pts, std::vector<int> labels)
    : points_(std::move(pts)), labels_(std::move(labels)) {
    if (points_.empty())
        throw invalid_argument("point_set: at least 1 point required");
    for (const auto& p : points_)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw invalid_argument("point_set: coordinates must be finite");
    if (!labels_.empty()) {
        if (labels_.size() != points_.size())
            throw invalid_argument("point_set: labels must match point count");
        auto sorted = labels_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw invalid_argument("point_set: labels must be unique");
    }
}

attributed_graph::attributed_graph(int node_count, std::vector<std::pair<int, int>> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
    if (node_count_ < 1)
        throw invalid_argument("attributed_graph: node count must be positive");
    for (auto& [a, b] : edges_) {
        if (a == b)
            throw invalid_argument("attributed_graph: self-loop");
        if (a < 0 || b < 0 || a >= node_count_ || b >= node_count_)
            throw invalid_argument("attributed_graph: edge index out of range");
        if (a > b)
            std::swap(a, b);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw invalid_argument("attributed_graph: duplicate edge");
}

attributed_graph attributed_graph::padded_to(int node_count) const {
    if (node_count < node_count_)
        throw invalid_argument("padded_to: node count may not shrink");
    attributed_graph g = *this;
    g.node_count_ = node_count;
    return g;
}

namespace {

// Orientation predicate: > 0 when (a, b, c) turn counter-clockwise.
long double orient(const point& a, const point& b, const point& c) {
    const long double abx = static_cast<long double>(b.x) - a.x;
    const long double aby = static_cast<long double>(b.y) - a.y;
    const long double acx = static_cast<long double>(c.x) - a.x;
    const long double acy = static_cast<long double>(c.y) - a.y;
    return abx * acy - aby * acx;
}

// > 0 when d lies strictly inside the circumcircle of CCW triangle (a, b, c).
long double incircle(const point& a, const point& b, const point& c, const point& d) {
    const long double adx = static_cast<long double>(a.x) - d.x;
    const long double ady = static_cast<long double>(a.y) - d.y;
    const long double bdx = static_cast<long double>(b.x) - d.x;
    const long double bdy = static_cast<long double>(b.y) - d.y;
    const long double cdx = static_cast<long double>(c.x) - d.x;
    const long double cdy = static_cast<long double>(c.y) - d.y;
    const long double ad2 = adx * adx + ady * ady;
    const long double bd2 = bdx * bdx + bdy * bdy;
    const long double cd2 = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd2 - cdy * bd2) - ady * (bdx * cd2 - cdx * bd2) +
           ad2 * (bdx * cdy - cdx * bdy);
}

struct tri {
    int a = -1, b = -1, c = -1; // CCW
    bool alive = false;
};

// Triangle mesh with an undirected-edge -> incident-triangle map, enough for
// incremental insertion and Lawson flips.
class mesh {
public:
    explicit mesh(const std::vector<point>& pts) : pts_(pts) {}

    int add_triangle(int a, int b, int c) {
        const int id = static_cast<int>(tris_.size());
        tris_.push_back({a, b, c, true});
        attach(a, b, id);
        attach(b, c, id);
        attach(c, a, id);
        return id;
    }

    void remove_triangle(int id) {
        auto& t = tris_[static_cast<std::size_t>(id)];
        detach(t.a, t.b, id);
        detach(t.b, t.c, id);
        detach(t.c, t.a, id);
        t.alive = false;
    }

    const tri& at(int id) const { return tris_[static_cast<std::size_t>(id)]; }
    const std::vector<tri>& triangles() const { return tris_; }

    std::pair<int, int> edge_triangles(int a, int b) const {
        auto it = edge_map_.find(key(a, b));
        if (it == edge_map_.end())
            return {-1, -1};
        return it->second;
    }

    // Vertex of triangle `id` opposite to edge (a, b).
    int opposite(int id, int a, int b) const {
        const tri& t = at(id);
        if (t.a != a && t.a != b) return t.a;
        if (t.b != a && t.b != b) return t.b;
        return t.c;
    }

    // Lawson legalization over a work queue of candidate edges.
    void legalize(std::vector<std::pair<int, int>> queue) {
        // Generous budget; exact-arithmetic Lawson terminates well below this.
        std::size_t budget = 64 * pts_.size() * pts_.size() + 4096;
        while (!queue.empty()) {
            auto [u, v] = queue.back();
            queue.pop_back();
            auto [t1, t2] = edge_triangles(u, v);
            if (t1 < 0 || t2 < 0)
                continue; // boundary or already flipped away
            const int c = opposite(t1, u, v);
            const int d = opposite(t2, u, v);
            // Orient so that (u, v, c) is CCW.
            int uu = u, vv = v;
            if (orient(pts_[uu], pts_[vv], pts_[c]) < 0)
                std::swap(uu, vv);
            if (incircle(pts_[uu], pts_[vv], pts_[c], pts_[d]) <= 0)
                continue; // locally Delaunay (ties kept as-is)
            // Flip only across a strictly convex quad (uu, d, vv, c).
            if (orient(pts_[uu], pts_[d], pts_[c]) <= 0 ||
                orient(pts_[d], pts_[vv], pts_[c]) <= 0)
                continue;
            if (budget-- == 0)
                throw error("delaunay_triangulate: flip budget exceeded");
            remove_triangle(t1);
            remove_triangle(t2);
            add_triangle(uu, d, c);
            add_triangle(d, vv, c);
            queue.push_back({uu, d});
            queue.push_back({d, vv});
            queue.push_back({vv, c});
            queue.push_back({c, uu});
        }
    }

private:
    static std::uint64_t key(int a, int b) {
        if (a > b) std::swap(a, b);
        return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    }

    void attach(int a, int b, int id) {
        auto [it, inserted] = edge_map_.try_emplace(key(a, b), std::pair<int, int>{-1, -1});
        auto& slot = it->second;
        if (slot.first < 0)
            slot.first = id;
        else if (slot.second < 0)
            slot.second = id;
        else
            throw error("delaunay_triangulate: non-manifold edge");
    }

    void detach(int a, int b, int id) {
        auto it = edge_map_.find(key(a, b));
        if (it->second.first == id)
            it->second.first = it->second.second;
        it->second.second = -1;
        if (it->second.first < 0)
            edge_map_.erase(it);
    }

    const std::vector<point>& pts_;
    std::vector<tri> tris_;
    std::unordered_map<std::uint64_t, std::pair<int, int>> edge_map_;
};

bool lex_less(const point& a, const point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

} // namespace

attributed_graph delaunay_triangulate(const point_set& pts) {
    const int n = pts.size();
    if (n < 3)
        throw invalid_argument("delaunay_triangulate: at least 3 points required");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return lex_less(pts[a], pts[b]); });
    for (int i = 0; i + 1 < n; ++i) {
        const point& a = pts[order[static_cast<std::size_t>(i)]];
        const point& b = pts[order[static_cast<std::size_t>(i + 1)]];
        if (a.x == b.x && a.y == b.y)
            throw duplicate_points("delaunay_triangulate: duplicate coordinates");
    }

    // Leading collinear chain along the line through the first two points.
    int first_off_line = -1;
    for (int i = 2; i < n; ++i) {
        if (orient(pts[order[0]], pts[order[1]], pts[order[static_cast<std::size_t>(i)]]) != 0) {
            first_off_line = i;
            break;
        }
    }
    if (first_off_line < 0)
        throw collinear_input("delaunay_triangulate: all points collinear");

    mesh m(pts.points());

    // Fan from the first off-line point over the chain, then a hull polygon.
    const int apex = order[static_cast<std::size_t>(first_off_line)];
    const int chain_len = first_off_line;
    for (int i = 0; i + 1 < chain_len; ++i) {
        int a = order[static_cast<std::size_t>(i)];
        int b = order[static_cast<std::size_t>(i + 1)];
        if (orient(pts[a], pts[b], pts[apex]) < 0)
            std::swap(a, b);
        m.add_triangle(a, b, apex);
    }
    std::vector<int> hull; // CCW
    if (orient(pts[order[0]], pts[order[static_cast<std::size_t>(chain_len - 1)]], pts[apex]) > 0) {
        hull.assign(order.begin(), order.begin() + chain_len);
        hull.push_back(apex);
    } else {
        hull.assign(order.rend() - chain_len, order.rend());
        hull.push_back(apex);
    }

    // Insert the remaining points in lexicographic order; each new point is a
    // hull vertex of the set processed so far, so it attaches to the strictly
    // visible hull edges.
    for (int i = first_off_line + 1; i < n; ++i) {
        const int p = order[static_cast<std::size_t>(i)];
        const int h = static_cast<int>(hull.size());
        std::vector<char> visible(static_cast<std::size_t>(h), 0);
        int n_visible = 0;
        for (int e = 0; e < h; ++e) {
            const int a = hull[static_cast<std::size_t>(e)];
            const int b = hull[static_cast<std::size_t>((e + 1) % h)];
            if (orient(pts[a], pts[b], pts[p]) < 0) {
                visible[static_cast<std::size_t>(e)] = 1;
                ++n_visible;
            }
        }
        if (n_visible == 0)
            throw error("delaunay_triangulate: internal error (no visible hull edge)");
        // The visible edges form one contiguous circular run; find its start.
        int start = 0;
        while (visible[static_cast<std::size_t>(start)])
            start = (start + 1 + h) % h;
        while (!visible[static_cast<std::size_t>(start)])
            start = (start + 1) % h;
        for (int e = start, c = 0; c < n_visible; e = (e + 1) % h, ++c) {
            const int a = hull[static_cast<std::size_t>(e)];
            const int b = hull[static_cast<std::size_t>((e + 1) % h)];
            m.add_triangle(b, a, p); // (a,b,p) is CW, so flip to CCW
        }
        // New hull: keep [start+n_visible .. start] arc, insert p after `start`.
        std::vector<int> next_hull;
        next_hull.reserve(static_cast<std::size_t>(h) + 1);
        next_hull.push_back(hull[static_cast<std::size_t>(start)]);
        next_hull.push_back(p);
        for (int e = (start + n_visible) % h; e != start; e = (e + 1) % h)
            next_hull.push_back(hull[static_cast<std::size_t>(e)]);
        hull = std::move(next_hull);
    }

    // Legalize every edge.
    std::vector<std::pair<int, int>> queue;
    for (const auto& t : m.triangles()) {
        if (!t.alive)
            continue;
        queue.push_back({t.a, t.b});
        queue.push_back({t.b, t.c});
        queue.push_back({t.c, t.a});
    }
    m.legalize(std::move(queue));

    std::vector<std::pair<int, int>> edges;
    for (const auto& t : m.triangles()) {
        if (!t.alive)
            continue;
        edges.push_back(std::minmax(t.a, t.b));
        edges.push_back(std::minmax(t.b, t.c));
        edges.push_back(std::minmax(t.c, t.a));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return attributed_graph(n, std::move(edges));
}

attributed_graph knn_graph(const point_set& pts, int k) {
    const int n = pts.size();
    if (k < 1)
        throw invalid_argument("knn_graph: k must be positive");
    if (k >= n)
        throw invalid_argument("knn_graph: k must be smaller than the point count");

    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<double, int>> cand;
    for (int i = 0; i < n; ++i) {
        cand.clear();
        for (int j = 0; j < n; ++j) {
            if (j == i)
                continue;
            const double dx = pts[i].x - pts[j].x;
            const double dy = pts[i].y - pts[j].y;
            cand.push_back({dx * dx + dy * dy, j});
        }
        std::sort(cand.begin(), cand.end()); // distance, then lower index
        for (int t = 0; t < k; ++t) {
            const int j = cand[static_cast<std::size_t>(t)].second;
            edges.push_back(std::minmax(i, j));
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return attributed_graph(n, std::move(edges));
}

attributed_graph compute_edge_attrs(const point_set& pts, const attributed_graph& g) {
    attributed_graph out = g;
    out.attrs_.clear();
    out.attrs_.reserve(g.edges().size());
    constexpr double pi = 3.14159265358979323846;
    for (const auto& [a, b] : g.edges()) {
        if (a >= pts.size() || b >= pts.size())
            throw invalid_argument("compute_edge_attrs: edge references missing point");
        const double dx = pts[b].x - pts[a].x;
        const double dy = pts[b].y - pts[a].y;
        edge_attr attr;
        attr.distance = std::hypot(dx, dy);
        double theta = std::atan2(dy, dx);
        if (theta < 0)
            theta += pi;
        if (theta >= pi)
            theta -= pi;
        attr.angle = theta;
        out.attrs_.push_back(attr);
    }
    return out;
}

double mean_edge_length(const attributed_graph& g) {
    if (!g.has_attrs() || g.edge_count() == 0)
        return 0.0;
    double sum = 0.0;
    for (const auto& a : g.attrs())
        sum += a.distance;
    return sum / static_cast<double>(g.edge_count());
}

} // namespace spm
