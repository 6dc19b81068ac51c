#pragma once

#include "wlforge/graph.hpp"

namespace wlforge::fixtures {

inline Graph path(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    return Graph::unlabeled(n, std::move(edges));
}

inline Graph cycle(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
    return Graph::unlabeled(n, std::move(edges));
}

inline Graph complete(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph::unlabeled(n, std::move(edges));
}

// Star K_{1,leaves} with the center at index 0.
inline Graph star(int leaves) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
    return Graph::unlabeled(leaves + 1, std::move(edges));
}

inline Graph disjoint_union(const Graph& a, const Graph& b) {
    std::vector<std::pair<int, int>> edges = a.edges();
    for (auto [u, v] : b.edges()) edges.emplace_back(u + a.node_count(), v + a.node_count());
    std::vector<int> labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    return Graph(a.node_count() + b.node_count(), std::move(edges), std::move(labels));
}

// The classic color-refinement blind spot: triangle plus 4-cycle, 7 nodes.
inline Graph triangle_c4() { return disjoint_union(complete(3), cycle(4)); }

inline Graph two_triangles() { return disjoint_union(complete(3), complete(3)); }

}  // namespace wlforge::fixtures
