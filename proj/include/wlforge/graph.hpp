#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace wlforge {

// Simple undirected labeled graph over nodes 0..n-1. Immutable after
// construction; self-loops and duplicate edges are rejected. All "canonical
// order" contracts downstream mean ascending index order.
class Graph {
public:
    Graph() = default;
    Graph(int n, std::vector<std::pair<int, int>> edges, std::vector<int> labels);

    static Graph unlabeled(int n, std::vector<std::pair<int, int>> edges);

    int node_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    // Neighbors of v in ascending order.
    const std::vector<int>& neighbors(int v) const;
    int degree(int v) const;
    bool has_edge(int u, int v) const;

    // Edges normalized to u < v, lexicographically sorted.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    const std::vector<int>& labels() const { return labels_; }
    int label(int v) const;

    bool operator==(const Graph& other) const = default;

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> labels_;
};

// A k-element node subset, stored strictly increasing. k >= 2.
struct KSet {
    std::vector<int> members;

    KSet() = default;
    explicit KSet(std::vector<int> m);

    int k() const { return static_cast<int>(members.size()); }
    bool contains(int v) const;
    auto operator<=>(const KSet&) const = default;
};

// A k-tuple of node indices; repetitions allowed.
struct KTuple {
    std::vector<int> entries;

    KTuple() = default;
    explicit KTuple(std::vector<int> e) : entries(std::move(e)) {}

    int k() const { return static_cast<int>(entries.size()); }
    auto operator<=>(const KTuple&) const = default;
};

std::uint64_t binomial(int n, int k);

// All C(n,k) k-sets in lexicographic order; this order defines row indices in
// every k-set feature matrix. Requires 2 <= k <= n.
std::vector<KSet> enumerate_ksets(int n, int k);
std::vector<KSet> enumerate_ksets(const Graph& g, int k);

// Position of s within enumerate_ksets(n, s.k()).
std::size_t kset_index(int n, const KSet& s);

// Subgraph induced by s, re-indexed to 0..k-1 in s's sorted order.
Graph induced_subgraph(const Graph& g, const KSet& s);

// Relabeled copy: edge (u,v) in g iff (pi[u],pi[v]) in the result.
Graph permute(const Graph& g, const std::vector<int>& pi);

// Exhaustive isomorphism oracle with degree/label pruning; intended for
// n <= 10. Unequal node counts simply give false.
bool is_isomorphic_bruteforce(const Graph& g1, const Graph& g2);

}  // namespace wlforge
