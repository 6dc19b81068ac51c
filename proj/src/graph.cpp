#include "wlforge/graph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace wlforge {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges, std::vector<int> labels)
    : n_(n), labels_(std::move(labels)) {
    if (n < 0) throw std::invalid_argument("Graph: negative node count");
    if (static_cast<int>(labels_.size()) != n)
        throw std::invalid_argument("Graph: labels must have exactly n entries");
    adj_.resize(n);
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("Graph: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("Graph: self-loop rejected");
        auto e = std::minmax(u, v);
        if (!seen.insert({e.first, e.second}).second)
            throw std::invalid_argument("Graph: duplicate edge rejected");
    }
    edges_.assign(seen.begin(), seen.end());
    for (auto [u, v] : edges_) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
}

Graph Graph::unlabeled(int n, std::vector<std::pair<int, int>> edges) {
    return Graph(n, std::move(edges), std::vector<int>(n, 0));
}

const std::vector<int>& Graph::neighbors(int v) const {
    if (v < 0 || v >= n_) throw std::invalid_argument("Graph::neighbors: index out of range");
    return adj_[v];
}

int Graph::degree(int v) const { return static_cast<int>(neighbors(v).size()); }

bool Graph::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
        throw std::invalid_argument("Graph::has_edge: index out of range");
    const auto& nbrs = adj_[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

int Graph::label(int v) const {
    if (v < 0 || v >= n_) throw std::invalid_argument("Graph::label: index out of range");
    return labels_[v];
}

KSet::KSet(std::vector<int> m) : members(std::move(m)) {
    if (members.size() < 2) throw std::invalid_argument("KSet: needs k >= 2 members");
    for (std::size_t i = 0; i + 1 < members.size(); ++i)
        if (members[i] >= members[i + 1])
            throw std::invalid_argument("KSet: members must be strictly increasing");
    if (members.front() < 0) throw std::invalid_argument("KSet: negative member");
}

bool KSet::contains(int v) const {
    return std::binary_search(members.begin(), members.end(), v);
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
    return r;
}

std::vector<KSet> enumerate_ksets(int n, int k) {
    if (k < 2 || k > n) throw std::invalid_argument("enumerate_ksets: requires 2 <= k <= n");
    std::vector<KSet> out;
    out.reserve(binomial(n, k));
    std::vector<int> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        KSet s;
        s.members = cur;
        out.push_back(std::move(s));
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

std::vector<KSet> enumerate_ksets(const Graph& g, int k) {
    return enumerate_ksets(g.node_count(), k);
}

std::size_t kset_index(int n, const KSet& s) {
    const int k = s.k();
    if (k < 2 || k > n || s.members.back() >= n)
        throw std::invalid_argument("kset_index: set invalid for n");
    std::size_t rank = 0;
    int prev = -1;
    for (int i = 0; i < k; ++i) {
        for (int v = prev + 1; v < s.members[i]; ++v)
            rank += binomial(n - 1 - v, k - 1 - i);
        prev = s.members[i];
    }
    return rank;
}

Graph induced_subgraph(const Graph& g, const KSet& s) {
    const int k = s.k();
    if (s.members.back() >= g.node_count())
        throw std::invalid_argument("induced_subgraph: set member out of range");
    std::vector<int> labels(k);
    for (int i = 0; i < k; ++i) labels[i] = g.label(s.members[i]);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (g.has_edge(s.members[i], s.members[j])) edges.emplace_back(i, j);
    return Graph(k, std::move(edges), std::move(labels));
}

Graph permute(const Graph& g, const std::vector<int>& pi) {
    const int n = g.node_count();
    if (static_cast<int>(pi.size()) != n)
        throw std::invalid_argument("permute: permutation size mismatch");
    std::vector<bool> hit(n, false);
    for (int v : pi) {
        if (v < 0 || v >= n || hit[v]) throw std::invalid_argument("permute: not a bijection");
        hit[v] = true;
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(g.edge_count());
    for (auto [u, v] : g.edges()) edges.emplace_back(pi[u], pi[v]);
    std::vector<int> labels(n);
    for (int v = 0; v < n; ++v) labels[pi[v]] = g.label(v);
    return Graph(n, std::move(edges), std::move(labels));
}

namespace {

bool extend_mapping(const Graph& g1, const Graph& g2, std::vector<int>& map,
                    std::vector<bool>& used, int v) {
    const int n = g1.node_count();
    if (v == n) return true;
    for (int w = 0; w < n; ++w) {
        if (used[w]) continue;
        if (g1.label(v) != g2.label(w)) continue;
        if (g1.degree(v) != g2.degree(w)) continue;
        bool ok = true;
        for (int u = 0; u < v && ok; ++u)
            if (g1.has_edge(u, v) != g2.has_edge(map[u], w)) ok = false;
        if (!ok) continue;
        map[v] = w;
        used[w] = true;
        if (extend_mapping(g1, g2, map, used, v + 1)) return true;
        used[w] = false;
    }
    return false;
}

}  // namespace

bool is_isomorphic_bruteforce(const Graph& g1, const Graph& g2) {
    const int n = g1.node_count();
    if (n != g2.node_count() || g1.edge_count() != g2.edge_count()) return false;

    auto signature = [](const Graph& g) {
        std::vector<std::pair<int, int>> sig(g.node_count());
        for (int v = 0; v < g.node_count(); ++v) sig[v] = {g.label(v), g.degree(v)};
        std::sort(sig.begin(), sig.end());
        return sig;
    };
    if (signature(g1) != signature(g2)) return false;

    std::vector<int> map(n, -1);
    std::vector<bool> used(n, false);
    return extend_mapping(g1, g2, map, used, 0);
}

}  // namespace wlforge
