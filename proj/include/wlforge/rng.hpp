#pragma once

#include <cstdint>
#include <random>

#include "wlforge/graph.hpp"

namespace wlforge {

// Seeded RNG with explicit scalar derivations so streams stay reproducible
// across standard library versions (std::*_distribution is not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Inclusive bounds.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 eng_;
};

inline Graph random_graph(Rng& rng, int n, double edge_prob, int label_alphabet) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.bernoulli(edge_prob)) edges.emplace_back(u, v);
    std::vector<int> labels(n);
    for (int v = 0; v < n; ++v) labels[v] = rng.uniform_int(0, label_alphabet - 1);
    return Graph(n, std::move(edges), std::move(labels));
}

inline std::vector<int> random_permutation(Rng& rng, int n) {
    std::vector<int> pi(n);
    for (int i = 0; i < n; ++i) pi[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(pi[i], pi[rng.uniform_int(0, i)]);
    return pi;
}

}  // namespace wlforge
