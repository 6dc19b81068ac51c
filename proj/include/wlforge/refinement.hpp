#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wlforge/coloring.hpp"
#include "wlforge/graph.hpp"
#include "wlforge/refiner.hpp"

namespace wlforge {

// Iteration history of a refinement run. per_iteration[t] is the coloring
// after t steps; converged_at is the first t whose color count matches t-1.
struct RefinementTrace {
    std::vector<Coloring> per_iteration;
    std::optional<int> converged_at;

    const Coloring& last() const { return per_iteration.back(); }
    // c^{(t)} for arbitrary t; past the recorded tail the partition is stable.
    const Coloring& at_clamped(int t) const {
        if (t < 0) throw std::invalid_argument("RefinementTrace: negative iteration");
        return per_iteration[std::min<std::size_t>(t, per_iteration.size() - 1)];
    }
    int iterations() const { return static_cast<int>(per_iteration.size()) - 1; }
};

// One round of color refinement: the new token of v is (c(v), sorted multiset
// of neighbor colors), injectively re-indexed.
Coloring wl1_step(const Graph& g, const Coloring& c);

// Variant whose token omits the node's own color (neighbor multiset only).
Coloring wl1_step_tilde(const Graph& g, const Coloring& c);

// Variant anchored at the initial coloring: token is (c0(v), neighbor multiset
// under the current coloring).
Coloring wl1_step_anchored(const Graph& g, const Coloring& c0, const Coloring& c);

// Iterates wl1_step from c0 until the number of colors stops changing or
// max_iters is reached. Default bound: node count.
RefinementTrace wl1_run(const Graph& g, const Coloring& c0,
                        std::optional<int> max_iters = std::nullopt);

Coloring uniform_coloring(int domain_size);
Coloring coloring_from_labels(const std::vector<int>& labels);

// --- Lockstep refinement over several graphs with one shared dictionary ---

// Refinement domain of one graph: elements, cross-graph-comparable initial
// tokens, and the neighbor structure that drives token construction.
struct RefineDomain {
    enum class Rule { wl1, tuple, set_combined, set_split, set_local };
    Rule rule = Rule::wl1;
    int n = 0;
    int k = 1;
    std::size_t size = 0;
    std::vector<std::vector<long long>> init_tokens;
    std::vector<std::vector<int>> nbrs_local;   // wl1 adjacency, or local k-set neighbors
    std::vector<std::vector<int>> nbrs_global;  // global k-set neighbors

    std::vector<long long> token(std::size_t element, const std::vector<int>& colors) const;
};

RefineDomain make_wl1_domain(const Graph& g);
RefineDomain make_refine_domain(const Graph& g, const RefinerConfig& config);

struct LockstepTrace {
    // ids[t][g][e]: shared color id of element e of graph g at iteration t.
    std::vector<std::vector<std::vector<int>>> ids;
    std::vector<int> total_colors;
    std::optional<int> converged_at;

    int iterations() const { return static_cast<int>(ids.size()) - 1; }
};

// Runs the configured refinement on all domains "in parallel" with a single
// token dictionary per iteration, so color identities are comparable across
// graphs. Stops when the shared color count stabilizes or after max_iters.
LockstepTrace lockstep_refine(std::span<const RefineDomain> domains,
                              std::optional<int> max_iters = std::nullopt);

struct DistinguishResult {
    bool distinguished = false;
    std::optional<int> iteration;  // first separating iteration
    int iterations_run = 0;
};

// Parallel run on both graphs under one shared dictionary; distinguished iff
// some color has different multiplicity in g1 vs g2 at some iteration.
DistinguishResult distinguish(const Graph& g1, const Graph& g2, const RefinerConfig& config);

}  // namespace wlforge
