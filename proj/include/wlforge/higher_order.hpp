#pragma once

#include <compare>
#include <string>
#include <vector>

#include "wlforge/graph.hpp"
#include "wlforge/refinement.hpp"

namespace wlforge {

// Canonical code of the labeled isomorphism class of the subgraph induced by
// a tuple's or set's nodes; the initial color of higher-order refinement.
// Codes are comparable across graphs.
struct AtomicType {
    std::vector<long long> code;

    auto operator<=>(const AtomicType&) const = default;
    std::string to_string() const;
};

// Encodes entry labels, the equality pattern of entries, and adjacency among
// entries; invariant under simultaneous renaming of node identities.
AtomicType atomic_type_tuple(const Graph& g, const KTuple& s);

// Lexicographic minimum over all k! orderings of (label sequence, adjacency
// bits); equal codes iff the induced subgraphs are labeled-isomorphic.
AtomicType atomic_type_set(const Graph& g, const KSet& s);

// All n tuples obtained by replacing component j (0-based) of s with every
// node of a graph on n nodes; s itself is included.
std::vector<KTuple> j_neighborhood(const KTuple& s, int j, int n);

struct SetNeighborhood {
    std::vector<KSet> local;   // swapped nodes are adjacent
    std::vector<KSet> global;  // the remaining (k-1)-overlap sets
};

// Splits the (k-1)-overlap neighborhood of s into local and global parts;
// |local| + |global| = k (n - k).
SetNeighborhood set_neighborhood(const Graph& g, const KSet& s);

enum class KDomainKind { tuple, set };

// A coloring over V(G)^k in lexicographic tuple order, or over [V(G)]^k in
// enumerate_ksets order.
struct KColoring {
    KDomainKind kind = KDomainKind::set;
    int k = 2;
    Coloring coloring;
};

// Initial higher-order coloring: atomic types, injectively re-indexed.
KColoring kwl_initial(const Graph& g, int k, KDomainKind kind);

enum class SetStepMode { combined, split };

// One round of tuple k-WL: token of s is (c(s), (M_1,...,M_k)) with M_j the
// sorted multiset of colors over the j-th replacement neighborhood.
KColoring kwl_tuple_step(const Graph& g, const KColoring& c);

// One round of set-based k-WL. combined pools local and global neighbors into
// one multiset; split keeps two multisets.
KColoring kwl_set_step(const Graph& g, const KColoring& c, SetStepMode mode);

// Full higher-order run with atomic-type initialization and the same
// convergence rule as wl1_run. k is capped (default 3) since memory grows as
// n^k or C(n,k); pass a larger k_cap to override.
RefinementTrace kwl_run(const Graph& g, int k, KwlVariant variant,
                        std::optional<int> max_iters = std::nullopt, int k_cap = 3);

// Graph on the k-sets of g with edges between sets sharing k-1 nodes; node
// labels are the atomic-type ids of the induced subgraphs (ids canonical
// within this product graph). Color refinement on it reproduces set-based
// k-WL on g.
Graph product_graph(const Graph& g, int k);

RefineDomain make_kwl_domain(const Graph& g, int k, KwlVariant variant);

}  // namespace wlforge
