#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wlforge/gnn.hpp"
#include "wlforge/graph.hpp"
#include "wlforge/rng.hpp"

namespace wlforge {

struct SuiteReport {
    std::string name;
    int trials = 0;
    int passed = 0;
    std::vector<std::string> failures;  // first few messages
    double seconds = 0.0;

    bool ok() const { return trials > 0 && passed == trials; }
    std::string summary() const;
};

// Random labeled graph matching the property-suite corpus: n in 4..12, edge
// probability 0.3 or 0.5, label alphabet size 1..3.
Graph corpus_graph(Rng& rng);

// Refinement dominance of random float GNNs, t in {1,2,3}.
SuiteReport verify_thm1(std::uint64_t seed, int trials);
// Exact sign-network simulation vs color refinement, T = n.
SuiteReport verify_thm2(std::uint64_t seed, int trials);
// Two-ReLU-per-round variant of the same equivalence.
SuiteReport verify_relu(std::uint64_t seed, int trials);
// Set-based k-WL dominates random k-GNN features, k = 2, t <= 2.
SuiteReport verify_prop3(std::uint64_t seed, int trials);
// Set-combined k-WL equals color refinement on the k-set product graph.
SuiteReport verify_prop4(std::uint64_t seed, int trials);
// Staircase construction yields full-rank sign matrices.
SuiteReport verify_dist2lu(std::uint64_t seed, int trials);

// Suites by CLI name; "appendix" bundles thm2 + relu + dist2lu.
std::vector<SuiteReport> run_suite(const std::string& name, std::uint64_t seed, int trials);

// Seed-fixed synthetic task: positive iff at least three nodes carry label 1.
std::vector<Sample> toy_dataset(std::uint64_t seed, int count);

}  // namespace wlforge
