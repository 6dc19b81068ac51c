#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wlforge/graph.hpp"
#include "wlforge/refiner.hpp"

namespace wlforge {

// Explicit feature map of the WL subtree kernel: sparse histogram of
// (iteration, shared color id) counts.
struct KernelFeatureVector {
    std::map<std::pair<int, int>, long long> entries;

    long long self_product() const;
};

struct GramMatrix {
    int m = 0;
    std::vector<double> values;  // row-major
    std::vector<std::string> graph_ids;

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * m + j]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * m + j]; }
};

// Feature vectors for a whole corpus, refined in lockstep under one shared
// color dictionary per iteration (iteration 0 is the initial labels or
// atomic types). Entry (t, c) counts domain elements of color c at round t.
std::vector<KernelFeatureVector> wl_feature_vectors(std::span<const Graph> corpus,
                                                    const RefinerConfig& config, int iterations);

KernelFeatureVector wl_feature_vector(const Graph& g, const RefinerConfig& config, int iterations);

// Dot product over the sparse union of keys; exact in 64-bit integers.
double kernel_value(const KernelFeatureVector& f1, const KernelFeatureVector& f2);

// Pairwise kernel values; normalize divides by sqrt(K[i][i] * K[j][j]).
GramMatrix gram_matrix(std::span<const Graph> corpus, const RefinerConfig& config, int iterations,
                       bool normalize);

}  // namespace wlforge
