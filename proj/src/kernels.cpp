#include "wlforge/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "wlforge/refinement.hpp"

namespace wlforge {

long long KernelFeatureVector::self_product() const {
    long long acc = 0;
    for (const auto& [key, count] : entries) acc += count * count;
    return acc;
}

std::vector<KernelFeatureVector> wl_feature_vectors(std::span<const Graph> corpus,
                                                    const RefinerConfig& config, int iterations) {
    if (iterations < 0) throw std::invalid_argument("wl_feature_vectors: negative iterations");
    std::vector<RefineDomain> domains;
    domains.reserve(corpus.size());
    for (const Graph& g : corpus) domains.push_back(make_refine_domain(g, config));

    LockstepTrace trace = lockstep_refine(domains, iterations);

    std::vector<KernelFeatureVector> features(corpus.size());
    for (int t = 0; t <= iterations; ++t) {
        // Past convergence the recorded trace ends; the histogram of the last
        // recorded round repeats with the same color ids.
        const auto& round = trace.ids[std::min<std::size_t>(t, trace.ids.size() - 1)];
        for (std::size_t gi = 0; gi < corpus.size(); ++gi)
            for (int id : round[gi]) ++features[gi].entries[{t, id}];
    }
    return features;
}

KernelFeatureVector wl_feature_vector(const Graph& g, const RefinerConfig& config, int iterations) {
    return wl_feature_vectors(std::span<const Graph>(&g, 1), config, iterations)[0];
}

double kernel_value(const KernelFeatureVector& f1, const KernelFeatureVector& f2) {
    const auto& small = f1.entries.size() <= f2.entries.size() ? f1 : f2;
    const auto& large = f1.entries.size() <= f2.entries.size() ? f2 : f1;
    long long acc = 0;
    for (const auto& [key, count] : small.entries) {
        auto it = large.entries.find(key);
        if (it != large.entries.end()) acc += count * it->second;
    }
    return static_cast<double>(acc);
}

GramMatrix gram_matrix(std::span<const Graph> corpus, const RefinerConfig& config, int iterations,
                       bool normalize) {
    if (corpus.empty()) throw std::invalid_argument("gram_matrix: empty corpus");
    auto features = wl_feature_vectors(corpus, config, iterations);

    GramMatrix gram;
    gram.m = static_cast<int>(corpus.size());
    gram.values.assign(static_cast<std::size_t>(gram.m) * gram.m, 0.0);
    for (int i = 0; i < gram.m; ++i) gram.graph_ids.push_back("g" + std::to_string(i));

    for (int i = 0; i < gram.m; ++i)
        for (int j = i; j < gram.m; ++j) {
            double v = kernel_value(features[i], features[j]);
            gram.at(i, j) = v;
            gram.at(j, i) = v;
        }

    if (normalize) {
        for (int i = 0; i < gram.m; ++i)
            if (gram.at(i, i) <= 0.0)
                throw std::invalid_argument("gram_matrix: zero self-kernel under normalization");
        GramMatrix out = gram;
        for (int i = 0; i < gram.m; ++i)
            for (int j = 0; j < gram.m; ++j)
                out.at(i, j) = gram.at(i, j) / std::sqrt(gram.at(i, i) * gram.at(j, j));
        return out;
    }
    return gram;
}

}  // namespace wlforge
