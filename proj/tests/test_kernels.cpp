#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "wlforge/kernels.hpp"
#include "wlforge/rng.hpp"

using namespace wlforge;

namespace {

// Jacobi eigenvalue sweep for small symmetric matrices; test-only PSD oracle.
std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-24) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-18) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a[p][i], aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
    }
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = a[i][i];
    return eig;
}

}  // namespace

TEST_CASE("P3 feature vector, hand-derived") {
    // Round 0: three nodes share one color. Round 1: ends vs middle, 2 + 1.
    const KernelFeatureVector f = wl_feature_vector(fixtures::path(3), RefinerConfig{}, 1);
    REQUIRE(f.entries.size() == 3);
    CHECK(f.entries.at({0, 0}) == 3);
    long long counts[2] = {0, 0};
    int idx = 0;
    for (const auto& [key, count] : f.entries)
        if (key.first == 1) counts[idx++] = count;
    CHECK(counts[0] + counts[1] == 3);
    CHECK(counts[0] * counts[1] == 2);  // {2,1} in some order

    CHECK(kernel_value(f, f) == doctest::Approx(14.0));  // 9 + 4 + 1
}

TEST_CASE("iteration zero on uniform labels") {
    const KernelFeatureVector f = wl_feature_vector(fixtures::cycle(5), RefinerConfig{}, 0);
    REQUIRE(f.entries.size() == 1);
    CHECK(f.entries.at({0, 0}) == 5);
}

TEST_CASE("kernel_value basics") {
    KernelFeatureVector a, b;
    a.entries[{0, 0}] = 2;
    b.entries[{0, 1}] = 3;
    CHECK(kernel_value(a, b) == 0.0);  // disjoint supports
    CHECK(kernel_value(a, a) == 4.0);

    Rng rng(3);
    std::vector<Graph> corpus;
    for (int i = 0; i < 4; ++i) corpus.push_back(random_graph(rng, 6, 0.5, 2));
    auto features = wl_feature_vectors(corpus, RefinerConfig{}, 2);
    for (std::size_t i = 0; i < features.size(); ++i)
        for (std::size_t j = 0; j < features.size(); ++j)
            CHECK(kernel_value(features[i], features[j]) ==
                  kernel_value(features[j], features[i]));
}

TEST_CASE("permutation leaves the feature vector unchanged") {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const Graph g = random_graph(rng, rng.uniform_int(3, 9), 0.4, 2);
        const Graph h = permute(g, random_permutation(rng, g.node_count()));
        const std::vector<Graph> corpus{g, h};
        auto features = wl_feature_vectors(corpus, RefinerConfig{}, 3);
        CHECK(features[0].entries == features[1].entries);
    }
}

TEST_CASE("per-iteration counts sum to the domain size") {
    Rng rng(11);
    const Graph g = random_graph(rng, 7, 0.5, 2);
    SUBCASE("wl1") {
        const auto f = wl_feature_vector(g, RefinerConfig{}, 3);
        std::map<int, long long> per_iter;
        for (const auto& [key, count] : f.entries) per_iter[key.first] += count;
        for (int t = 0; t <= 3; ++t) CHECK(per_iter[t] == 7);
    }
    SUBCASE("set 2-WL") {
        RefinerConfig config{RefinerConfig::Kind::kwl, 2, KwlVariant::set_split};
        const auto f = wl_feature_vector(g, config, 2);
        std::map<int, long long> per_iter;
        for (const auto& [key, count] : f.entries) per_iter[key.first] += count;
        for (int t = 0; t <= 2; ++t) CHECK(per_iter[t] == 21);
    }
}

TEST_CASE("gram matrix") {
    SUBCASE("single graph, normalized") {
        const std::vector<Graph> corpus{fixtures::path(3)};
        const GramMatrix gram = gram_matrix(corpus, RefinerConfig{}, 1, true);
        REQUIRE(gram.m == 1);
        CHECK(gram.at(0, 0) == 1.0);
    }
    SUBCASE("isomorphic pair: all-ones after normalization") {
        Rng rng(13);
        const Graph g = random_graph(rng, 7, 0.4, 2);
        const std::vector<Graph> corpus{g, permute(g, random_permutation(rng, 7))};
        const GramMatrix gram = gram_matrix(corpus, RefinerConfig{}, 2, true);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(gram.at(i, j) == 1.0);
    }
    SUBCASE("K3 vs P3 unnormalized cross value is 9") {
        // Shared dictionary: round 0 overlaps 3*3; round-1 colors disjoint
        // because all degrees differ between the graphs.
        const std::vector<Graph> corpus{fixtures::complete(3), fixtures::path(3)};
        const GramMatrix gram = gram_matrix(corpus, RefinerConfig{}, 1, false);
        CHECK(gram.at(0, 1) == 9.0);
        CHECK(gram.at(1, 0) == 9.0);
    }
    SUBCASE("empty graph under normalization is rejected") {
        const std::vector<Graph> corpus{Graph::unlabeled(0, {})};
        CHECK_THROWS_AS(gram_matrix(corpus, RefinerConfig{}, 1, true), std::invalid_argument);
    }
}

TEST_CASE("gram matrices are symmetric PSD with exact unit diagonal") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Graph> corpus;
        const int m = rng.uniform_int(2, 12);
        for (int i = 0; i < m; ++i)
            corpus.push_back(random_graph(rng, rng.uniform_int(2, 9), 0.4, rng.uniform_int(1, 3)));
        const GramMatrix gram = gram_matrix(corpus, RefinerConfig{}, 3, true);

        std::vector<std::vector<double>> a(m, std::vector<double>(m));
        double max_abs = 0.0;
        for (int i = 0; i < m; ++i) {
            CHECK(gram.at(i, i) == 1.0);
            for (int j = 0; j < m; ++j) {
                CHECK(gram.at(i, j) == gram.at(j, i));
                a[i][j] = gram.at(i, j);
                max_abs = std::max(max_abs, std::abs(a[i][j]));
            }
        }
        const auto eig = symmetric_eigenvalues(a);
        double min_eig = eig[0], max_eig = eig[0];
        for (double e : eig) {
            min_eig = std::min(min_eig, e);
            max_eig = std::max(max_eig, e);
        }
        CHECK(min_eig >= -1e-8 * std::max(max_eig, max_abs));
    }
}

TEST_CASE("adding an iteration never decreases the self kernel") {
    Rng rng(19);
    for (int trial = 0; trial < 10; ++trial) {
        const Graph g = random_graph(rng, rng.uniform_int(2, 9), 0.4, 2);
        double prev = 0.0;
        for (int t = 0; t <= 4; ++t) {
            const auto f = wl_feature_vector(g, RefinerConfig{}, t);
            const double self = kernel_value(f, f);
            CHECK(self >= prev);
            prev = self;
        }
    }
}
