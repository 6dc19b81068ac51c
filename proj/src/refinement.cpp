#include "wlforge/refinement.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "wlforge/higher_order.hpp"

namespace wlforge {

namespace {

void check_domain(const Graph& g, const Coloring& c, const char* who) {
    if (c.domain_size() != g.node_count())
        throw std::invalid_argument(std::string(who) + ": coloring domain mismatch");
}

std::vector<long long> sorted_neighbor_colors(const Graph& g, const Coloring& c, int v) {
    std::vector<long long> nbr;
    nbr.reserve(g.neighbors(v).size());
    for (int u : g.neighbors(v)) nbr.push_back(c.color(u));
    std::sort(nbr.begin(), nbr.end());
    return nbr;
}

}  // namespace

Coloring wl1_step(const Graph& g, const Coloring& c) {
    check_domain(g, c, "wl1_step");
    std::vector<std::vector<long long>> tokens(g.node_count());
    for (int v = 0; v < g.node_count(); ++v) {
        auto t = sorted_neighbor_colors(g, c, v);
        t.insert(t.begin(), c.color(v));
        tokens[v] = std::move(t);
    }
    return canonicalize(tokens);
}

Coloring wl1_step_tilde(const Graph& g, const Coloring& c) {
    check_domain(g, c, "wl1_step_tilde");
    std::vector<std::vector<long long>> tokens(g.node_count());
    for (int v = 0; v < g.node_count(); ++v) tokens[v] = sorted_neighbor_colors(g, c, v);
    return canonicalize(tokens);
}

Coloring wl1_step_anchored(const Graph& g, const Coloring& c0, const Coloring& c) {
    check_domain(g, c0, "wl1_step_anchored");
    check_domain(g, c, "wl1_step_anchored");
    std::vector<std::vector<long long>> tokens(g.node_count());
    for (int v = 0; v < g.node_count(); ++v) {
        auto t = sorted_neighbor_colors(g, c, v);
        t.insert(t.begin(), c0.color(v));
        tokens[v] = std::move(t);
    }
    return canonicalize(tokens);
}

RefinementTrace wl1_run(const Graph& g, const Coloring& c0, std::optional<int> max_iters) {
    check_domain(g, c0, "wl1_run");
    const int bound = max_iters.value_or(g.node_count());
    RefinementTrace trace;
    trace.per_iteration.push_back(canonicalize(c0.colors()));
    for (int t = 1; t <= bound; ++t) {
        Coloring next = wl1_step(g, trace.per_iteration.back());
        const bool stable = next.num_colors() == trace.per_iteration.back().num_colors();
        trace.per_iteration.push_back(std::move(next));
        if (stable) {
            trace.converged_at = t;
            break;
        }
    }
    return trace;
}

Coloring uniform_coloring(int domain_size) {
    return Coloring::from_canonical(std::vector<int>(domain_size, 0), domain_size > 0 ? 1 : 0);
}

Coloring coloring_from_labels(const std::vector<int>& labels) {
    return canonicalize(labels);
}

std::vector<long long> RefineDomain::token(std::size_t element, const std::vector<int>& colors) const {
    std::vector<long long> t;
    switch (rule) {
        case Rule::wl1:
        case Rule::set_local: {
            const auto& nbrs = nbrs_local[element];
            t.reserve(nbrs.size() + 1);
            t.push_back(colors[element]);
            std::vector<long long> ns(nbrs.size());
            for (std::size_t i = 0; i < nbrs.size(); ++i) ns[i] = colors[nbrs[i]];
            std::sort(ns.begin(), ns.end());
            t.insert(t.end(), ns.begin(), ns.end());
            return t;
        }
        case Rule::set_combined: {
            std::vector<long long> ns;
            ns.reserve(nbrs_local[element].size() + nbrs_global[element].size());
            for (int u : nbrs_local[element]) ns.push_back(colors[u]);
            for (int u : nbrs_global[element]) ns.push_back(colors[u]);
            std::sort(ns.begin(), ns.end());
            t.push_back(colors[element]);
            t.insert(t.end(), ns.begin(), ns.end());
            return t;
        }
        case Rule::set_split: {
            std::vector<long long> loc, glo;
            loc.reserve(nbrs_local[element].size());
            glo.reserve(nbrs_global[element].size());
            for (int u : nbrs_local[element]) loc.push_back(colors[u]);
            for (int u : nbrs_global[element]) glo.push_back(colors[u]);
            std::sort(loc.begin(), loc.end());
            std::sort(glo.begin(), glo.end());
            t.push_back(colors[element]);
            t.insert(t.end(), loc.begin(), loc.end());
            t.push_back(-1);  // separator; color ids are non-negative
            t.insert(t.end(), glo.begin(), glo.end());
            return t;
        }
        case Rule::tuple: {
            // Replacement neighborhoods: index arithmetic over the
            // lexicographic tuple order, no adjacency needed.
            t.push_back(colors[element]);
            std::vector<std::size_t> stride(k, 1);
            for (int j = k - 2; j >= 0; --j) stride[j] = stride[j + 1] * static_cast<std::size_t>(n);
            for (int j = 0; j < k; ++j) {
                const int sj = static_cast<int>(element / stride[j] % n);
                const std::size_t base = element - static_cast<std::size_t>(sj) * stride[j];
                std::vector<long long> block(n);
                for (int r = 0; r < n; ++r) block[r] = colors[base + static_cast<std::size_t>(r) * stride[j]];
                std::sort(block.begin(), block.end());
                t.push_back(-1);
                t.insert(t.end(), block.begin(), block.end());
            }
            return t;
        }
    }
    throw std::logic_error("RefineDomain::token: bad rule");
}

RefineDomain make_wl1_domain(const Graph& g) {
    RefineDomain d;
    d.rule = RefineDomain::Rule::wl1;
    d.n = g.node_count();
    d.k = 1;
    d.size = static_cast<std::size_t>(g.node_count());
    d.init_tokens.resize(d.size);
    d.nbrs_local.resize(d.size);
    for (int v = 0; v < g.node_count(); ++v) {
        d.init_tokens[v] = {g.label(v)};
        d.nbrs_local[v] = g.neighbors(v);
    }
    return d;
}

RefineDomain make_refine_domain(const Graph& g, const RefinerConfig& config) {
    if (config.kind == RefinerConfig::Kind::wl1) return make_wl1_domain(g);
    return make_kwl_domain(g, config.k, config.variant);
}

LockstepTrace lockstep_refine(std::span<const RefineDomain> domains, std::optional<int> max_iters) {
    std::size_t total = 0;
    for (const auto& d : domains) total += d.size;
    const int bound = max_iters.value_or(static_cast<int>(total));

    LockstepTrace trace;
    // Iteration 0: shared dictionary over initial tokens, in domain order.
    {
        std::map<std::vector<long long>, int> dict;
        std::vector<std::vector<int>> ids;
        for (const auto& d : domains) {
            std::vector<int> mine(d.size);
            for (std::size_t e = 0; e < d.size; ++e) {
                auto [it, ins] = dict.try_emplace(d.init_tokens[e], static_cast<int>(dict.size()));
                mine[e] = it->second;
            }
            ids.push_back(std::move(mine));
        }
        trace.ids.push_back(std::move(ids));
        trace.total_colors.push_back(static_cast<int>(dict.size()));
    }

    for (int t = 1; t <= bound; ++t) {
        std::map<std::vector<long long>, int> dict;
        std::vector<std::vector<int>> ids;
        for (std::size_t gi = 0; gi < domains.size(); ++gi) {
            const auto& d = domains[gi];
            const auto& prev = trace.ids.back()[gi];
            std::vector<int> mine(d.size);
            for (std::size_t e = 0; e < d.size; ++e) {
                auto tok = d.token(e, prev);
                auto [it, ins] = dict.try_emplace(std::move(tok), static_cast<int>(dict.size()));
                mine[e] = it->second;
            }
            ids.push_back(std::move(mine));
        }
        trace.ids.push_back(std::move(ids));
        trace.total_colors.push_back(static_cast<int>(dict.size()));
        if (trace.total_colors[t] == trace.total_colors[t - 1]) {
            trace.converged_at = t;
            break;
        }
    }
    return trace;
}

std::string to_string(KwlVariant v) {
    switch (v) {
        case KwlVariant::tuple: return "tuple";
        case KwlVariant::set_combined: return "set-combined";
        case KwlVariant::set_split: return "set-split";
        case KwlVariant::set_local: return "set-local";
    }
    return "?";
}

std::string to_string(const RefinerConfig& c) {
    if (c.kind == RefinerConfig::Kind::wl1) return "wl1";
    return "kwl(k=" + std::to_string(c.k) + "," + to_string(c.variant) + ")";
}

KwlVariant kwl_variant_from_string(const std::string& s) {
    if (s == "tuple") return KwlVariant::tuple;
    if (s == "set-combined") return KwlVariant::set_combined;
    if (s == "set-split") return KwlVariant::set_split;
    if (s == "set-local") return KwlVariant::set_local;
    throw std::invalid_argument("unknown k-WL variant: " + s);
}

DistinguishResult distinguish(const Graph& g1, const Graph& g2, const RefinerConfig& config) {
    const RefineDomain domains[2] = {make_refine_domain(g1, config),
                                     make_refine_domain(g2, config)};
    LockstepTrace trace = lockstep_refine(domains);

    DistinguishResult result;
    result.iterations_run = trace.iterations();
    for (std::size_t t = 0; t < trace.ids.size(); ++t) {
        std::vector<long long> h1(trace.total_colors[t], 0), h2(trace.total_colors[t], 0);
        for (int id : trace.ids[t][0]) ++h1[id];
        for (int id : trace.ids[t][1]) ++h2[id];
        if (h1 != h2) {
            result.distinguished = true;
            result.iteration = static_cast<int>(t);
            return result;
        }
    }
    return result;
}

}  // namespace wlforge
