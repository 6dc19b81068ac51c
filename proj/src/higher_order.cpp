#include "wlforge/higher_order.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace wlforge {

std::string AtomicType::to_string() const {
    std::ostringstream ss;
    for (std::size_t i = 0; i < code.size(); ++i) {
        if (i) ss << ',';
        ss << code[i];
    }
    return ss.str();
}

AtomicType atomic_type_tuple(const Graph& g, const KTuple& s) {
    const int k = s.k();
    for (int v : s.entries)
        if (v < 0 || v >= g.node_count())
            throw std::invalid_argument("atomic_type_tuple: entry out of range");
    AtomicType t;
    t.code.reserve(1 + k + k * (k - 1));
    t.code.push_back(k);
    for (int v : s.entries) t.code.push_back(g.label(v));
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            t.code.push_back(s.entries[i] == s.entries[j] ? 1 : 0);
            t.code.push_back(g.has_edge(s.entries[i], s.entries[j]) ? 1 : 0);
        }
    return t;
}

AtomicType atomic_type_set(const Graph& g, const KSet& s) {
    const int k = s.k();
    if (s.members.back() >= g.node_count())
        throw std::invalid_argument("atomic_type_set: member out of range");
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::vector<long long> best;
    do {
        std::vector<long long> code;
        code.reserve(1 + k + k * (k - 1) / 2);
        code.push_back(k);
        for (int i : order) code.push_back(g.label(s.members[i]));
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                code.push_back(g.has_edge(s.members[order[i]], s.members[order[j]]) ? 1 : 0);
        if (best.empty() || code < best) best = std::move(code);
    } while (std::next_permutation(order.begin(), order.end()));
    AtomicType t;
    t.code = std::move(best);
    return t;
}

std::vector<KTuple> j_neighborhood(const KTuple& s, int j, int n) {
    if (j < 0 || j >= s.k()) throw std::invalid_argument("j_neighborhood: j out of range");
    std::vector<KTuple> out;
    out.reserve(n);
    for (int r = 0; r < n; ++r) {
        KTuple t = s;
        t.entries[j] = r;
        out.push_back(std::move(t));
    }
    return out;
}

SetNeighborhood set_neighborhood(const Graph& g, const KSet& s) {
    const int n = g.node_count();
    const int k = s.k();
    if (s.members.back() >= n)
        throw std::invalid_argument("set_neighborhood: member out of range");
    SetNeighborhood out;
    for (int i = 0; i < k; ++i) {
        const int v = s.members[i];
        for (int w = 0; w < n; ++w) {
            if (s.contains(w)) continue;
            std::vector<int> members = s.members;
            members[i] = w;
            std::sort(members.begin(), members.end());
            KSet t;
            t.members = std::move(members);
            (g.has_edge(v, w) ? out.local : out.global).push_back(std::move(t));
        }
    }
    std::sort(out.local.begin(), out.local.end());
    std::sort(out.global.begin(), out.global.end());
    return out;
}

namespace {

std::size_t tuple_count(int n, int k) {
    std::size_t c = 1;
    for (int i = 0; i < k; ++i) c *= static_cast<std::size_t>(n);
    return c;
}

void check_k(const Graph& g, int k, int k_cap) {
    if (k < 2 || k > g.node_count() || k > k_cap)
        throw std::invalid_argument("k-WL: k out of supported range (2 <= k <= min(n, cap))");
}

std::vector<std::vector<long long>> tuple_init_tokens(const Graph& g, int k) {
    const int n = g.node_count();
    const std::size_t count = tuple_count(n, k);
    std::vector<std::vector<long long>> tokens(count);
    KTuple s;
    s.entries.assign(k, 0);
    for (std::size_t idx = 0; idx < count; ++idx) {
        tokens[idx] = atomic_type_tuple(g, s).code;
        for (int j = k - 1; j >= 0; --j) {
            if (++s.entries[j] < n) break;
            s.entries[j] = 0;
        }
    }
    return tokens;
}

}  // namespace

RefineDomain make_kwl_domain(const Graph& g, int k, KwlVariant variant) {
    const int n = g.node_count();
    RefineDomain d;
    d.n = n;
    d.k = k;
    if (variant == KwlVariant::tuple) {
        if (k < 1 || k > n) throw std::invalid_argument("make_kwl_domain: bad k");
        d.rule = RefineDomain::Rule::tuple;
        d.size = tuple_count(n, k);
        d.init_tokens = tuple_init_tokens(g, k);
        return d;
    }
    switch (variant) {
        case KwlVariant::set_combined: d.rule = RefineDomain::Rule::set_combined; break;
        case KwlVariant::set_split: d.rule = RefineDomain::Rule::set_split; break;
        case KwlVariant::set_local: d.rule = RefineDomain::Rule::set_local; break;
        default: throw std::logic_error("make_kwl_domain: bad variant");
    }
    auto sets = enumerate_ksets(g, k);
    d.size = sets.size();
    d.init_tokens.resize(d.size);
    d.nbrs_local.resize(d.size);
    d.nbrs_global.resize(d.size);
    for (std::size_t i = 0; i < sets.size(); ++i) {
        d.init_tokens[i] = atomic_type_set(g, sets[i]).code;
        auto nbh = set_neighborhood(g, sets[i]);
        for (const KSet& t : nbh.local) d.nbrs_local[i].push_back(static_cast<int>(kset_index(n, t)));
        for (const KSet& t : nbh.global) d.nbrs_global[i].push_back(static_cast<int>(kset_index(n, t)));
    }
    return d;
}

KColoring kwl_initial(const Graph& g, int k, KDomainKind kind) {
    KColoring c;
    c.kind = kind;
    c.k = k;
    if (kind == KDomainKind::tuple) {
        c.coloring = canonicalize(tuple_init_tokens(g, k));
    } else {
        auto sets = enumerate_ksets(g, k);
        std::vector<std::vector<long long>> tokens(sets.size());
        for (std::size_t i = 0; i < sets.size(); ++i) tokens[i] = atomic_type_set(g, sets[i]).code;
        c.coloring = canonicalize(tokens);
    }
    return c;
}

namespace {

KColoring domain_step(const KColoring& c, const RefineDomain& d) {
    if (static_cast<std::size_t>(c.coloring.domain_size()) != d.size)
        throw std::invalid_argument("k-WL step: coloring domain mismatch");
    std::vector<std::vector<long long>> tokens(d.size);
    for (std::size_t e = 0; e < d.size; ++e) tokens[e] = d.token(e, c.coloring.colors());
    KColoring out = c;
    out.coloring = canonicalize(tokens);
    return out;
}

}  // namespace

KColoring kwl_tuple_step(const Graph& g, const KColoring& c) {
    if (c.kind != KDomainKind::tuple)
        throw std::invalid_argument("kwl_tuple_step: tuple coloring required");
    return domain_step(c, make_kwl_domain(g, c.k, KwlVariant::tuple));
}

KColoring kwl_set_step(const Graph& g, const KColoring& c, SetStepMode mode) {
    if (c.kind != KDomainKind::set)
        throw std::invalid_argument("kwl_set_step: set coloring required");
    auto variant = mode == SetStepMode::combined ? KwlVariant::set_combined : KwlVariant::set_split;
    return domain_step(c, make_kwl_domain(g, c.k, variant));
}

RefinementTrace kwl_run(const Graph& g, int k, KwlVariant variant,
                        std::optional<int> max_iters, int k_cap) {
    check_k(g, k, k_cap);
    RefineDomain d = make_kwl_domain(g, k, variant);
    const int bound = max_iters.value_or(static_cast<int>(d.size));

    RefinementTrace trace;
    trace.per_iteration.push_back(canonicalize(d.init_tokens));
    for (int t = 1; t <= bound; ++t) {
        const Coloring& prev = trace.per_iteration.back();
        std::vector<std::vector<long long>> tokens(d.size);
        for (std::size_t e = 0; e < d.size; ++e) tokens[e] = d.token(e, prev.colors());
        Coloring next = canonicalize(tokens);
        const bool stable = next.num_colors() == prev.num_colors();
        trace.per_iteration.push_back(std::move(next));
        if (stable) {
            trace.converged_at = t;
            break;
        }
    }
    return trace;
}

Graph product_graph(const Graph& g, int k) {
    if (k < 2 || k > g.node_count())
        throw std::invalid_argument("product_graph: requires 2 <= k <= n");
    auto sets = enumerate_ksets(g, k);
    std::vector<std::vector<long long>> tokens(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) tokens[i] = atomic_type_set(g, sets[i]).code;
    Coloring labels = canonicalize(tokens);

    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            std::vector<int> inter;
            std::set_intersection(sets[i].members.begin(), sets[i].members.end(),
                                  sets[j].members.begin(), sets[j].members.end(),
                                  std::back_inserter(inter));
            if (static_cast<int>(inter.size()) == k - 1)
                edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    return Graph(static_cast<int>(sets.size()), std::move(edges), labels.colors());
}

}  // namespace wlforge
