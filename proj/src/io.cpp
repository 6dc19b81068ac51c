#include "wlforge/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace wlforge {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::vector<long long> parse_ints(const std::string& line, const std::string& origin, int lineno,
                                  std::size_t expected) {
    std::vector<long long> out;
    std::string cleaned = line;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream ss(cleaned);
    long long v;
    while (ss >> v) out.push_back(v);
    std::string rest;
    ss.clear();
    if (ss >> rest || (expected != 0 && out.size() != expected))
        throw FormatError(origin + ":" + std::to_string(lineno) + ": expected " +
                          std::to_string(expected) + " integers");
    return out;
}

}  // namespace

Graph edge_list_from_string(const std::string& text, const std::string& origin) {
    auto lines = split_lines(text);
    if (lines.empty()) throw FormatError(origin + ": empty file");
    auto header = parse_ints(lines[0], origin, 1, 3);
    const long long n = header[0], m = header[1], alphabet = header[2];
    if (n < 0 || m < 0 || alphabet < 1)
        throw FormatError(origin + ":1: invalid header");
    if (static_cast<long long>(lines.size()) != 1 + n + m)
        throw FormatError(origin + ": expected " + std::to_string(1 + n + m) + " lines, got " +
                          std::to_string(lines.size()));

    std::vector<int> labels(n, 0);
    std::vector<bool> seen(n, false);
    for (long long i = 0; i < n; ++i) {
        const int lineno = static_cast<int>(2 + i);
        auto vals = parse_ints(lines[1 + i], origin, lineno, 2);
        const long long v = vals[0], label = vals[1];
        if (v < 0 || v >= n || seen[v])
            throw FormatError(origin + ":" + std::to_string(lineno) + ": bad node index");
        if (label < 0 || label >= alphabet)
            throw FormatError(origin + ":" + std::to_string(lineno) + ": label outside alphabet");
        seen[v] = true;
        labels[v] = static_cast<int>(label);
    }

    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> dedup;
    for (long long i = 0; i < m; ++i) {
        const int lineno = static_cast<int>(2 + n + i);
        auto vals = parse_ints(lines[1 + n + i], origin, lineno, 2);
        const long long u = vals[0], v = vals[1];
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw FormatError(origin + ":" + std::to_string(lineno) + ": endpoint out of range");
        if (u == v)
            throw FormatError(origin + ":" + std::to_string(lineno) + ": self-loop rejected");
        auto e = std::minmax(u, v);
        if (!dedup.insert({static_cast<int>(e.first), static_cast<int>(e.second)}).second)
            throw FormatError(origin + ":" + std::to_string(lineno) + ": duplicate edge rejected");
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    return Graph(static_cast<int>(n), std::move(edges), std::move(labels));
}

std::string edge_list_to_string(const Graph& g) {
    int alphabet = 1;
    for (int v = 0; v < g.node_count(); ++v) alphabet = std::max(alphabet, g.label(v) + 1);
    std::ostringstream out;
    out << g.node_count() << ' ' << g.edge_count() << ' ' << alphabet << '\n';
    for (int v = 0; v < g.node_count(); ++v) out << v << ' ' << g.label(v) << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(path + ": cannot open file for writing");
    out << content;
}

Graph load_edge_list(const std::string& path) {
    return edge_list_from_string(read_text_file(path), path);
}

void write_edge_list(const std::string& path, const Graph& g) {
    write_text_file(path, edge_list_to_string(g));
}

Dataset load_tudataset(const std::string& dir, const std::string& name) {
    const std::string base = dir + "/" + name + "_";
    auto indicator_lines = split_lines(read_text_file(base + "graph_indicator.txt"));
    const int total_nodes = static_cast<int>(indicator_lines.size());

    std::vector<int> graph_of(total_nodes);
    int graph_count = 0;
    for (int i = 0; i < total_nodes; ++i) {
        auto vals = parse_ints(indicator_lines[i], base + "graph_indicator.txt", i + 1, 1);
        const long long gid = vals[0];
        if (gid < 1) throw FormatError(base + "graph_indicator.txt: graph ids are 1-indexed");
        graph_of[i] = static_cast<int>(gid - 1);
        graph_count = std::max(graph_count, static_cast<int>(gid));
    }

    std::vector<int> local_index(total_nodes);
    std::vector<int> graph_size(graph_count, 0);
    for (int i = 0; i < total_nodes; ++i) local_index[i] = graph_size[graph_of[i]]++;

    std::vector<int> node_labels(total_nodes, 0);
    {
        std::ifstream probe(base + "node_labels.txt");
        if (probe) {
            auto label_lines = split_lines(read_text_file(base + "node_labels.txt"));
            if (static_cast<int>(label_lines.size()) != total_nodes)
                throw FormatError(base + "node_labels.txt: node count mismatch with indicator");
            for (int i = 0; i < total_nodes; ++i)
                node_labels[i] = static_cast<int>(
                    parse_ints(label_lines[i], base + "node_labels.txt", i + 1, 1)[0]);
        }
    }

    std::vector<std::set<std::pair<int, int>>> edges(graph_count);
    auto edge_lines = split_lines(read_text_file(base + "A.txt"));
    for (std::size_t i = 0; i < edge_lines.size(); ++i) {
        if (edge_lines[i].find_first_not_of(" \t") == std::string::npos) continue;
        auto vals = parse_ints(edge_lines[i], base + "A.txt", static_cast<int>(i + 1), 2);
        const long long u = vals[0], v = vals[1];
        if (u < 1 || v < 1 || u > total_nodes || v > total_nodes)
            throw FormatError(base + "A.txt:" + std::to_string(i + 1) + ": node id out of range");
        const int gu = graph_of[u - 1], gv = graph_of[v - 1];
        if (gu != gv)
            throw FormatError(base + "A.txt:" + std::to_string(i + 1) +
                              ": edge crosses graph boundary");
        if (u == v)
            throw FormatError(base + "A.txt:" + std::to_string(i + 1) + ": self-loop rejected");
        auto e = std::minmax(local_index[u - 1], local_index[v - 1]);
        edges[gu].insert({e.first, e.second});
    }

    Dataset ds;
    ds.name = name;
    for (int gi = 0; gi < graph_count; ++gi) {
        std::vector<int> labels(graph_size[gi], 0);
        for (int i = 0; i < total_nodes; ++i)
            if (graph_of[i] == gi) labels[local_index[i]] = node_labels[i];
        std::vector<std::pair<int, int>> e(edges[gi].begin(), edges[gi].end());
        ds.graphs.emplace_back(graph_size[gi], std::move(e), std::move(labels));
    }

    {
        std::ifstream probe(base + "graph_labels.txt");
        if (probe) {
            auto target_lines = split_lines(read_text_file(base + "graph_labels.txt"));
            if (static_cast<int>(target_lines.size()) != graph_count)
                throw FormatError(base + "graph_labels.txt: graph count mismatch");
            std::vector<double> targets(graph_count);
            for (int i = 0; i < graph_count; ++i) {
                std::istringstream ss(target_lines[i]);
                if (!(ss >> targets[i]))
                    throw FormatError(base + "graph_labels.txt:" + std::to_string(i + 1) +
                                      ": expected a number");
            }
            ds.graph_targets = std::move(targets);
        }
    }
    return ds;
}

}  // namespace wlforge
