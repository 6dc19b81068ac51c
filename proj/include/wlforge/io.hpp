#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wlforge/graph.hpp"

namespace wlforge {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Dataset {
    std::vector<Graph> graphs;
    std::optional<std::vector<double>> graph_targets;
    std::string name;
};

// Edge-list format: first line "n m L" (nodes, edges, label-alphabet size),
// then n lines "v label", then m lines "u v"; 0-indexed. Self-loops and
// duplicate edges are format errors.
Graph edge_list_from_string(const std::string& text, const std::string& origin);
std::string edge_list_to_string(const Graph& g);

Graph load_edge_list(const std::string& path);
void write_edge_list(const std::string& path, const Graph& g);

// TUDataset-style directory: NAME_A.txt (comma-separated 1-indexed edge
// pairs, both directions), NAME_graph_indicator.txt, optional
// NAME_node_labels.txt and NAME_graph_labels.txt. Nodes are re-indexed per
// graph; undirected edges deduplicated; missing node labels become 0.
Dataset load_tudataset(const std::string& dir, const std::string& name);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace wlforge
