// Copyright 2026 The qembed Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qembed {

using Node = int;
using Edge = std::pair<Node, Node>;

/// Undirected simple graph over nodes {0, ..., n-1}.
///
/// Edges are stored once, in canonical order (u < v), sorted. Construction
/// canonicalizes and deduplicates the input; self-loops and out-of-range ids
/// are rejected. Immutable afterwards.
class Graph {
 public:
    Graph() = default;
    Graph(int n, std::vector<Edge> edges);

    int num_nodes() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    /// Sorted open neighborhood of x.
    std::span<const Node> neighbors(Node x) const;
    std::size_t degree(Node x) const { return neighbors(x).size(); }
    bool has_edge(Node u, Node v) const;
    bool has_isolated_nodes() const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

 private:
    void check_node(Node x) const;

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Node>> adjacency_;
};

/// Uniform sample from G(n, m) with m = round(n * avg_degree / 2).
Graph generate_random_graph(int n, double avg_degree, std::uint64_t seed);

enum class GraphFormat { EdgeList, Structured };

Graph read_graph(std::istream& in, GraphFormat format);
void write_graph(std::ostream& out, const Graph& g, GraphFormat format);

/// Structured for ".json" paths, edge list otherwise.
GraphFormat graph_format_for_path(const std::string& path);

Graph load_graph(const std::string& path);
void save_graph(const std::string& path, const Graph& g);

}  // namespace qembed
