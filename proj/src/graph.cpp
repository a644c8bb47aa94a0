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

#include "qembed/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "json.hpp"
#include "qembed/error.hpp"
#include "qembed/rng.hpp"

namespace qembed {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), adjacency_(n > 0 ? n : 0) {
    if (n < 0) throw std::invalid_argument("graph: negative node count");
    for (auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("graph: edge (" + std::to_string(u) + "," + std::to_string(v) +
                                        ") out of range for n=" + std::to_string(n));
        if (u == v) throw std::invalid_argument("graph: self-loop at node " + std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    for (auto [u, v] : edges_) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

void Graph::check_node(Node x) const {
    if (x < 0 || x >= n_) throw std::out_of_range("node " + std::to_string(x) + " out of range");
}

std::span<const Node> Graph::neighbors(Node x) const {
    check_node(x);
    return adjacency_[x];
}

bool Graph::has_edge(Node u, Node v) const {
    auto adj = neighbors(u);
    check_node(v);
    return std::binary_search(adj.begin(), adj.end(), v);
}

bool Graph::has_isolated_nodes() const {
    return std::any_of(adjacency_.begin(), adjacency_.end(), [](const auto& a) { return a.empty(); });
}

namespace {

// Inverse of the row-major enumeration of pairs u < v.
Edge pair_from_index(std::uint64_t idx, int n) {
    int u = 0;
    std::uint64_t row = static_cast<std::uint64_t>(n - 1);
    while (idx >= row) {
        idx -= row;
        ++u;
        --row;
    }
    return {u, u + 1 + static_cast<int>(idx)};
}

}  // namespace

Graph generate_random_graph(int n, double avg_degree, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("generate_random_graph: need n >= 2");
    if (!(avg_degree > 0) || !std::isfinite(avg_degree))
        throw std::invalid_argument("generate_random_graph: avg_degree must be positive");
    const auto total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const auto m = static_cast<std::uint64_t>(std::llround(n * avg_degree / 2.0));
    if (m > total)
        throw std::invalid_argument("generate_random_graph: " + std::to_string(m) +
                                    " edges exceed the complete graph (" + std::to_string(total) + ")");

    // Floyd's sampling of m distinct pair indices out of C(n,2).
    Rng rng(seed);
    std::unordered_set<std::uint64_t> chosen;
    std::vector<std::uint64_t> order;
    order.reserve(m);
    for (std::uint64_t j = total - m; j < total; ++j) {
        std::uint64_t t = uniform_below(rng, j + 1);
        if (!chosen.insert(t).second) {
            chosen.insert(j);
            t = j;
        }
        order.push_back(t);
    }
    std::vector<Edge> edges;
    edges.reserve(m);
    for (auto idx : order) edges.push_back(pair_from_index(idx, n));
    return Graph(n, std::move(edges));
}

namespace {

Graph read_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    long long max_id = -1;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        long long u, v;
        if (!(ls >> u >> v)) throw ParseError("expected two node ids", lineno);
        std::string rest;
        if (ls >> rest && rest[0] != '#') throw ParseError("trailing token '" + rest + "'", lineno);
        if (u < 0 || v < 0) throw ParseError("negative node id", lineno);
        if (u == v) throw ParseError("self-loop at node " + std::to_string(u), lineno);
        if (std::max(u, v) > 1'000'000'000) throw ParseError("node id too large", lineno);
        max_id = std::max({max_id, u, v});
        edges.emplace_back(static_cast<Node>(u), static_cast<Node>(v));
    }
    if (in.bad()) throw ParseError("read failure");
    return Graph(static_cast<int>(max_id + 1), std::move(edges));
}

Graph read_structured(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!doc.is_object() || !doc.contains("edges")) throw ParseError("graph file needs an \"edges\" array");
    std::vector<Edge> edges;
    long long max_id = -1;
    try {
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw ParseError("edge entries must be [u, v] pairs");
            auto u = e[0].get<long long>();
            auto v = e[1].get<long long>();
            if (u < 0 || v < 0) throw ParseError("negative node id");
            if (u == v) throw ParseError("self-loop at node " + std::to_string(u));
            max_id = std::max({max_id, u, v});
            edges.emplace_back(static_cast<Node>(u), static_cast<Node>(v));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
    long long n = max_id + 1;
    if (doc.contains("n")) {
        if (!doc["n"].is_number_integer()) throw ParseError("\"n\" must be an integer");
        n = doc["n"].get<long long>();
        if (n <= max_id) throw ParseError("\"n\" smaller than the largest node id + 1");
    }
    return Graph(static_cast<int>(n), std::move(edges));
}

}  // namespace

Graph read_graph(std::istream& in, GraphFormat format) {
    return format == GraphFormat::EdgeList ? read_edge_list(in) : read_structured(in);
}

void write_graph(std::ostream& out, const Graph& g, GraphFormat format) {
    if (format == GraphFormat::EdgeList) {
        if (g.has_isolated_nodes())
            throw std::invalid_argument(
                    "edge-list format cannot represent isolated nodes; use the structured (.json) format");
        for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
        return;
    }
    nlohmann::ordered_json doc;
    doc["n"] = g.num_nodes();
    auto& edges = doc["edges"] = nlohmann::ordered_json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    out << doc.dump() << '\n';
}

GraphFormat graph_format_for_path(const std::string& path) {
    return path.ends_with(".json") ? GraphFormat::Structured : GraphFormat::EdgeList;
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return read_graph(in, graph_format_for_path(path));
}

void save_graph(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    write_graph(out, g, graph_format_for_path(path));
}

}  // namespace qembed
