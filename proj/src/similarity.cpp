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

#include "qembed/similarity.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

#include "json.hpp"

namespace qembed {

std::string_view to_string(SimilarityKind kind) {
    switch (kind) {
        case SimilarityKind::Jac: return "jac";
        case SimilarityKind::Jac0: return "jac0";
        case SimilarityKind::Adjcy: return "adjcy";
    }
    return "?";
}

std::optional<SimilarityKind> parse_similarity_kind(std::string_view name) {
    if (name == "jac") return SimilarityKind::Jac;
    if (name == "jac0") return SimilarityKind::Jac0;
    if (name == "adjcy") return SimilarityKind::Adjcy;
    return std::nullopt;
}

double SimilarityMap::score(Node x, Node y) const {
    if (x > y) std::swap(x, y);
    auto it = std::lower_bound(nonzero.begin(), nonzero.end(), Edge{x, y},
                               [](const ScoredPair& p, const Edge& e) { return Edge{p.x, p.y} < e; });
    return it != nonzero.end() && it->x == x && it->y == y ? it->score : 0.0;
}

std::vector<Node> closed_neighborhood(const Graph& g, Node x) {
    auto adj = g.neighbors(x);
    std::vector<Node> out(adj.begin(), adj.end());
    out.insert(std::upper_bound(out.begin(), out.end(), x), x);
    return out;
}

namespace {

// |A ∩ B| and |A ∪ B| of two sorted sets.
std::pair<std::size_t, std::size_t> overlap(const std::vector<Node>& a, const std::vector<Node>& b) {
    std::size_t common = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return {common, a.size() + b.size() - common};
}

}  // namespace

double jaccard(const Graph& g, Node x, Node y) {
    if (x == y) throw std::invalid_argument("jaccard: x and y must differ");
    auto [common, total] = overlap(closed_neighborhood(g, x), closed_neighborhood(g, y));
    return static_cast<double>(common) / static_cast<double>(total);
}

SimilarityMap build_similarity(const Graph& g, SimilarityKind kind) {
    const int n = g.num_nodes();
    SimilarityMap sim;
    sim.kind = kind;
    sim.n = n;

    std::vector<std::vector<Node>> hood(n);
    for (Node x = 0; x < n; ++x) hood[x] = closed_neighborhood(g, x);

    // Zero/nonzero is decided from the integer intersection size.
    auto add_pair = [&](Node x, Node y) {
        auto [common, total] = overlap(hood[x], hood[y]);
        if (common > 0)
            sim.nonzero.push_back({x, y, static_cast<double>(common) / static_cast<double>(total)});
        else if (kind != SimilarityKind::Jac)
            sim.zero_pairs.emplace_back(x, y);
    };

    if (kind == SimilarityKind::Adjcy) {
        for (Node x = 0; x < n; ++x)
            for (Node y = x + 1; y < n; ++y) {
                if (g.has_edge(x, y))
                    add_pair(x, y);
                else
                    sim.zero_pairs.emplace_back(x, y);
            }
    } else if (kind == SimilarityKind::Jac0) {
        for (Node x = 0; x < n; ++x)
            for (Node y = x + 1; y < n; ++y) add_pair(x, y);
    } else {
        // Only pairs within distance two can share a closed-neighborhood member.
        std::vector<Node> reach;
        for (Node x = 0; x < n; ++x) {
            reach.clear();
            for (Node u : hood[x])
                for (Node w : hood[u])
                    if (w > x) reach.push_back(w);
            std::sort(reach.begin(), reach.end());
            reach.erase(std::unique(reach.begin(), reach.end()), reach.end());
            for (Node y : reach) add_pair(x, y);
        }
    }
    return sim;
}

void write_similarity(std::ostream& out, const SimilarityMap& sim) {
    nlohmann::ordered_json doc;
    doc["kind"] = to_string(sim.kind);
    doc["n"] = sim.n;
    auto& pairs = doc["pairs"] = nlohmann::ordered_json::array();
    for (const auto& p : sim.nonzero) pairs.push_back({p.x, p.y, p.score});
    auto& zeros = doc["zero_pairs"] = nlohmann::ordered_json::array();
    for (auto [x, y] : sim.zero_pairs) zeros.push_back({x, y});
    out << doc.dump() << '\n';
}

}  // namespace qembed
