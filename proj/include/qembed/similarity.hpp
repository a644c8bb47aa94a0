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

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qembed/graph.hpp"

namespace qembed {

enum class SimilarityKind {
    Jac,    ///< Jaccard scores on pairs within distance two; zero pairs ignored.
    Jac0,   ///< As Jac, plus every zero-score pair in the zero domain.
    Adjcy,  ///< Jaccard restricted to edges; every non-edge in the zero domain.
};

std::string_view to_string(SimilarityKind kind);
std::optional<SimilarityKind> parse_similarity_kind(std::string_view name);

struct ScoredPair {
    Node x;
    Node y;
    double score;

    friend bool operator==(const ScoredPair&, const ScoredPair&) = default;
};

/// Node-pair similarities split into the nonzero domain (scores in (0, 1])
/// and the zero domain. Both lists hold canonical pairs x < y in ascending
/// order and are disjoint.
struct SimilarityMap {
    SimilarityKind kind = SimilarityKind::Jac;
    int n = 0;
    std::vector<ScoredPair> nonzero;
    std::vector<Edge> zero_pairs;

    /// Score of a canonical or reversed pair; 0 when absent.
    double score(Node x, Node y) const;
};

/// N(x) together with x, sorted.
std::vector<Node> closed_neighborhood(const Graph& g, Node x);

/// Jaccard index of the closed neighborhoods of x and y.
double jaccard(const Graph& g, Node x, Node y);

SimilarityMap build_similarity(const Graph& g, SimilarityKind kind);

/// {kind, n, pairs: [[x, y, s], ...], zero_pairs: [[x, y], ...]}
void write_similarity(std::ostream& out, const SimilarityMap& sim);

}  // namespace qembed
