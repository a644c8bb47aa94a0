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
#include <ostream>
#include <span>
#include <vector>

#include "qembed/qubo.hpp"
#include "qembed/similarity.hpp"
#include "qembed/solver.hpp"

namespace qembed {

/// One k-bit vector per node, stored row-major (node x, dim i at x*k + i,
/// which is also its QUBO variable index).
struct Embedding {
    int n = 0;
    int k = 1;
    std::vector<std::uint8_t> bits;

    Embedding() = default;
    Embedding(int n, int k) : n(n), k(k), bits(static_cast<std::size_t>(n) * k, 0) {}

    std::uint8_t at(Node x, int i) const { return bits[static_cast<std::size_t>(x) * k + i]; }
    std::span<const std::uint8_t> vector(Node x) const {
        return {bits.data() + static_cast<std::size_t>(x) * k, static_cast<std::size_t>(k)};
    }
    int dot(Node x, Node y) const;
    /// dot(x, y) / k
    double scaled_dot(Node x, Node y) const { return static_cast<double>(dot(x, y)) / k; }

    friend bool operator==(const Embedding&, const Embedding&) = default;
};

struct ErrorMetrics {
    double mse_nonzero = 0.0;  ///< over the nonzero domain
    double mse_all = 0.0;      ///< over every distinct node pair
    double mae_all = 0.0;
};

struct EmbeddingResult {
    Embedding vectors;
    std::size_t violations = 0;  ///< auxiliary bits with z != x*y
    double objective = 0.0;
    ErrorMetrics metrics;

    bool feasible() const noexcept { return violations == 0; }
};

/// Embedding vectors and violation count only; objective and metrics are left at 0.
EmbeddingResult decode(std::span<const std::uint8_t> bits, const VarIndexer& idx);

/// Decodes and fills objective and metrics from the decoded vectors.
EmbeddingResult evaluate(std::span<const std::uint8_t> bits, const VarIndexer& idx, const SimilarityMap& sim,
                         const BuilderParams& params = {});

/// alpha * sum_D w (v(x).v(y)/k - s)^2, plus beta * (1/k) sum_D0 v(x).v(y)
/// when include_zeros. This is the quantity the builders encode.
double embedding_objective(const Embedding& emb, const SimilarityMap& sim, const BuilderParams& params = {},
                           bool include_zeros = true);

struct PairError {
    double mse = 0.0;
    double mae = 0.0;
    std::size_t pairs = 0;
};

/// Residuals v(x).v(y)/k - s over the nonzero domain, or over every distinct
/// pair (absent pairs scoring 0) when include_zeros.
PairError embedding_error(const Embedding& emb, const SimilarityMap& sim, bool include_zeros);

ErrorMetrics error_metrics(const Embedding& emb, const SimilarityMap& sim);

inline constexpr int kMaxBruteForceBits = 24;

struct BruteForceResult {
    Embedding vectors;
    double objective = 0.0;
};

/// Minimizes embedding_objective over all 2^(n*k) embeddings. Returns the
/// first optimum in enumeration order.
BruteForceResult brute_force_embedding(const SimilarityMap& sim, int k, bool include_zeros = true,
                                       const BuilderParams& params = {});

struct Selection {
    const Sample* sample = nullptr;
    EmbeddingResult result;
};

/// Among the samples tied at the lowest energy (1e-9 relative), the one with
/// the fewest violations, then the lowest objective.
Selection select_best(const SampleSet& set, const VarIndexer& idx, const SimilarityMap& sim,
                      const BuilderParams& params = {});

/// {k, vectors: {node: "bits"}}
void write_embedding(std::ostream& out, const Embedding& emb);

}  // namespace qembed
