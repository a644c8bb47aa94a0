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

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qembed/graph.hpp"
#include "qembed/lagrange.hpp"
#include "qembed/similarity.hpp"

namespace qembed {

using VarId = std::size_t;
using Assignment = std::vector<std::uint8_t>;

/// Variable layout of a node-embedding QUBO.
///
/// Embedding bit (x, i) lives at x*k + i. The auxiliary product variable of
/// the j-th pair in `pairs()` and dimension i lives at n*k + j*k + i.
class VarIndexer {
 public:
    VarIndexer() = default;
    VarIndexer(int n, int k, std::vector<Edge> pairs);

    static VarIndexer from_similarity(const SimilarityMap& sim, int k);

    int num_nodes() const noexcept { return n_; }
    int dim() const noexcept { return k_; }
    std::size_t num_pairs() const noexcept { return pairs_.size(); }
    std::size_t num_vars() const noexcept {
        return static_cast<std::size_t>(n_) * k_ + pairs_.size() * k_;
    }
    const std::vector<Edge>& pairs() const noexcept { return pairs_; }

    VarId embedding_var(Node x, int i) const noexcept { return static_cast<VarId>(x) * k_ + i; }
    VarId aux_var(std::size_t pair, int i) const noexcept {
        return static_cast<VarId>(n_) * k_ + pair * k_ + i;
    }
    std::optional<std::size_t> pair_position(Node x, Node y) const;

    /// "x:{node}:{dim}" or "z:{x}:{y}:{dim}".
    std::string name(VarId v) const;

    friend bool operator==(const VarIndexer& a, const VarIndexer& b) {
        return a.n_ == b.n_ && a.k_ == b.k_ && a.pairs_ == b.pairs_;
    }

 private:
    int n_ = 0;
    int k_ = 1;
    std::vector<Edge> pairs_;
    std::map<Edge, std::size_t> position_;
};

/// Sparse quadratic model over binary variables.
///
/// Quadratic keys are canonical (i < j); squares are folded into the linear
/// part. A coefficient that becomes exactly zero is erased, so stored maps
/// never hold zeros.
class Qubo {
 public:
    using QuadKey = std::pair<VarId, VarId>;

    Qubo() = default;
    explicit Qubo(std::size_t num_vars) : num_vars_(num_vars) {}

    std::size_t num_vars() const noexcept { return num_vars_; }
    const std::map<VarId, double>& linear() const noexcept { return linear_; }
    const std::map<QuadKey, double>& quadratic() const noexcept { return quadratic_; }
    double offset() const noexcept { return offset_; }

    double linear(VarId i) const;
    double quadratic(VarId i, VarId j) const;

    void add_linear(VarId i, double c);
    void add_quadratic(VarId i, VarId j, double c);
    void add_offset(double c) { offset_ += c; }
    /// Adds `scale * other` term by term; `other` must have the same num_vars.
    void add(const Qubo& other, double scale = 1.0);

    double energy(std::span<const std::uint8_t> bits) const;

    friend bool operator==(const Qubo&, const Qubo&) = default;

 private:
    void check_var(VarId i) const;

    std::size_t num_vars_ = 0;
    std::map<VarId, double> linear_;
    std::map<QuadKey, double> quadratic_;
    double offset_ = 0.0;
};

struct BuilderParams {
    /// Penalty weight. Unset means default_penalty_mu(k, params) for penalty
    /// builds; ALM builds take their weight from the LagrangeState.
    std::optional<double> mu;
    double alpha = 1.0;
    double beta = 1.0;
    /// Per-pair weights w_xy for the nonzero domain; missing pairs weigh 1.
    std::map<Edge, double> pair_weights;

    double weight(Node x, Node y) const;
    double max_weight() const;
    void validate() const;
};

/// Largest change one auxiliary flip can make to the weighted objective.
double exactness_bound(int k, const BuilderParams& params);

/// exactness_bound + 0.5; equals 2/k + 1/k^2 + 0.5 under unit weights.
double default_penalty_mu(int k, const BuilderParams& params = {});

struct BuiltQubo {
    Qubo qubo;
    VarIndexer indexer;
};

/// Sum over the nonzero domain of alpha * w * (Z_xy - s_xy)^2 with Z_xy the
/// mean of the pair's auxiliary bits.
Qubo objective_terms(const SimilarityMap& sim, const VarIndexer& idx, const BuilderParams& params);

/// P1 = z - xz, P2 = z - yz, P3 = z - xz - yz + xy evaluated at one triple.
struct PenaltyComponents {
    int p1 = 0;
    int p2 = 0;
    int p3 = 0;
    int total() const noexcept { return p1 + p2 + p3; }
};

PenaltyComponents penalty_components(int x, int y, int z);

/// P = 3z - 2xz - 2yz + xy for one (pair, dim): zero when z = x*y, >= 1 otherwise.
Qubo penalty_terms(std::size_t pair, int dim, const VarIndexer& idx);

/// (beta / k) * x_i * y_i for every zero-domain pair and dimension.
Qubo zero_pair_terms(const SimilarityMap& sim, const VarIndexer& idx, const BuilderParams& params);

BuiltQubo build_qubo_penalty(const SimilarityMap& sim, int k, const BuilderParams& params = {});
BuiltQubo build_qubo_alm(const SimilarityMap& sim, int k, const LagrangeState& state,
                         const BuilderParams& params = {});
BuiltQubo build_qubo_almq(const SimilarityMap& sim, int k, const LagrangeState& state,
                          const BuilderParams& params = {});

struct QuboStats {
    std::size_t num_vars = 0;
    std::size_t num_linear = 0;
    std::size_t num_quadratic = 0;

    friend bool operator==(const QuboStats&, const QuboStats&) = default;
};

QuboStats qubo_stats(const Qubo& q);

/// Contents of a QUBO file. The indexer is present when the variable names
/// follow the embedding layout.
struct QuboFile {
    Qubo qubo;
    std::optional<VarIndexer> indexer;
};

/// {num_vars, names, linear: {index: coeff}, quadratic: [[i, j, coeff]], offset}.
/// Keys are written in ascending order and coefficients round-trip exactly.
void export_qubo(std::ostream& out, const Qubo& q, const VarIndexer* idx = nullptr);
QuboFile import_qubo(std::istream& in);

void save_qubo(const std::string& path, const Qubo& q, const VarIndexer* idx = nullptr);
QuboFile load_qubo(const std::string& path);

}  // namespace qembed
