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

#include "qembed/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qembed/error.hpp"

namespace qembed {

VarIndexer::VarIndexer(int n, int k, std::vector<Edge> pairs) : n_(n), k_(k), pairs_(std::move(pairs)) {
    if (n < 0) throw std::invalid_argument("VarIndexer: negative node count");
    if (k < 1) throw std::invalid_argument("VarIndexer: dimension must be positive");
    for (std::size_t j = 0; j < pairs_.size(); ++j) {
        auto [x, y] = pairs_[j];
        if (!(0 <= x && x < y && y < n))
            throw std::invalid_argument("VarIndexer: pair (" + std::to_string(x) + "," + std::to_string(y) +
                                        ") is not canonical or out of range");
        if (!position_.emplace(pairs_[j], j).second)
            throw std::invalid_argument("VarIndexer: duplicate pair (" + std::to_string(x) + "," +
                                        std::to_string(y) + ")");
    }
}

VarIndexer VarIndexer::from_similarity(const SimilarityMap& sim, int k) {
    std::vector<Edge> pairs;
    pairs.reserve(sim.nonzero.size());
    for (const auto& p : sim.nonzero) pairs.emplace_back(p.x, p.y);
    return VarIndexer(sim.n, k, std::move(pairs));
}

std::optional<std::size_t> VarIndexer::pair_position(Node x, Node y) const {
    if (x > y) std::swap(x, y);
    auto it = position_.find({x, y});
    if (it == position_.end()) return std::nullopt;
    return it->second;
}

std::string VarIndexer::name(VarId v) const {
    const auto embed = static_cast<VarId>(n_) * k_;
    if (v < embed) return "x:" + std::to_string(v / k_) + ":" + std::to_string(v % k_);
    if (v >= num_vars()) throw std::out_of_range("VarIndexer: variable " + std::to_string(v) + " out of range");
    const auto rel = v - embed;
    auto [x, y] = pairs_[rel / k_];
    return "z:" + std::to_string(x) + ":" + std::to_string(y) + ":" + std::to_string(rel % k_);
}

void Qubo::check_var(VarId i) const {
    if (i >= num_vars_)
        throw std::out_of_range("Qubo: variable " + std::to_string(i) + " >= num_vars " +
                                std::to_string(num_vars_));
}

double Qubo::linear(VarId i) const {
    auto it = linear_.find(i);
    return it == linear_.end() ? 0.0 : it->second;
}

double Qubo::quadratic(VarId i, VarId j) const {
    if (i > j) std::swap(i, j);
    auto it = quadratic_.find({i, j});
    return it == quadratic_.end() ? 0.0 : it->second;
}

void Qubo::add_linear(VarId i, double c) {
    check_var(i);
    if (c == 0.0) return;
    auto [it, inserted] = linear_.try_emplace(i, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) linear_.erase(it);
    }
}

void Qubo::add_quadratic(VarId i, VarId j, double c) {
    if (i == j) return add_linear(i, c);
    check_var(i);
    check_var(j);
    if (c == 0.0) return;
    if (i > j) std::swap(i, j);
    auto [it, inserted] = quadratic_.try_emplace({i, j}, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) quadratic_.erase(it);
    }
}

void Qubo::add(const Qubo& other, double scale) {
    if (other.num_vars_ != num_vars_) throw ShapeError("Qubo::add: num_vars mismatch");
    for (auto [i, c] : other.linear_) add_linear(i, scale * c);
    for (const auto& [key, c] : other.quadratic_) add_quadratic(key.first, key.second, scale * c);
    offset_ += scale * other.offset_;
}

double Qubo::energy(std::span<const std::uint8_t> bits) const {
    if (bits.size() != num_vars_)
        throw ShapeError("Qubo::energy: assignment has " + std::to_string(bits.size()) + " bits, expected " +
                         std::to_string(num_vars_));
    double e = 0.0;
    for (auto [i, c] : linear_)
        if (bits[i]) e += c;
    for (const auto& [key, c] : quadratic_)
        if (bits[key.first] && bits[key.second]) e += c;
    return e + offset_;
}

double BuilderParams::weight(Node x, Node y) const {
    if (pair_weights.empty()) return 1.0;
    if (x > y) std::swap(x, y);
    auto it = pair_weights.find({x, y});
    return it == pair_weights.end() ? 1.0 : it->second;
}

double BuilderParams::max_weight() const {
    double w = 1.0;
    for (const auto& [_, v] : pair_weights) w = std::max(w, v);
    return w;
}

void BuilderParams::validate() const {
    auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (mu && !ok(*mu)) throw std::invalid_argument("BuilderParams: mu must be finite and >= 0");
    if (!ok(alpha)) throw std::invalid_argument("BuilderParams: alpha must be finite and >= 0");
    if (!ok(beta)) throw std::invalid_argument("BuilderParams: beta must be finite and >= 0");
    for (const auto& [_, w] : pair_weights)
        if (!ok(w)) throw std::invalid_argument("BuilderParams: pair weights must be finite and >= 0");
}

double exactness_bound(int k, const BuilderParams& params) {
    const double kd = k;
    return params.alpha * params.max_weight() * (2.0 / kd + 1.0 / (kd * kd));
}

double default_penalty_mu(int k, const BuilderParams& params) {
    return exactness_bound(k, params) + 0.5;
}

Qubo objective_terms(const SimilarityMap& sim, const VarIndexer& idx, const BuilderParams& params) {
    Qubo q(idx.num_vars());
    const int k = idx.dim();
    const double kd = k;
    for (const auto& p : sim.nonzero) {
        auto pos = idx.pair_position(p.x, p.y);
        if (!pos) throw ShapeError("objective_terms: indexer lacks pair from the similarity map");
        const double aw = params.alpha * params.weight(p.x, p.y);
        const double lin = aw * (1.0 / (kd * kd) - 2.0 * p.score / kd);
        const double quad = aw * (2.0 / (kd * kd));
        for (int i = 0; i < k; ++i) {
            q.add_linear(idx.aux_var(*pos, i), lin);
            for (int j = i + 1; j < k; ++j) q.add_quadratic(idx.aux_var(*pos, i), idx.aux_var(*pos, j), quad);
        }
        q.add_offset(aw * p.score * p.score);
    }
    return q;
}

PenaltyComponents penalty_components(int x, int y, int z) {
    return {z - x * z, z - y * z, z - x * z - y * z + x * y};
}

Qubo penalty_terms(std::size_t pair, int dim, const VarIndexer& idx) {
    Qubo q(idx.num_vars());
    auto [x, y] = idx.pairs().at(pair);
    const VarId xv = idx.embedding_var(x, dim);
    const VarId yv = idx.embedding_var(y, dim);
    const VarId zv = idx.aux_var(pair, dim);
    q.add_linear(zv, 3.0);
    q.add_quadratic(xv, zv, -2.0);
    q.add_quadratic(yv, zv, -2.0);
    q.add_quadratic(xv, yv, 1.0);
    return q;
}

Qubo zero_pair_terms(const SimilarityMap& sim, const VarIndexer& idx, const BuilderParams& params) {
    Qubo q(idx.num_vars());
    const double c = params.beta / static_cast<double>(idx.dim());
    if (c == 0.0) return q;
    for (auto [x, y] : sim.zero_pairs)
        for (int i = 0; i < idx.dim(); ++i) q.add_quadratic(idx.embedding_var(x, i), idx.embedding_var(y, i), c);
    return q;
}

namespace {

void check_inputs(const SimilarityMap& sim, int k, const BuilderParams& params) {
    if (k < 1) throw std::invalid_argument("embedding dimension must be positive");
    params.validate();
    (void)sim;
}

void check_state(const LagrangeState& state, const VarIndexer& idx, AlmVariant variant) {
    if (state.variant != variant) throw ShapeError("LagrangeState variant does not match the builder");
    if (state.num_pairs != idx.num_pairs() || state.k != idx.dim() ||
        state.multipliers.size() != state.expected_size())
        throw ShapeError("LagrangeState shape (" + std::to_string(state.num_pairs) + " pairs, k=" +
                         std::to_string(state.k) + ") does not match the similarity map (" +
                         std::to_string(idx.num_pairs()) + " pairs, k=" + std::to_string(idx.dim()) + ")");
}

}  // namespace

BuiltQubo build_qubo_penalty(const SimilarityMap& sim, int k, const BuilderParams& params) {
    check_inputs(sim, k, params);
    auto idx = VarIndexer::from_similarity(sim, k);
    const double mu = params.mu.value_or(default_penalty_mu(k, params));
    Qubo q = objective_terms(sim, idx, params);
    for (std::size_t j = 0; j < idx.num_pairs(); ++j)
        for (int i = 0; i < k; ++i) q.add(penalty_terms(j, i, idx), mu);
    if (!sim.zero_pairs.empty()) q.add(zero_pair_terms(sim, idx, params));
    return {std::move(q), std::move(idx)};
}

BuiltQubo build_qubo_alm(const SimilarityMap& sim, int k, const LagrangeState& state,
                         const BuilderParams& params) {
    check_inputs(sim, k, params);
    auto idx = VarIndexer::from_similarity(sim, k);
    check_state(state, idx, AlmVariant::Alm);
    const double mu = state.mu;
    Qubo q = objective_terms(sim, idx, params);
    for (std::size_t j = 0; j < idx.num_pairs(); ++j) {
        auto [x, y] = idx.pairs()[j];
        for (int i = 0; i < k; ++i) {
            const double l1 = state.lambda(j, 0, i);
            const double l2 = state.lambda(j, 1, i);
            const double l3 = state.lambda(j, 2, i);
            const VarId xv = idx.embedding_var(x, i);
            const VarId yv = idx.embedding_var(y, i);
            const VarId zv = idx.aux_var(j, i);
            q.add_linear(xv, -l1 + l3);
            q.add_linear(yv, -l2 + l3);
            q.add_linear(zv, l1 + l2 - l3 + 1.5 * mu);
            q.add_quadratic(xv, yv, 0.5 * mu);
            q.add_quadratic(xv, zv, -mu);
            q.add_quadratic(yv, zv, -mu);
            q.add_offset(-l3);
        }
    }
    if (!sim.zero_pairs.empty()) q.add(zero_pair_terms(sim, idx, params));
    return {std::move(q), std::move(idx)};
}

BuiltQubo build_qubo_almq(const SimilarityMap& sim, int k, const LagrangeState& state,
                          const BuilderParams& params) {
    check_inputs(sim, k, params);
    auto idx = VarIndexer::from_similarity(sim, k);
    check_state(state, idx, AlmVariant::Almq);
    const double mu = state.mu;
    Qubo q = objective_terms(sim, idx, params);
    for (std::size_t j = 0; j < idx.num_pairs(); ++j) {
        auto [x, y] = idx.pairs()[j];
        for (int i = 0; i < k; ++i) {
            const double lam = state.lambda(j, i);
            const VarId xv = idx.embedding_var(x, i);
            const VarId yv = idx.embedding_var(y, i);
            const VarId zv = idx.aux_var(j, i);
            q.add_linear(zv, lam + 1.5 * mu);
            q.add_quadratic(xv, yv, -lam + 0.5 * mu);
            q.add_quadratic(xv, zv, -mu);
            q.add_quadratic(yv, zv, -mu);
        }
    }
    if (!sim.zero_pairs.empty()) q.add(zero_pair_terms(sim, idx, params));
    return {std::move(q), std::move(idx)};
}

QuboStats qubo_stats(const Qubo& q) {
    return {q.num_vars(), q.linear().size(), q.quadratic().size()};
}

}  // namespace qembed
