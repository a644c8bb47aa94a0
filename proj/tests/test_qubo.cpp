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


#include <limits>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "qembed/alm.hpp"
#include "qembed/error.hpp"
#include "qembed/qubo.hpp"

using namespace qembed;
using Catch::Matchers::WithinAbs;

namespace {

SimilarityMap single_pair(double s, SimilarityKind kind = SimilarityKind::Jac) {
    SimilarityMap sim;
    sim.kind = kind;
    sim.n = 2;
    sim.nonzero = {{0, 1, s}};
    return sim;
}

std::vector<std::uint8_t> bits_of(std::uint64_t m, std::size_t n) {
    std::vector<std::uint8_t> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = m >> i & 1;
    return b;
}

}  // namespace

TEST_CASE("variable layout") {
    VarIndexer idx(3, 2, {{0, 1}, {1, 2}});
    CHECK(idx.num_vars() == 3 * 2 + 2 * 2);
    CHECK(idx.embedding_var(2, 1) == 5);
    CHECK(idx.aux_var(1, 0) == 8);
    CHECK(idx.name(5) == "x:2:1");
    CHECK(idx.name(8) == "z:1:2:0");
    CHECK(idx.pair_position(2, 1) == 1u);
    CHECK_FALSE(idx.pair_position(0, 2).has_value());
    CHECK_THROWS(idx.name(10));
    CHECK_THROWS(VarIndexer(3, 0, {}));
    CHECK_THROWS(VarIndexer(3, 1, {{0, 1}, {1, 0}}));
}

TEST_CASE("qubo stores no zeros and folds the diagonal") {
    Qubo q(3);
    q.add_linear(0, 1.5);
    q.add_linear(0, -1.5);
    CHECK(q.linear().empty());
    q.add_quadratic(2, 1, 2.0);
    CHECK(q.quadratic(1, 2) == 2.0);
    CHECK(q.quadratic().begin()->first == Qubo::QuadKey{1, 2});
    q.add_quadratic(1, 2, -2.0);
    CHECK(q.quadratic().empty());
    q.add_quadratic(1, 1, 4.0);
    CHECK(q.linear(1) == 4.0);
    CHECK_THROWS(q.add_linear(3, 1.0));
    CHECK_THROWS_AS(q.energy(std::vector<std::uint8_t>{1, 0}), ShapeError);
}

TEST_CASE("objective fragment examples") {
    auto sim = single_pair(1.0);
    auto idx = VarIndexer::from_similarity(sim, 1);
    auto q = objective_terms(sim, idx, {});
    CHECK(q.linear(2) == -1.0);
    CHECK(q.offset() == 1.0);
    CHECK(q.quadratic().empty());

    auto idx2 = VarIndexer::from_similarity(sim, 2);
    auto q2 = objective_terms(sim, idx2, {});
    CHECK(q2.linear(idx2.aux_var(0, 0)) == -0.75);
    CHECK(q2.linear(idx2.aux_var(0, 1)) == -0.75);
    CHECK(q2.quadratic(idx2.aux_var(0, 0), idx2.aux_var(0, 1)) == 0.5);
    CHECK(oracle::min_energy(q2) == 0.0);

    SimilarityMap empty;
    empty.n = 3;
    auto q3 = objective_terms(empty, VarIndexer::from_similarity(empty, 2), {});
    CHECK(q3.linear().empty());
    CHECK(q3.offset() == 0.0);
}

TEST_CASE("penalty fragment matches the value table") {
    VarIndexer idx(2, 1, {{0, 1}});
    auto p = penalty_terms(0, 0, idx);
    for (int m = 0; m < 8; ++m) {
        const int x = m & 1, y = m >> 1 & 1, z = m >> 2 & 1;
        const double e = p.energy(bits_of(m, 3));
        CHECK(e == penalty_components(x, y, z).total());
        if (z == x * y) CHECK(e == 0.0);
        else CHECK(e >= 1.0);
    }
    CHECK(p.energy(std::vector<std::uint8_t>{0, 0, 1}) == 3.0);
    CHECK(p.energy(std::vector<std::uint8_t>{1, 1, 0}) == 1.0);
}

TEST_CASE("single edge penalty build") {
    BuilderParams params;
    params.mu = 2.0;
    auto built = build_qubo_penalty(single_pair(1.0), 1, params);
    const auto& q = built.qubo;
    CHECK(q.linear(2) == 5.0);
    CHECK(q.quadratic(0, 2) == -4.0);
    CHECK(q.quadratic(1, 2) == -4.0);
    CHECK(q.quadratic(0, 1) == 2.0);
    CHECK(q.offset() == 1.0);
    CHECK(q.energy(std::vector<std::uint8_t>{1, 1, 1}) == 0.0);
    CHECK(qubo_stats(q) == QuboStats{3, 1, 3});

    params.mu = 0.0;
    auto zero = build_qubo_penalty(single_pair(1.0), 1, params);
    CHECK(zero.qubo == objective_terms(single_pair(1.0), zero.indexer, params));
}

TEST_CASE("zero pair fragment") {
    SimilarityMap sim;
    sim.kind = SimilarityKind::Jac0;
    sim.n = 2;
    sim.zero_pairs = {{0, 1}};
    auto idx = VarIndexer::from_similarity(sim, 2);
    auto q = zero_pair_terms(sim, idx, {});
    CHECK(q.quadratic().size() == 2);
    CHECK(q.quadratic(0, 2) == 0.5);
    CHECK(q.quadratic(1, 3) == 0.5);
    BuilderParams off;
    off.beta = 0.0;
    CHECK(zero_pair_terms(sim, idx, off).quadratic().empty());
}

TEST_CASE("feasible assignments reproduce the embedding objective") {
    Rng rng(11);
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + static_cast<int>(uniform_below(rng, 4));
        const int k = 1 + static_cast<int>(uniform_below(rng, 3));
        auto g = oracle::random_graph(rng, n, 0.6);
        auto sim = build_similarity(g, static_cast<SimilarityKind>(uniform_below(rng, 3)));
        auto built = build_qubo_penalty(sim, k);
        const auto& idx = built.indexer;
        for (int s = 0; s < 10; ++s) {
            Embedding emb(n, k);
            for (auto& b : emb.bits) b = uniform_below(rng, 2);
            std::vector<std::uint8_t> bits(idx.num_vars());
            std::copy(emb.bits.begin(), emb.bits.end(), bits.begin());
            for (std::size_t j = 0; j < idx.num_pairs(); ++j) {
                auto [x, y] = idx.pairs()[j];
                for (int i = 0; i < k; ++i) bits[idx.aux_var(j, i)] = emb.at(x, i) & emb.at(y, i);
            }
            CHECK_THAT(built.qubo.energy(bits), WithinAbs(oracle::objective(emb, sim), 1e-12));
        }
    }
}

TEST_CASE("default penalty weight makes the model exact") {
    Rng rng(21);
    for (int t = 0; t < 20; ++t) {
        auto built = oracle::random_penalty_qubo(rng, 10, 14);
        const auto& idx = built.indexer;
        const double ground = oracle::min_energy(built.qubo);
        // Every ground state is feasible.
        const std::size_t n = idx.num_vars();
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
            auto bits = bits_of(m, n);
            if (std::abs(built.qubo.energy(bits) - ground) > 1e-9) continue;
            for (std::size_t j = 0; j < idx.num_pairs(); ++j) {
                auto [x, y] = idx.pairs()[j];
                for (int i = 0; i < idx.dim(); ++i)
                    CHECK(bits[idx.aux_var(j, i)] == (bits[idx.embedding_var(x, i)] & bits[idx.embedding_var(y, i)]));
            }
        }
    }
}

TEST_CASE("jac and jac0 differ only in zero-pair couplings") {
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        auto g = generate_random_graph(12, 3.0, rng());
        const int k = 1 + static_cast<int>(uniform_below(rng, 4));
        auto a = build_qubo_penalty(build_similarity(g, SimilarityKind::Jac), k);
        auto sim0 = build_similarity(g, SimilarityKind::Jac0);
        auto b = build_qubo_penalty(sim0, k);
        CHECK(a.indexer == b.indexer);
        CHECK(a.qubo.linear() == b.qubo.linear());
        auto sa = qubo_stats(a.qubo), sb = qubo_stats(b.qubo);
        CHECK(sb.num_quadratic - sa.num_quadratic == k * sim0.zero_pairs.size());
    }
}

TEST_CASE("alm builders") {
    auto sim = single_pair(1.0);
    auto state = init_state(sim, 1, AlmVariant::Alm, 2.0);
    state.lambda(0, 0, 0) = 0.5;
    state.lambda(0, 1, 0) = 0.25;
    state.lambda(0, 2, 0) = 1.0;
    auto built = build_qubo_alm(sim, 1, state);
    const auto& q = built.qubo;
    // x: -l1 + l3, y: -l2 + l3, z: l1 + l2 - l3 + 1.5 mu plus the objective's -1.
    CHECK(q.linear(0) == 0.5);
    CHECK(q.linear(1) == 0.75);
    CHECK(q.linear(2) == 0.5 + 0.25 - 1.0 + 3.0 - 1.0);
    CHECK(q.quadratic(0, 1) == 1.0);
    CHECK(q.quadratic(0, 2) == -2.0);
    CHECK(q.quadratic(1, 2) == -2.0);
    CHECK(q.offset() == 1.0 - 1.0);

    auto qs = init_state(sim, 1, AlmVariant::Almq, 2.0);
    qs.lambda(0, 0) = 0.5;
    auto bq = build_qubo_almq(sim, 1, qs).qubo;
    CHECK(bq.linear(2) == 0.5 + 3.0 - 1.0);
    CHECK(bq.quadratic(0, 1) == -0.5 + 1.0);
    CHECK(bq.quadratic(0, 2) == -2.0);

    CHECK_THROWS_AS(build_qubo_alm(sim, 1, qs), ShapeError);
    CHECK_THROWS_AS(build_qubo_alm(sim, 2, state), ShapeError);
}

TEST_CASE("alm model with zero multipliers equals the penalty model at half weight") {
    Rng rng(8);
    for (int t = 0; t < 10; ++t) {
        auto g = generate_random_graph(8, 3.0, rng());
        auto sim = build_similarity(g, SimilarityKind::Jac0);
        const int k = 2;
        const double mu = 1.0 + uniform01(rng);
        BuilderParams half;
        half.mu = mu / 2.0;
        auto penalty = build_qubo_penalty(sim, k, half).qubo;
        auto alm = build_qubo_alm(sim, k, init_state(sim, k, AlmVariant::Alm, mu)).qubo;
        auto almq = build_qubo_almq(sim, k, init_state(sim, k, AlmVariant::Almq, mu)).qubo;
        for (auto* q : {&alm, &almq}) {
            REQUIRE(q->linear().size() == penalty.linear().size());
            for (auto [i, c] : penalty.linear()) CHECK_THAT(q->linear(i), WithinAbs(c, 1e-12));
            for (auto [key, c] : penalty.quadratic())
                CHECK_THAT(q->quadratic(key.first, key.second), WithinAbs(c, 1e-12));
        }
    }
}

TEST_CASE("builder parameter validation") {
    BuilderParams p;
    p.alpha = -1.0;
    CHECK_THROWS(build_qubo_penalty(single_pair(0.5), 1, p));
    BuilderParams w;
    w.pair_weights[{0, 1}] = std::numeric_limits<double>::infinity();
    CHECK_THROWS(build_qubo_penalty(single_pair(0.5), 1, w));
    CHECK_THROWS(build_qubo_penalty(single_pair(0.5), 0));
    CHECK(default_penalty_mu(2) == 2.0 / 2 + 1.0 / 4 + 0.5);
}
