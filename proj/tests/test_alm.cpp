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


#include <sstream>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "qembed/alm.hpp"
#include "qembed/error.hpp"

using namespace qembed;

namespace {

SimilarityMap path_jac() { return build_similarity(Graph(3, {{0, 1}, {1, 2}}), SimilarityKind::Jac); }

Sampler exact_sampler() {
    return [](const Qubo& q, const VarIndexer&) { return solve_exact(q); };
}

}  // namespace

TEST_CASE("constraint values for every triple") {
    for (int m = 0; m < 8; ++m) {
        const int x = m & 1, y = m >> 1 & 1, z = m >> 2 & 1;
        auto c = constraint_values(x, y, z);
        const bool linear_ok = c.c1 <= 0 && c.c2 <= 0 && c.c3 <= 0;
        CHECK(linear_ok == (z == x * y));
        CHECK((c.e == 0) == (z == x * y));
    }
    CHECK(constraint_values(1, 1, 0) == ConstraintValues{-1, -1, 1, -1});
}

TEST_CASE("state initialization") {
    auto sim = path_jac();
    auto s = init_state(sim, 2, AlmVariant::Alm);
    CHECK(s.multipliers.size() == sim.nonzero.size() * 2 * 3);
    CHECK(s.mu == 0.5);
    CHECK(s.rho == 1.1);
    auto q = init_state(sim, 2, AlmVariant::Almq, 1.0, 2.0);
    CHECK(q.multipliers.size() == sim.nonzero.size() * 2);
    CHECK_THROWS(init_state(sim, 2, AlmVariant::Alm, 0.0));
    CHECK_THROWS(init_state(sim, 2, AlmVariant::Alm, 1.0, 1.0));
}

TEST_CASE("multiplier updates") {
    SimilarityMap sim;
    sim.n = 2;
    sim.nonzero = {{0, 1, 0.5}};
    VarIndexer idx = VarIndexer::from_similarity(sim, 1);
    const std::vector<std::uint8_t> violating{1, 1, 0};  // z = 0 but x*y = 1

    auto s = update_multipliers(init_state(sim, 1, AlmVariant::Alm, 2.0, 1.5), violating, idx);
    CHECK(s.lambda(0, 0, 0) == 0.0);
    CHECK(s.lambda(0, 1, 0) == 0.0);
    CHECK(s.lambda(0, 2, 0) == 2.0);
    CHECK(s.mu == 3.0);
    CHECK(s.iteration == 1);

    auto q = update_multipliers(init_state(sim, 1, AlmVariant::Almq, 2.0, 1.5), violating, idx);
    CHECK(q.lambda(0, 0) == -2.0);
    auto q2 = update_multipliers(q, std::vector<std::uint8_t>{0, 0, 1}, idx);
    CHECK(q2.lambda(0, 0) == -2.0 + 3.0);
    CHECK(q2.mu == 4.5);

    auto feasible = update_multipliers(init_state(sim, 1, AlmVariant::Alm), std::vector<std::uint8_t>{1, 1, 1}, idx);
    for (double l : feasible.multipliers) CHECK(l == 0.0);

    CHECK_THROWS_AS(update_multipliers(init_state(sim, 2, AlmVariant::Alm), violating, idx), ShapeError);
}

TEST_CASE("alm stops at the first feasible iterate") {
    auto sim = path_jac();
    for (auto variant : {AlmVariant::Alm, AlmVariant::Almq}) {
        auto out = alm_solve(sim, 2, variant, exact_sampler());
        REQUIRE_FALSE(out.history.empty());
        CHECK(out.result.feasible());
        for (std::size_t t = 0; t + 1 < out.history.size(); ++t) CHECK(out.history[t].violations > 0);
        CHECK(out.history.back().violations == 0);
        CHECK(out.final_state.iteration == static_cast<int>(out.history.size()) - 1);
        CHECK(out.stats.num_vars == VarIndexer::from_similarity(sim, 2).num_vars());
    }
}

TEST_CASE("alm respects the iteration cap") {
    auto sim = path_jac();
    // A sampler that always answers with an infeasible assignment.
    Sampler stubborn = [](const Qubo& q, const VarIndexer& idx) {
        Assignment bits(q.num_vars(), 0);
        bits[idx.aux_var(0, 0)] = 1;
        return SampleSet::from_reads(q, {bits}, {});
    };
    AlmParams p;
    p.max_iters = 7;
    auto out = alm_solve(sim, 1, AlmVariant::Alm, stubborn, p);
    CHECK(out.history.size() == 7);
    CHECK_FALSE(out.result.feasible());
    CHECK(out.final_state.iteration == 7);
    CHECK(out.history[3].mu == Catch::Approx(0.5 * std::pow(1.1, 3)));
    p.max_iters = 0;
    CHECK_THROWS(alm_solve(sim, 1, AlmVariant::Alm, stubborn, p));
}

TEST_CASE("alm finds optimal embeddings on small graphs") {
    Rng rng(17);
    int optimal = 0, total = 0;
    for (int t = 0; t < 8; ++t) {
        auto g = oracle::random_graph(rng, 4, 0.6);
        auto sim = build_similarity(g, SimilarityKind::Jac);
        const double best = brute_force_embedding(sim, 2).objective;
        for (auto variant : {AlmVariant::Alm, AlmVariant::Almq}) {
            auto out = alm_solve(sim, 2, variant, exact_sampler());
            CHECK(out.result.feasible());
            optimal += std::abs(out.result.objective - best) < 1e-9;
            ++total;
        }
    }
    CHECK(optimal >= total - 2);
}

TEST_CASE("history export") {
    std::ostringstream out;
    write_history_csv(out, {{0, -1.5, 2, 0.5, 0.25}, {1, 0.125, 0, 0.55, 0.125}});
    CHECK(out.str() == "iteration,energy,violations,mu,objective\n0,-1.5,2,0.5,0.25\n1,0.125,0,0.55000000000000004,0.125\n");
}
