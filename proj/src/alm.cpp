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

#include "qembed/alm.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>

#include "qembed/error.hpp"

namespace qembed {

LagrangeState init_state(const SimilarityMap& sim, int k, AlmVariant variant, double mu0, double rho) {
    if (!(mu0 > 0) || !std::isfinite(mu0)) throw std::invalid_argument("init_state: mu0 must be positive");
    if (!(rho > 1) || !std::isfinite(rho)) throw std::invalid_argument("init_state: rho must exceed 1");
    if (k < 1) throw std::invalid_argument("init_state: k must be positive");
    LagrangeState s;
    s.variant = variant;
    s.num_pairs = sim.nonzero.size();
    s.k = k;
    s.multipliers.assign(s.expected_size(), 0.0);
    s.mu = mu0;
    s.rho = rho;
    s.iteration = 0;
    return s;
}

ConstraintValues constraint_values(int x, int y, int z) {
    return {z - x, z - y, x + y - z - 1, z - x * y};
}

std::vector<ConstraintValues> constraint_values(std::span<const std::uint8_t> bits, const VarIndexer& idx) {
    if (bits.size() != idx.num_vars())
        throw ShapeError("constraint_values: assignment has " + std::to_string(bits.size()) +
                         " bits, indexer expects " + std::to_string(idx.num_vars()));
    std::vector<ConstraintValues> out;
    out.reserve(idx.num_pairs() * idx.dim());
    for (std::size_t j = 0; j < idx.num_pairs(); ++j) {
        auto [x, y] = idx.pairs()[j];
        for (int i = 0; i < idx.dim(); ++i)
            out.push_back(constraint_values(bits[idx.embedding_var(x, i)], bits[idx.embedding_var(y, i)],
                                            bits[idx.aux_var(j, i)]));
    }
    return out;
}

LagrangeState update_multipliers(LagrangeState state, std::span<const std::uint8_t> bits, const VarIndexer& idx) {
    if (state.num_pairs != idx.num_pairs() || state.k != idx.dim() ||
        state.multipliers.size() != state.expected_size())
        throw ShapeError("update_multipliers: state does not match the indexer");
    const auto values = constraint_values(bits, idx);
    const double mu = state.mu;
    for (std::size_t j = 0; j < state.num_pairs; ++j) {
        for (int i = 0; i < state.k; ++i) {
            const auto& c = values[j * state.k + i];
            if (state.variant == AlmVariant::Alm) {
                const int cs[3] = {c.c1, c.c2, c.c3};
                for (int t = 0; t < LagrangeState::kConstraints; ++t)
                    if (cs[t] > 0) state.lambda(j, t, i) += mu * cs[t];
            } else if (c.e != 0) {
                state.lambda(j, i) += mu * c.e;
            }
        }
    }
    state.mu *= state.rho;
    ++state.iteration;
    return state;
}

AlmOutcome alm_solve(const SimilarityMap& sim, int k, AlmVariant variant, const Sampler& solver,
                     const AlmParams& params) {
    if (params.max_iters < 1) throw std::invalid_argument("alm_solve: at least one iteration required");
    auto state = init_state(sim, k, variant, params.mu0, params.rho);

    // The loop ends at the first feasible iterate, so the iterate kept last
    // is either that one or the final infeasible one.
    AlmOutcome out;
    for (int t = 0; t < params.max_iters; ++t) {
        auto built = variant == AlmVariant::Alm ? build_qubo_alm(sim, k, state, params.builder)
                                                : build_qubo_almq(sim, k, state, params.builder);
        const auto samples = solver(built.qubo, built.indexer);
        auto pick = select_best(samples, built.indexer, sim, params.builder);

        out.history.push_back({t, pick.sample->energy, pick.result.violations, state.mu, pick.result.objective});
        out.result = pick.result;
        out.sample = *pick.sample;
        out.energy = pick.sample->energy;
        out.stats = qubo_stats(built.qubo);
        if (pick.result.feasible()) break;
        state = update_multipliers(std::move(state), pick.sample->bits, built.indexer);
    }
    out.final_state = std::move(state);
    return out;
}

void write_history_csv(std::ostream& out, const std::vector<AlmIteration>& history) {
    out << "iteration,energy,violations,mu,objective\n";
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(17);
    for (const auto& h : history)
        out << h.iteration << ',' << h.energy << ',' << h.violations << ',' << h.mu << ',' << h.objective << '\n';
    out.flags(flags);
    out.precision(precision);
}

}  // namespace qembed
