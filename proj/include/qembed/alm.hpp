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

#include <ostream>
#include <span>
#include <vector>

#include "qembed/eval.hpp"
#include "qembed/lagrange.hpp"
#include "qembed/qubo.hpp"
#include "qembed/similarity.hpp"
#include "qembed/solver.hpp"

namespace qembed {

/// All multipliers zero, mu = mu0. Requires mu0 > 0 and rho > 1.
LagrangeState init_state(const SimilarityMap& sim, int k, AlmVariant variant, double mu0 = 0.5, double rho = 1.1);

/// Linearized constraints C1 = z - x, C2 = z - y, C3 = x + y - z - 1 (each
/// required <= 0) and the product residual E = z - x*y.
struct ConstraintValues {
    int c1 = 0;
    int c2 = 0;
    int c3 = 0;
    int e = 0;

    friend bool operator==(const ConstraintValues&, const ConstraintValues&) = default;
};

ConstraintValues constraint_values(int x, int y, int z);

/// One record per (pair, dim), at index pair * k + dim.
std::vector<ConstraintValues> constraint_values(std::span<const std::uint8_t> bits, const VarIndexer& idx);

/// Alm: lambda_j += mu * max(0, C_j). Almq: lambda += mu * E. Then mu *= rho.
LagrangeState update_multipliers(LagrangeState state, std::span<const std::uint8_t> bits, const VarIndexer& idx);

struct AlmParams {
    double mu0 = 0.5;
    double rho = 1.1;
    int max_iters = 50;
    /// mu inside is ignored; the state carries the penalty weight.
    BuilderParams builder;
};

struct AlmIteration {
    int iteration = 0;
    double energy = 0.0;
    std::size_t violations = 0;
    double mu = 0.0;
    double objective = 0.0;
};

struct AlmOutcome {
    EmbeddingResult result;
    Sample sample;
    double energy = 0.0;
    /// Size of the model solved at the last iteration.
    QuboStats stats;
    std::vector<AlmIteration> history;
    LagrangeState final_state;
};

/// Build, solve, check constraints, update multipliers; stops at the first
/// feasible iterate or after max_iters. Without a feasible iterate the last
/// one is returned, flagged by result.feasible() == false.
AlmOutcome alm_solve(const SimilarityMap& sim, int k, AlmVariant variant, const Sampler& solver,
                     const AlmParams& params = {});

/// iteration,energy,violations,mu,objective
void write_history_csv(std::ostream& out, const std::vector<AlmIteration>& history);

}  // namespace qembed
