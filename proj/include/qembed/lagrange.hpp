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
#include <vector>

namespace qembed {

enum class AlmVariant {
    Alm,   ///< Three inequality multipliers per (pair, dim), one per linearized constraint.
    Almq,  ///< One equality multiplier per (pair, dim) on z - x*y.
};

/// Multipliers and penalty weight carried between augmented Lagrangian
/// iterations. Alm multipliers stay nonnegative; Almq ones are signed.
struct LagrangeState {
    AlmVariant variant = AlmVariant::Alm;
    std::size_t num_pairs = 0;
    int k = 0;
    std::vector<double> multipliers;
    double mu = 0.5;
    double rho = 1.1;
    int iteration = 0;

    static constexpr int kConstraints = 3;

    /// Alm: constraint in {0, 1, 2} for C1..C3.
    double& lambda(std::size_t pair, int constraint, int dim) {
        return multipliers[(pair * kConstraints + constraint) * k + dim];
    }
    double lambda(std::size_t pair, int constraint, int dim) const {
        return multipliers[(pair * kConstraints + constraint) * k + dim];
    }

    /// Almq.
    double& lambda(std::size_t pair, int dim) { return multipliers[pair * k + dim]; }
    double lambda(std::size_t pair, int dim) const { return multipliers[pair * k + dim]; }

    std::size_t expected_size() const {
        return num_pairs * static_cast<std::size_t>(k) * (variant == AlmVariant::Alm ? kConstraints : 1);
    }
};

}  // namespace qembed
