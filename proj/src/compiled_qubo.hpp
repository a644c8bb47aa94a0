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

// Adjacency-list form of a Qubo used by the solver kernels.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qembed/qubo.hpp"

namespace qembed::detail {

struct CompiledQubo {
    std::size_t num_vars = 0;
    std::vector<double> linear;
    std::vector<std::size_t> row_start;
    std::vector<std::uint32_t> neighbor;
    std::vector<double> coupling;
    double offset = 0.0;

    explicit CompiledQubo(const Qubo& q) : num_vars(q.num_vars()), linear(q.num_vars(), 0.0), offset(q.offset()) {
        for (auto [i, c] : q.linear()) linear[i] = c;
        std::vector<std::size_t> degree(num_vars, 0);
        for (const auto& [key, c] : q.quadratic()) {
            ++degree[key.first];
            ++degree[key.second];
        }
        row_start.assign(num_vars + 1, 0);
        for (std::size_t i = 0; i < num_vars; ++i) row_start[i + 1] = row_start[i] + degree[i];
        neighbor.resize(row_start.back());
        coupling.resize(row_start.back());
        std::vector<std::size_t> fill(row_start.begin(), row_start.end() - 1);
        for (const auto& [key, c] : q.quadratic()) {
            neighbor[fill[key.first]] = static_cast<std::uint32_t>(key.second);
            coupling[fill[key.first]++] = c;
            neighbor[fill[key.second]] = static_cast<std::uint32_t>(key.first);
            coupling[fill[key.second]++] = c;
        }
    }

    std::size_t degree(std::size_t i) const { return row_start[i + 1] - row_start[i]; }

    /// h_i + sum_j J_ij x_j: the energy change of setting x_i from 0 to 1.
    void fields(const std::uint8_t* bits, double* out) const {
        for (std::size_t i = 0; i < num_vars; ++i) {
            double f = linear[i];
            for (std::size_t e = row_start[i]; e < row_start[i + 1]; ++e)
                if (bits[neighbor[e]]) f += coupling[e];
            out[i] = f;
        }
    }

    /// Applies a flip of variable i (already toggled in bits) to the fields.
    void apply_flip(std::size_t i, const std::uint8_t* bits, double* field) const {
        const double sign = bits[i] ? 1.0 : -1.0;
        for (std::size_t e = row_start[i]; e < row_start[i + 1]; ++e) field[neighbor[e]] += sign * coupling[e];
    }
};

}  // namespace qembed::detail
