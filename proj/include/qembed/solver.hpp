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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qembed/qubo.hpp"

namespace qembed {

struct Sample {
    Assignment bits;
    double energy = 0.0;
    std::size_t occurrences = 1;

    friend bool operator==(const Sample&, const Sample&) = default;
};

struct SolverMeta {
    std::string name;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> params;
    double wall_ms = 0.0;
};

/// Distinct assignments with recomputed energies, ascending by energy and
/// then by bit pattern.
class SampleSet {
 public:
    SampleSet() = default;

    /// Recomputes every energy from `q`, merges repeated assignments into
    /// occurrence counts and sorts.
    static SampleSet from_reads(const Qubo& q, std::vector<Assignment> reads, SolverMeta meta);
    static SampleSet from_samples(const Qubo& q, std::vector<Sample> samples, SolverMeta meta);

    const std::vector<Sample>& samples() const noexcept { return samples_; }
    const Sample& best() const;
    bool empty() const noexcept { return samples_.empty(); }
    std::size_t size() const noexcept { return samples_.size(); }
    std::size_t num_vars() const noexcept { return num_vars_; }

    const SolverMeta& meta() const noexcept { return meta_; }
    SolverMeta& meta() noexcept { return meta_; }

 private:
    std::size_t num_vars_ = 0;
    std::vector<Sample> samples_;
    SolverMeta meta_;
};

/// A QUBO sampler as seen by the augmented Lagrangian loop and the harness.
using Sampler = std::function<SampleSet(const Qubo&, const VarIndexer&)>;

struct SaParams {
    std::size_t num_reads = 1000;
    std::size_t num_sweeps = 1000;
    /// (beta_hot, beta_cold); derived from the coefficients when unset.
    std::optional<std::pair<double, double>> beta_range;
    std::uint64_t seed = 0;

    void validate() const;
};

/// beta_hot = ln 2 / dE_max, beta_cold = ln 1000 / dE_min, where dE_max is
/// the largest bound |h_i| + sum_j |J_ij| on a single-flip change and dE_min
/// the smallest nonzero coefficient magnitude.
std::pair<double, double> default_beta_range(const Qubo& q);

/// Single-flip Metropolis annealing, `num_reads` independent restarts over a
/// geometric inverse-temperature schedule. Reads run in parallel; read r
/// draws from a stream seeded by (seed, r), so the result does not depend
/// on the thread count.
SampleSet solve_sa(const Qubo& q, const SaParams& params = {});

/// Reference for solve_sa: same per-read kernel, one read after another.
SampleSet solve_sa_serial(const Qubo& q, const SaParams& params = {});

inline constexpr std::size_t kMaxExactVars = 26;

struct ExactParams {
    /// Keep at most this many optimal assignments.
    std::size_t max_solutions = 1 << 16;
};

/// Exhaustive search. Returns every optimal assignment (within 1e-9
/// relative) up to `max_solutions`. Refuses more than kMaxExactVars variables.
SampleSet solve_exact(const Qubo& q, const ExactParams& params = {});

/// Reference for solve_exact: evaluates every assignment with Qubo::energy.
SampleSet solve_exact_serial(const Qubo& q, const ExactParams& params = {});

/// Exact minimization by conditioning: enumerates a greedily chosen set of
/// at most kMaxExactVars high-degree variables and minimizes the remaining
/// components (each at most 16 variables) independently. Returns one
/// completion per optimal conditioning assignment.
SampleSet solve_exact_conditioned(const Qubo& q, const ExactParams& params = {});

struct ExternalOptions {
    std::filesystem::path exchange_dir;
    /// Read this samples file instead of waiting on the exchange directory.
    std::optional<std::filesystem::path> samples_file;
    std::chrono::milliseconds timeout{std::chrono::minutes(10)};
    std::chrono::milliseconds poll_interval{50};
};

inline constexpr const char* kProblemFileName = "problem.qubo.json";
inline constexpr const char* kSamplesFileName = "samples.json";

/// Writes the model to <exchange_dir>/problem.qubo.json and waits for
/// <exchange_dir>/samples.json (responders should write it atomically).
/// Stored energies are recomputed; disagreements are logged and counted in
/// meta().params["energy_discrepancies"].
SampleSet solve_external(const Qubo& q, const VarIndexer* idx, const ExternalOptions& options);

/// {num_vars, samples: [{bits: "0101...", energy, occurrences}, ...]}
void write_samples(std::ostream& out, const SampleSet& set);
std::vector<Sample> read_samples(std::istream& in, std::size_t expected_vars);

std::string bits_to_string(const Assignment& bits);

}  // namespace qembed
