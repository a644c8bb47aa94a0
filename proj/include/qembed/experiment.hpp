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
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qembed/alm.hpp"
#include "qembed/eval.hpp"
#include "qembed/graph.hpp"
#include "qembed/qubo.hpp"
#include "qembed/similarity.hpp"
#include "qembed/solver.hpp"

namespace qembed {

enum class Method { Penalty, Alm, Almq };
enum class SolverKind { Sa, Exact, External };

std::string_view to_string(Method m);
std::string_view to_string(SolverKind s);
std::optional<Method> parse_method(std::string_view name);
std::optional<SolverKind> parse_solver_kind(std::string_view name);

struct PipelineOptions {
    int k = 2;
    SimilarityKind similarity = SimilarityKind::Adjcy;
    Method method = Method::Penalty;
    SolverKind solver = SolverKind::Sa;
    BuilderParams builder;
    SaParams sa;
    AlmParams alm;
    ExternalOptions external;
};

struct PipelineResult {
    EmbeddingResult result;
    double best_energy = 0.0;
    int iterations = 1;
    QuboStats stats;
    std::vector<AlmIteration> history;
};

/// Sampler for the given backend. SA draws a fresh derived seed on each call
/// so successive ALM iterations use distinct streams.
Sampler make_sampler(SolverKind kind, const SaParams& sa, const ExternalOptions& external);

/// Similarity -> QUBO -> solve (-> multiplier updates) -> decode and score.
PipelineResult run_pipeline(const Graph& g, const PipelineOptions& options);

struct ExperimentConfig {
    std::vector<int> node_counts{10, 15, 20};
    std::vector<int> dimensions{2, 3, 4, 5};
    std::vector<SimilarityKind> similarities{SimilarityKind::Jac, SimilarityKind::Jac0, SimilarityKind::Adjcy};
    std::vector<Method> methods{Method::Penalty, Method::Alm, Method::Almq};
    std::vector<SolverKind> solvers{SolverKind::Sa};
    double avg_degree = 4.0;
    int graphs_per_cell = 5;
    int repeats = 3;
    std::uint64_t seed = 0;
    BuilderParams builder;
    SaParams sa;
    AlmParams alm;
    ExternalOptions external;
    int jobs = 1;
    std::string output = "results.csv";

    void validate() const;
};

/// Reads the structured config file; keys mirror ExperimentConfig and any
/// omitted key keeps its default.
ExperimentConfig parse_config(std::istream& in);

struct CellSpec {
    int n = 0;
    int graph_index = 0;
    int k = 0;
    SimilarityKind similarity = SimilarityKind::Jac;
    Method method = Method::Penalty;
    SolverKind solver = SolverKind::Sa;
    int repeat = 0;
    std::uint64_t graph_seed = 0;
    std::uint64_t seed = 0;
};

/// Run matrix in lexicographic order of (n, graph, k, similarity, method,
/// solver, repeat).
std::vector<CellSpec> expand(const ExperimentConfig& config);

std::uint64_t graph_seed(std::uint64_t master, int n, int graph_index);
std::uint64_t cell_seed(std::uint64_t master, const CellSpec& cell);

struct CellRow {
    CellSpec cell;
    std::string graph_id;
    int iterations = 0;
    double best_energy = 0.0;
    std::size_t violations = 0;
    ErrorMetrics metrics;
    QuboStats stats;
    double runtime_ms = 0.0;
    std::string error;
};

const std::vector<std::string>& csv_columns();
std::string csv_header();
std::string csv_row(const CellRow& row);

CellRow run_cell(const CellSpec& cell, const ExperimentConfig& config);

/// Runs every cell, writing the header and then each row in matrix order as
/// soon as it and all earlier rows are done. Cell failures go to the error
/// column. Cells run on up to config.jobs threads.
std::vector<CellRow> run_experiment(const ExperimentConfig& config, std::ostream* csv = nullptr);

struct PlotOutput {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

/// Aggregates a results CSV into per-series data files and a gnuplot script
/// (plots.gp) drawing error-vs-n and size-vs-n facets.
PlotOutput emit_plots(const std::filesystem::path& csv, const std::filesystem::path& out_dir);

}  // namespace qembed
