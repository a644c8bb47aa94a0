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

#include "qembed/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <memory>
#include <stdexcept>

#include <omp.h>

#include "json.hpp"
#include "qembed/error.hpp"
#include "qembed/rng.hpp"

namespace qembed {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Penalty: return "penalty";
        case Method::Alm: return "alm";
        case Method::Almq: return "almq";
    }
    return "?";
}

std::string_view to_string(SolverKind s) {
    switch (s) {
        case SolverKind::Sa: return "sa";
        case SolverKind::Exact: return "exact";
        case SolverKind::External: return "external";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name) {
    if (name == "penalty") return Method::Penalty;
    if (name == "alm") return Method::Alm;
    if (name == "almq") return Method::Almq;
    return std::nullopt;
}

std::optional<SolverKind> parse_solver_kind(std::string_view name) {
    if (name == "sa") return SolverKind::Sa;
    if (name == "exact") return SolverKind::Exact;
    if (name == "external") return SolverKind::External;
    return std::nullopt;
}

Sampler make_sampler(SolverKind kind, const SaParams& sa, const ExternalOptions& external) {
    switch (kind) {
        case SolverKind::Sa: {
            auto calls = std::make_shared<std::uint64_t>(0);
            return [sa, calls](const Qubo& q, const VarIndexer&) {
                SaParams p = sa;
                if (*calls > 0) p.seed = derive_seed(sa.seed, {*calls});
                ++*calls;
                return solve_sa(q, p);
            };
        }
        case SolverKind::Exact:
            return [](const Qubo& q, const VarIndexer&) { return solve_exact(q); };
        case SolverKind::External:
            return [external](const Qubo& q, const VarIndexer& idx) { return solve_external(q, &idx, external); };
    }
    throw std::invalid_argument("unknown solver kind");
}

PipelineResult run_pipeline(const Graph& g, const PipelineOptions& opt) {
    const auto sim = build_similarity(g, opt.similarity);
    auto sampler = make_sampler(opt.solver, opt.sa, opt.external);
    PipelineResult out;
    if (opt.method == Method::Penalty) {
        auto built = build_qubo_penalty(sim, opt.k, opt.builder);
        const auto samples = sampler(built.qubo, built.indexer);
        auto pick = select_best(samples, built.indexer, sim, opt.builder);
        out.result = std::move(pick.result);
        out.best_energy = pick.sample->energy;
        out.iterations = 1;
        out.stats = qubo_stats(built.qubo);
        return out;
    }
    AlmParams alm = opt.alm;
    alm.builder = opt.builder;
    auto outcome = alm_solve(sim, opt.k, opt.method == Method::Alm ? AlmVariant::Alm : AlmVariant::Almq, sampler, alm);
    out.result = std::move(outcome.result);
    out.best_energy = outcome.energy;
    out.iterations = static_cast<int>(outcome.history.size());
    out.stats = outcome.stats;
    out.history = std::move(outcome.history);
    return out;
}

void ExperimentConfig::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("experiment config: ") + what);
    };
    need(!node_counts.empty() && !dimensions.empty() && !similarities.empty() && !methods.empty() && !solvers.empty(),
         "all lists must be non-empty");
    for (int n : node_counts) need(n >= 2, "node counts must be >= 2");
    for (int k : dimensions) need(k >= 1, "dimensions must be >= 1");
    need(graphs_per_cell >= 1 && repeats >= 1, "graphs_per_cell and repeats must be >= 1");
    need(jobs >= 1, "jobs must be >= 1");
    need(alm.max_iters >= 1, "max_iters must be >= 1");
    builder.validate();
    sa.validate();
}

namespace {

template <class T, class Parse>
std::vector<T> parse_names(const nlohmann::json& arr, Parse parse, const char* what) {
    std::vector<T> out;
    for (const auto& v : arr) {
        auto parsed = parse(v.get<std::string>());
        if (!parsed) throw ParseError(std::string("unknown ") + what + " '" + v.get<std::string>() + "'");
        out.push_back(*parsed);
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    try {
        if (doc.contains("node_counts")) c.node_counts = doc["node_counts"].get<std::vector<int>>();
        if (doc.contains("dimensions")) c.dimensions = doc["dimensions"].get<std::vector<int>>();
        if (doc.contains("similarities"))
            c.similarities = parse_names<SimilarityKind>(doc["similarities"], parse_similarity_kind, "similarity");
        if (doc.contains("methods")) c.methods = parse_names<Method>(doc["methods"], parse_method, "method");
        if (doc.contains("solvers")) c.solvers = parse_names<SolverKind>(doc["solvers"], parse_solver_kind, "solver");
        if (doc.contains("avg_degree")) c.avg_degree = doc["avg_degree"].get<double>();
        if (doc.contains("graphs_per_cell")) c.graphs_per_cell = doc["graphs_per_cell"].get<int>();
        if (doc.contains("repeats")) c.repeats = doc["repeats"].get<int>();
        if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("mu")) c.builder.mu = doc["mu"].get<double>();
        if (doc.contains("alpha")) c.builder.alpha = doc["alpha"].get<double>();
        if (doc.contains("beta")) c.builder.beta = doc["beta"].get<double>();
        if (doc.contains("num_reads")) c.sa.num_reads = doc["num_reads"].get<std::size_t>();
        if (doc.contains("num_sweeps")) c.sa.num_sweeps = doc["num_sweeps"].get<std::size_t>();
        if (doc.contains("mu0")) c.alm.mu0 = doc["mu0"].get<double>();
        if (doc.contains("rho")) c.alm.rho = doc["rho"].get<double>();
        if (doc.contains("max_iters")) c.alm.max_iters = doc["max_iters"].get<int>();
        if (doc.contains("exchange_dir")) c.external.exchange_dir = doc["exchange_dir"].get<std::string>();
        if (doc.contains("jobs")) c.jobs = doc["jobs"].get<int>();
        if (doc.contains("output")) c.output = doc["output"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return c;
}

std::uint64_t graph_seed(std::uint64_t master, int n, int graph_index) {
    return derive_seed(master, {0x67726170ULL, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(graph_index)});
}

std::uint64_t cell_seed(std::uint64_t master, const CellSpec& c) {
    return derive_seed(master, {static_cast<std::uint64_t>(c.n), static_cast<std::uint64_t>(c.k),
                                static_cast<std::uint64_t>(c.similarity), static_cast<std::uint64_t>(c.method),
                                static_cast<std::uint64_t>(c.graph_index), static_cast<std::uint64_t>(c.repeat)});
}

std::vector<CellSpec> expand(const ExperimentConfig& config) {
    std::vector<CellSpec> cells;
    for (int n : config.node_counts)
        for (int g = 0; g < config.graphs_per_cell; ++g)
            for (int k : config.dimensions)
                for (auto sim : config.similarities)
                    for (auto method : config.methods)
                        for (auto solver : config.solvers)
                            for (int r = 0; r < config.repeats; ++r) {
                                CellSpec c{n, g, k, sim, method, solver, r, graph_seed(config.seed, n, g), 0};
                                c.seed = cell_seed(config.seed, c);
                                cells.push_back(c);
                            }
    return cells;
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> columns{
            "graph_id", "n",           "k",       "similarity", "method",   "solver",        "seed",
            "iterations", "best_energy", "violations", "mse_nonzero", "mse_all", "mae_all",  "num_vars",
            "num_linear", "num_quadratic", "runtime_ms", "error"};
    return columns;
}

std::string csv_header() {
    std::string h;
    for (const auto& c : csv_columns()) h += (h.empty() ? "" : ",") + c;
    return h;
}

namespace {

std::string fmt_double(double v, const char* spec = "%.17g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string sanitize(std::string s) {
    for (auto& ch : s)
        if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ch == ',' ? ';' : ' ';
    return s;
}

}  // namespace

std::string csv_row(const CellRow& r) {
    const auto& c = r.cell;
    std::string s;
    auto put = [&](const std::string& v) { s += (s.empty() ? "" : ",") + v; };
    put(r.graph_id);
    put(std::to_string(c.n));
    put(std::to_string(c.k));
    put(std::string(to_string(c.similarity)));
    put(std::string(to_string(c.method)));
    put(std::string(to_string(c.solver)));
    put(std::to_string(c.seed));
    put(std::to_string(r.iterations));
    put(fmt_double(r.best_energy));
    put(std::to_string(r.violations));
    put(fmt_double(r.metrics.mse_nonzero));
    put(fmt_double(r.metrics.mse_all));
    put(fmt_double(r.metrics.mae_all));
    put(std::to_string(r.stats.num_vars));
    put(std::to_string(r.stats.num_linear));
    put(std::to_string(r.stats.num_quadratic));
    put(fmt_double(r.runtime_ms, "%.3f"));
    put(sanitize(r.error));
    return s;
}

CellRow run_cell(const CellSpec& cell, const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    CellRow row;
    row.cell = cell;
    row.graph_id = "n" + std::to_string(cell.n) + "_g" + std::to_string(cell.graph_index);
    try {
        const auto g = generate_random_graph(cell.n, config.avg_degree, cell.graph_seed);
        PipelineOptions opt;
        opt.k = cell.k;
        opt.similarity = cell.similarity;
        opt.method = cell.method;
        opt.solver = cell.solver;
        opt.builder = config.builder;
        opt.sa = config.sa;
        opt.sa.seed = cell.seed;
        opt.alm = config.alm;
        opt.external = config.external;
        auto res = run_pipeline(g, opt);
        row.iterations = res.iterations;
        row.best_energy = res.best_energy;
        row.violations = res.result.violations;
        row.metrics = res.result.metrics;
        row.stats = res.stats;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

std::vector<CellRow> run_experiment(const ExperimentConfig& config, std::ostream* csv) {
    config.validate();
    const auto cells = expand(config);
    std::vector<CellRow> rows(cells.size());
    std::vector<bool> done(cells.size(), false);
    std::size_t next = 0;
    if (csv) *csv << csv_header() << '\n' << std::flush;

    const auto count = static_cast<std::int64_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.jobs)
    for (std::int64_t i = 0; i < count; ++i) {
        auto row = run_cell(cells[i], config);
#pragma omp critical(qembed_csv_writer)
        {
            rows[i] = std::move(row);
            done[i] = true;
            while (next < cells.size() && done[next]) {
                if (csv) *csv << csv_row(rows[next]) << '\n' << std::flush;
                ++next;
            }
        }
    }
    return rows;
}

}  // namespace qembed
