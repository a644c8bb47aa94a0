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

// qembed: binary node embeddings through QUBO models.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "qembed/alm.hpp"
#include "qembed/error.hpp"
#include "qembed/eval.hpp"
#include "qembed/experiment.hpp"
#include "qembed/graph.hpp"
#include "qembed/qubo.hpp"
#include "qembed/similarity.hpp"
#include "qembed/solver.hpp"

using namespace qembed;

namespace {

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

// Thrown for semantically invalid flag combinations found after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    fn(out);
}

const std::vector<std::string> kSimilarityNames{"jac", "jac0", "adjcy"};
const std::vector<std::string> kMethodNames{"penalty", "alm", "almq"};
const std::vector<std::string> kSolverNames{"sa", "exact", "external"};

struct Flags {
    int n = 10;
    int k = 2;
    double avg_degree = 4.0;
    std::string similarity_name = "adjcy";
    std::string method_name = "penalty";
    std::string solver_name = "sa";
    SimilarityKind similarity = SimilarityKind::Adjcy;
    Method method = Method::Penalty;
    SolverKind solver = SolverKind::Sa;
    std::optional<double> mu;
    double rho = 1.1;
    double alpha = 1.0;
    double beta = 1.0;
    std::size_t num_reads = 1000;
    std::size_t sweeps = 1000;
    int max_iters = 50;
    std::uint64_t seed = 0;
    std::string in;
    std::string out;
    std::string exchange_dir;
    std::string samples;
    std::string history;
    std::string config;
    int jobs = 1;
    int graphs = 5;
    int repeats = 3;
    std::vector<int> ns;
    std::vector<int> ks;
    std::vector<std::string> sim_names;
    std::vector<std::string> method_names;
    std::vector<std::string> solver_names;
};

// Values were already checked against the name lists during parsing.
template <class T, class Parse>
std::vector<T> parse_all(const std::vector<std::string>& names, Parse parse) {
    std::vector<T> out;
    for (const auto& name : names) out.push_back(*parse(name));
    return out;
}

BuilderParams builder_params(const Flags& f, bool penalty) {
    BuilderParams p;
    if (penalty) p.mu = f.mu;
    p.alpha = f.alpha;
    p.beta = f.beta;
    return p;
}

SaParams sa_params(const Flags& f) {
    SaParams p;
    p.num_reads = f.num_reads;
    p.num_sweeps = f.sweeps;
    p.seed = f.seed;
    return p;
}

ExternalOptions external_options(const Flags& f) {
    ExternalOptions e;
    e.exchange_dir = f.exchange_dir;
    if (!f.samples.empty()) e.samples_file = f.samples;
    return e;
}

void print_metrics(std::ostream& os, const PipelineResult& r) {
    os << std::setprecision(10) << "feasible=" << r.result.feasible() << " violations=" << r.result.violations
       << " objective=" << r.result.objective << " mse_nonzero=" << r.result.metrics.mse_nonzero
       << " mse_all=" << r.result.metrics.mse_all << " mae_all=" << r.result.metrics.mae_all
       << " best_energy=" << r.best_energy << " iterations=" << r.iterations << " num_vars=" << r.stats.num_vars
       << " num_linear=" << r.stats.num_linear << " num_quadratic=" << r.stats.num_quadratic << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Binary node embeddings via QUBO models"};
    app.require_subcommand(1);
    Flags f;

    auto add_sim = [&](CLI::App* c) {
        c->add_option("--similarity", f.similarity_name, "jac | jac0 | adjcy")->check(CLI::IsMember(kSimilarityNames));
    };
    auto add_builder = [&](CLI::App* c) {
        c->add_option("--k", f.k, "embedding dimension")->check(CLI::PositiveNumber);
        add_sim(c);
        c->add_option("--method", f.method_name, "penalty | alm | almq")->check(CLI::IsMember(kMethodNames));
        c->add_option("--mu", f.mu, "penalty weight (initial weight for alm/almq)");
        c->add_option("--rho", f.rho, "alm penalty growth factor");
        c->add_option("--alpha", f.alpha, "weight of nonzero-pair objective");
        c->add_option("--beta", f.beta, "weight of zero-pair objective");
    };
    auto add_solver = [&](CLI::App* c) {
        c->add_option("--solver", f.solver_name, "sa | exact | external")->check(CLI::IsMember(kSolverNames));
        c->add_option("--num-reads", f.num_reads, "annealing restarts");
        c->add_option("--sweeps", f.sweeps, "sweeps per read");
        c->add_option("--seed", f.seed, "random seed");
        c->add_option("--exchange-dir", f.exchange_dir, "directory shared with an external sampler");
        c->add_option("--samples", f.samples, "read an external samples file directly");
    };

    auto* gen = app.add_subcommand("gen", "generate a random graph");
    gen->add_option("--n", f.n, "node count")->required();
    gen->add_option("--avg-degree", f.avg_degree, "average degree");
    gen->add_option("--seed", f.seed, "random seed");
    gen->add_option("--out", f.out, "output path (.json for structured; stdout if omitted)");

    auto* sim = app.add_subcommand("sim", "build and export a similarity map");
    sim->add_option("--in", f.in, "graph file")->required();
    add_sim(sim);
    sim->add_option("--out", f.out, "output path (stdout if omitted)");

    auto* build = app.add_subcommand("build", "write the QUBO for a graph");
    build->add_option("--in", f.in, "graph file")->required();
    add_builder(build);
    build->add_option("--out", f.out, "QUBO file (stdout if omitted)");

    auto* solve = app.add_subcommand("solve", "solve one QUBO file");
    solve->add_option("--in", f.in, "QUBO file")->required();
    add_solver(solve);
    solve->add_option("--out", f.out, "samples file");

    auto* embed = app.add_subcommand("embed", "run the full pipeline on one graph");
    embed->add_option("--in", f.in, "graph file (otherwise generated from --n/--avg-degree/--seed)");
    embed->add_option("--n", f.n, "node count for a generated graph");
    embed->add_option("--avg-degree", f.avg_degree, "average degree for a generated graph");
    add_builder(embed);
    add_solver(embed);
    embed->add_option("--max-iters", f.max_iters, "alm iteration cap");
    embed->add_option("--out", f.out, "embedding file")->default_val("embedding.json");
    embed->add_option("--history", f.history, "alm history CSV");

    auto* sweep = app.add_subcommand("sweep", "run an experiment matrix");
    sweep->add_option("--config", f.config, "config file");
    sweep->add_option("--n", f.ns, "node counts");
    sweep->add_option("--k", f.ks, "dimensions");
    sweep->add_option("--similarity", f.sim_names, "similarities")->check(CLI::IsMember(kSimilarityNames));
    sweep->add_option("--method", f.method_names, "methods")->check(CLI::IsMember(kMethodNames));
    sweep->add_option("--solver", f.solver_names, "solvers")->check(CLI::IsMember(kSolverNames));
    sweep->add_option("--avg-degree", f.avg_degree, "average degree");
    sweep->add_option("--graphs", f.graphs, "graphs per cell");
    sweep->add_option("--repeats", f.repeats, "repeats per graph");
    sweep->add_option("--seed", f.seed, "master seed");
    sweep->add_option("--mu", f.mu, "penalty weight");
    sweep->add_option("--rho", f.rho, "alm growth factor");
    sweep->add_option("--alpha", f.alpha, "nonzero-pair weight");
    sweep->add_option("--beta", f.beta, "zero-pair weight");
    sweep->add_option("--num-reads", f.num_reads, "annealing restarts");
    sweep->add_option("--sweeps", f.sweeps, "sweeps per read");
    sweep->add_option("--max-iters", f.max_iters, "alm iteration cap");
    sweep->add_option("--exchange-dir", f.exchange_dir, "external sampler directory");
    sweep->add_option("--jobs", f.jobs, "parallel cells")->check(CLI::PositiveNumber);
    sweep->add_option("--out", f.out, "results CSV");

    auto* plot = app.add_subcommand("plot", "emit gnuplot scripts from a results CSV");
    plot->add_option("--in", f.in, "results CSV")->required();
    plot->add_option("--out", f.out, "output directory")->default_val("plots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }
    f.similarity = *parse_similarity_kind(f.similarity_name);
    f.method = *parse_method(f.method_name);
    f.solver = *parse_solver_kind(f.solver_name);

    try {
        if (*gen) {
            auto g = generate_random_graph(f.n, f.avg_degree, f.seed);
            if (f.out.empty())
                write_graph(std::cout, g, GraphFormat::Structured);
            else
                save_graph(f.out, g);
        } else if (*sim) {
            auto s = build_similarity(load_graph(f.in), f.similarity);
            with_output(f.out, [&](std::ostream& os) { write_similarity(os, s); });
        } else if (*build) {
            const auto s = build_similarity(load_graph(f.in), f.similarity);
            BuiltQubo built;
            if (f.method == Method::Penalty) {
                built = build_qubo_penalty(s, f.k, builder_params(f, true));
            } else {
                const auto variant = f.method == Method::Alm ? AlmVariant::Alm : AlmVariant::Almq;
                auto state = init_state(s, f.k, variant, f.mu.value_or(0.5), f.rho);
                built = variant == AlmVariant::Alm ? build_qubo_alm(s, f.k, state, builder_params(f, false))
                                                   : build_qubo_almq(s, f.k, state, builder_params(f, false));
            }
            with_output(f.out, [&](std::ostream& os) { export_qubo(os, built.qubo, &built.indexer); });
            auto st = qubo_stats(built.qubo);
            std::cerr << "num_vars=" << st.num_vars << " num_linear=" << st.num_linear
                      << " num_quadratic=" << st.num_quadratic << '\n';
        } else if (*solve) {
            const auto file = load_qubo(f.in);
            SampleSet result;
            switch (f.solver) {
                case SolverKind::Sa: result = solve_sa(file.qubo, sa_params(f)); break;
                case SolverKind::Exact: result = solve_exact(file.qubo); break;
                case SolverKind::External:
                    if (f.exchange_dir.empty() && f.samples.empty())
                        throw UsageError("--solver external needs --exchange-dir or --samples");
                    result = solve_external(file.qubo, file.indexer ? &*file.indexer : nullptr, external_options(f));
                    break;
            }
            if (!f.out.empty()) with_output(f.out, [&](std::ostream& os) { write_samples(os, result); });
            std::cout << std::setprecision(17) << "best_energy=" << result.best().energy
                      << " best=" << bits_to_string(result.best().bits) << " distinct_samples=" << result.size()
                      << '\n';
        } else if (*embed) {
            const auto g = f.in.empty() ? generate_random_graph(f.n, f.avg_degree, f.seed) : load_graph(f.in);
            if (f.solver == SolverKind::External && f.exchange_dir.empty())
                throw UsageError("--solver external needs --exchange-dir");
            PipelineOptions opt;
            opt.k = f.k;
            opt.similarity = f.similarity;
            opt.method = f.method;
            opt.solver = f.solver;
            opt.builder = builder_params(f, f.method == Method::Penalty);
            opt.sa = sa_params(f);
            opt.alm.mu0 = f.mu.value_or(0.5);
            opt.alm.rho = f.rho;
            opt.alm.max_iters = f.max_iters;
            opt.external = external_options(f);
            auto r = run_pipeline(g, opt);
            with_output(f.out, [&](std::ostream& os) { write_embedding(os, r.result.vectors); });
            if (!f.history.empty())
                with_output(f.history, [&](std::ostream& os) { write_history_csv(os, r.history); });
            print_metrics(std::cout, r);
        } else if (*sweep) {
            ExperimentConfig c;
            if (!f.config.empty()) {
                std::ifstream in(f.config);
                if (!in) throw Error("cannot open " + f.config);
                c = parse_config(in);
            }
            auto given = [&](const char* name) { return sweep->count(name) > 0; };
            if (given("--n")) c.node_counts = f.ns;
            if (given("--k")) c.dimensions = f.ks;
            if (given("--similarity")) c.similarities = parse_all<SimilarityKind>(f.sim_names, parse_similarity_kind);
            if (given("--method")) c.methods = parse_all<Method>(f.method_names, parse_method);
            if (given("--solver")) c.solvers = parse_all<SolverKind>(f.solver_names, parse_solver_kind);
            if (given("--avg-degree")) c.avg_degree = f.avg_degree;
            if (given("--graphs")) c.graphs_per_cell = f.graphs;
            if (given("--repeats")) c.repeats = f.repeats;
            if (given("--seed")) c.seed = f.seed;
            if (given("--mu")) c.builder.mu = f.mu;
            if (given("--alpha")) c.builder.alpha = f.alpha;
            if (given("--beta")) c.builder.beta = f.beta;
            if (given("--rho")) c.alm.rho = f.rho;
            if (given("--num-reads")) c.sa.num_reads = f.num_reads;
            if (given("--sweeps")) c.sa.num_sweeps = f.sweeps;
            if (given("--max-iters")) c.alm.max_iters = f.max_iters;
            if (given("--exchange-dir")) c.external.exchange_dir = f.exchange_dir;
            if (given("--jobs")) c.jobs = f.jobs;
            if (given("--out")) c.output = f.out;
            try {
                c.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            std::ofstream out(c.output);
            if (!out) throw Error("cannot write " + c.output);
            auto rows = run_experiment(c, &out);
            std::size_t failed = 0;
            for (const auto& r : rows) failed += !r.error.empty();
            std::cout << "rows=" << rows.size() << " failed=" << failed << " out=" << c.output << '\n';
        } else if (*plot) {
            auto res = emit_plots(f.in, f.out);
            for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
            for (const auto& p : res.files) std::cout << p.string() << '\n';
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return 0;
}
