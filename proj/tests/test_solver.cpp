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


#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "qembed/error.hpp"
#include "qembed/solver.hpp"

using namespace qembed;
namespace fs = std::filesystem;

namespace {

Qubo random_dense(Rng& rng, std::size_t n) {
    Qubo q(n);
    for (std::size_t i = 0; i < n; ++i) {
        q.add_linear(i, 2.0 * uniform01(rng) - 1.0);
        for (std::size_t j = i + 1; j < n; ++j)
            if (uniform01(rng) < 0.5) q.add_quadratic(i, j, 2.0 * uniform01(rng) - 1.0);
    }
    q.add_offset(uniform01(rng));
    return q;
}

fs::path fresh_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("qembed_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_atomically(const fs::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    std::ofstream(tmp) << text;
    fs::rename(tmp, path);
}

}  // namespace

TEST_CASE("sample sets merge duplicates and sort by energy") {
    Qubo q(2);
    q.add_linear(0, -1.0);
    q.add_linear(1, 0.5);
    auto set = SampleSet::from_reads(q, {{0, 0}, {1, 0}, {0, 0}, {1, 1}, {1, 0}, {1, 0}}, {});
    REQUIRE(set.size() == 3);
    CHECK(set.best().bits == Assignment{1, 0});
    CHECK(set.best().occurrences == 3);
    CHECK(set.best().energy == -1.0);
    CHECK(set.samples()[1].energy == -0.5);
    CHECK(set.samples()[2].bits == Assignment{0, 0});
    CHECK_THROWS(SampleSet().best());
}

TEST_CASE("exact solver agrees with the naive enumeration") {
    Rng rng(1);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 1 + uniform_below(rng, 14);
        auto q = random_dense(rng, n);
        const double ground = oracle::min_energy(q);
        auto fast = solve_exact(q);
        auto slow = solve_exact_serial(q);
        CHECK(fast.best().energy == Catch::Approx(ground).margin(1e-12));
        CHECK(fast.samples() == slow.samples());
        for (const auto& s : fast.samples()) CHECK(std::abs(oracle::energy(q, s.bits) - ground) < 1e-9);
    }
}

TEST_CASE("exact solver returns every degenerate ground state") {
    Qubo q(4);
    q.add_quadratic(0, 1, 1.0);
    auto set = solve_exact(q);
    // x0 x1 != 11 and x2, x3 free: 3 * 4 ground states of energy 0.
    CHECK(set.size() == 12);
    ExactParams capped;
    capped.max_solutions = 5;
    CHECK(solve_exact(q, capped).size() == 5);
}

TEST_CASE("exact solver refuses large models") {
    Qubo q(kMaxExactVars + 1);
    CHECK_THROWS_AS(solve_exact(q), SolverError);
    CHECK_THROWS_AS(solve_exact_serial(q), SolverError);
}

TEST_CASE("conditioned exact solver finds the ground energy") {
    Rng rng(2);
    for (int t = 0; t < 15; ++t) {
        auto built = oracle::random_penalty_qubo(rng, 14, 22);
        const double ground = solve_exact(built.qubo).best().energy;
        auto cond = solve_exact_conditioned(built.qubo);
        CHECK(cond.best().energy == Catch::Approx(ground).margin(1e-9));
        CHECK(std::abs(built.qubo.energy(cond.best().bits) - cond.best().energy) < 1e-12);
    }
}

TEST_CASE("conditioned exact solver handles models above the enumeration limit") {
    // A chain decomposes into small components once a few variables are fixed.
    const std::size_t n = 60;
    Qubo q(n);
    for (std::size_t i = 0; i < n; ++i) q.add_linear(i, i % 3 == 0 ? -1.0 : 0.5);
    for (std::size_t i = 0; i + 1 < n; ++i) q.add_quadratic(i, i + 1, i % 2 ? -0.75 : 0.25);
    auto set = solve_exact_conditioned(q);
    // The chain is a path, so dynamic programming gives the reference optimum.
    double best0 = 0.0, best1 = q.linear(0);
    for (std::size_t i = 1; i < n; ++i) {
        const double c = q.quadratic(i - 1, i);
        const double n0 = std::min(best0, best1);
        const double n1 = q.linear(i) + std::min(best0, best1 + c);
        best0 = n0;
        best1 = n1;
    }
    CHECK(set.best().energy == Catch::Approx(std::min(best0, best1)).margin(1e-9));
}

TEST_CASE("parallel and serial annealers produce identical sample sets") {
    Rng rng(3);
    for (int t = 0; t < 5; ++t) {
        auto built = oracle::random_penalty_qubo(rng, 12, 42);
        SaParams p;
        p.num_reads = 40;
        p.num_sweeps = 200;
        p.seed = rng();
        auto a = solve_sa(built.qubo, p);
        auto b = solve_sa_serial(built.qubo, p);
        CHECK(a.samples() == b.samples());
        CHECK(solve_sa(built.qubo, p).samples() == a.samples());
        p.seed += 1;
        CHECK_FALSE(solve_sa(built.qubo, p).samples() == a.samples());
    }
}

TEST_CASE("annealer reaches the ground state of small penalty models") {
    Rng rng(4);
    int hits = 0;
    for (int t = 0; t < 20; ++t) {
        auto built = oracle::random_penalty_qubo(rng, 12);
        SaParams p;
        p.num_reads = 200;
        p.seed = t;
        hits += std::abs(solve_sa(built.qubo, p).best().energy - solve_exact(built.qubo).best().energy) < 1e-9;
    }
    CHECK(hits >= 19);
}

TEST_CASE("annealer parameters") {
    Qubo q(3);
    q.add_linear(0, 1.0);
    q.add_quadratic(0, 1, -4.0);
    auto [hot, cold] = default_beta_range(q);
    CHECK(hot == Catch::Approx(std::log(2.0) / 5.0));
    CHECK(cold == Catch::Approx(std::log(1000.0) / 1.0));
    CHECK(default_beta_range(Qubo(3)) == std::pair{0.1, 1.0});
    SaParams bad;
    bad.num_reads = 0;
    CHECK_THROWS(solve_sa(q, bad));
    SaParams inverted;
    inverted.beta_range = std::pair{2.0, 1.0};
    CHECK_THROWS(solve_sa(q, inverted));
    SaParams ok;
    ok.num_reads = 10;
    auto set = solve_sa(q, ok);
    CHECK(set.meta().name == "sa");
    CHECK(set.meta().seed == 0);
    std::size_t reads = 0;
    for (const auto& s : set.samples()) reads += s.occurrences;
    CHECK(reads == 10);
}

TEST_CASE("samples serialization round-trips") {
    Rng rng(5);
    auto q = random_dense(rng, 9);
    auto set = solve_exact(q);
    std::stringstream s;
    write_samples(s, set);
    auto back = read_samples(s, 9);
    CHECK(back == set.samples());
    std::stringstream again;
    write_samples(again, set);
    CHECK_THROWS_AS(read_samples(again, 8), ShapeError);
}

TEST_CASE("external solver exchanges files with a responder") {
    Rng rng(6);
    auto q = random_dense(rng, 10);
    const auto dir = fresh_dir("exchange");
    write_atomically(dir / kSamplesFileName, R"({"num_vars": 10, "samples": [{"bits": "0000000000"}]})");

    std::thread responder([&] {
        const auto problem = dir / kProblemFileName;
        while (!fs::exists(problem)) std::this_thread::sleep_for(std::chrono::milliseconds(5));
        auto file = load_qubo(problem.string());
        std::ostringstream out;
        write_samples(out, solve_exact(file.qubo));
        write_atomically(dir / kSamplesFileName, out.str());
    });
    ExternalOptions opt;
    opt.exchange_dir = dir;
    opt.poll_interval = std::chrono::milliseconds(5);
    auto set = solve_external(q, nullptr, opt);
    responder.join();
    CHECK(set.best().energy == Catch::Approx(oracle::min_energy(q)).margin(1e-12));
    CHECK(set.meta().params.at("energy_discrepancies") == "0");
    fs::remove_all(dir);
}

TEST_CASE("external solver validates what it reads") {
    Qubo q(3);
    q.add_linear(0, 1.0);
    const auto dir = fresh_dir("external_files");
    ExternalOptions opt;
    opt.samples_file = dir / "given.json";

    write_atomically(*opt.samples_file, R"({"samples": [{"bits": "1010"}]})");
    CHECK_THROWS_AS(solve_external(q, nullptr, opt), ShapeError);

    write_atomically(*opt.samples_file, R"({"samples": [{"bits": "100", "energy": 7.0}, {"bits": "000"}]})");
    auto set = solve_external(q, nullptr, opt);
    CHECK(set.meta().params.at("energy_discrepancies") == "1");
    CHECK(set.best().bits == Assignment{0, 0, 0});
    CHECK(set.samples()[1].energy == 1.0);

    write_atomically(*opt.samples_file, R"({"samples": [{"bits": "1x0"}]})");
    CHECK_THROWS_AS(solve_external(q, nullptr, opt), ParseError);

    ExternalOptions waiting;
    waiting.exchange_dir = dir / "nobody";
    waiting.timeout = std::chrono::milliseconds(30);
    waiting.poll_interval = std::chrono::milliseconds(5);
    CHECK_THROWS_AS(solve_external(q, nullptr, waiting), SolverError);
    fs::remove_all(dir);
}
