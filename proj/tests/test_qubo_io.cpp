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


#include <fstream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "qembed/error.hpp"
#include "qembed/qubo.hpp"

using namespace qembed;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

QuboFile parse(const std::string& text) {
    std::istringstream in(text);
    return import_qubo(in);
}

}  // namespace

TEST_CASE("export of the single edge model matches the fixture bytes") {
    SimilarityMap sim;
    sim.n = 2;
    sim.nonzero = {{0, 1, 1.0}};
    BuilderParams params;
    params.mu = 2.0;
    auto built = build_qubo_penalty(sim, 1, params);
    std::ostringstream out;
    export_qubo(out, built.qubo, &built.indexer);
    CHECK(out.str() == slurp(QEMBED_FIXTURES "/single_edge_k1_mu2.qubo.json"));

    auto file = load_qubo(QEMBED_FIXTURES "/single_edge_k1_mu2.qubo.json");
    CHECK(file.qubo == built.qubo);
    REQUIRE(file.indexer.has_value());
    CHECK(*file.indexer == built.indexer);
}

TEST_CASE("export and import round-trip exactly") {
    Rng rng(31);
    for (int t = 0; t < 30; ++t) {
        auto built = oracle::random_penalty_qubo(rng, 6, 26);
        std::stringstream s;
        const bool named = t % 2 == 0;
        export_qubo(s, built.qubo, named ? &built.indexer : nullptr);
        auto file = import_qubo(s);
        CHECK(file.qubo == built.qubo);
        CHECK(file.indexer.has_value() == named);
        if (named) CHECK(*file.indexer == built.indexer);
    }
}

TEST_CASE("import rejects malformed models") {
    CHECK_THROWS_AS(parse(R"({"num_vars": 2, "linear": {"0": 1, "0": 2}, "quadratic": [], "offset": 0})"),
                    ParseError);
    CHECK_THROWS_AS(parse(R"({"num_vars": 3, "linear": {}, "quadratic": [[0, 1, 1], [1, 0, 2]], "offset": 0})"),
                    ParseError);
    CHECK_THROWS_AS(parse(R"({"num_vars": 3, "linear": {}, "quadratic": [[1, 1, 1]], "offset": 0})"), ParseError);
    CHECK_THROWS_AS(parse(R"({"num_vars": 2, "linear": {"2": 1}, "quadratic": [], "offset": 0})"), ParseError);
    CHECK_THROWS_AS(parse(R"({"num_vars": 2, "linear": {"a": 1}, "quadratic": [], "offset": 0})"), ParseError);
    CHECK_THROWS_AS(parse(R"({"num_vars": 2, "linear": {}, "quadratic": [[0, 1]], "offset": 0})"), ParseError);
    CHECK_THROWS_AS(parse(R"({"num_vars": 2, "names": ["a"], "linear": {}, "quadratic": [], "offset": 0})"),
                    ParseError);
    CHECK_THROWS_AS(parse("[1, 2"), ParseError);
}

TEST_CASE("duplicate keys nested elsewhere are not confused with linear keys") {
    auto file = parse(R"({"num_vars": 2, "linear": {"0": 1.5, "1": -2}, "quadratic": [[0, 1, 3]], "offset": 0.25})");
    CHECK(file.qubo.linear(0) == 1.5);
    CHECK(file.qubo.linear(1) == -2.0);
    CHECK(file.qubo.quadratic(0, 1) == 3.0);
    CHECK(file.qubo.offset() == 0.25);
    CHECK_FALSE(file.indexer.has_value());
}

TEST_CASE("names that do not follow the layout yield no indexer") {
    auto file = parse(R"({"num_vars": 3, "names": ["x:0:0", "x:1:0", "z:0:2:0"], "linear": {}, "quadratic": [],
                          "offset": 0})");
    CHECK_FALSE(file.indexer.has_value());
    auto ok = parse(R"({"num_vars": 3, "names": ["x:0:0", "x:1:0", "z:0:1:0"], "linear": {}, "quadratic": [],
                        "offset": 0})");
    REQUIRE(ok.indexer.has_value());
    CHECK(ok.indexer->pairs() == std::vector<Edge>{{0, 1}});
}
