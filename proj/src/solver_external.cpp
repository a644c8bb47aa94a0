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

#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

#include "json.hpp"
#include "qembed/error.hpp"
#include "qembed/solver.hpp"

namespace qembed {

namespace fs = std::filesystem;

std::string bits_to_string(const Assignment& bits) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s[i] = '1';
    return s;
}

void write_samples(std::ostream& out, const SampleSet& set) {
    nlohmann::ordered_json doc;
    doc["num_vars"] = set.num_vars();
    auto& samples = doc["samples"] = nlohmann::ordered_json::array();
    for (const auto& s : set.samples())
        samples.push_back({{"bits", bits_to_string(s.bits)}, {"energy", s.energy}, {"occurrences", s.occurrences}});
    out << doc.dump(1) << '\n';
}

std::vector<Sample> read_samples(std::istream& in, std::size_t expected_vars) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("samples file: ") + e.what());
    }
    std::vector<Sample> out;
    try {
        if (doc.contains("num_vars") && doc["num_vars"].get<std::size_t>() != expected_vars)
            throw ShapeError("samples file declares " + std::to_string(doc["num_vars"].get<std::size_t>()) +
                             " variables, model has " + std::to_string(expected_vars));
        for (const auto& entry : doc.at("samples")) {
            const auto text = entry.at("bits").get<std::string>();
            if (text.size() != expected_vars)
                throw ShapeError("sample has " + std::to_string(text.size()) + " bits, model has " +
                                 std::to_string(expected_vars));
            Sample s;
            s.bits.resize(text.size());
            for (std::size_t i = 0; i < text.size(); ++i) {
                if (text[i] != '0' && text[i] != '1') throw ParseError("bits must be a string of 0/1");
                s.bits[i] = text[i] == '1';
            }
            s.energy = entry.contains("energy") ? entry["energy"].get<double>() : std::nan("");
            s.occurrences = entry.contains("occurrences") ? entry["occurrences"].get<std::size_t>() : 1;
            out.push_back(std::move(s));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("samples file: ") + e.what());
    }
    return out;
}

SampleSet solve_external(const Qubo& q, const VarIndexer* idx, const ExternalOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    fs::path samples_path;
    if (options.samples_file) {
        samples_path = *options.samples_file;
    } else {
        if (options.exchange_dir.empty()) throw SolverError("external solver: no exchange directory");
        fs::create_directories(options.exchange_dir);
        samples_path = options.exchange_dir / kSamplesFileName;
        fs::remove(samples_path);  // never pick up a previous answer
        const auto problem = options.exchange_dir / kProblemFileName;
        const auto staging = options.exchange_dir / (std::string(kProblemFileName) + ".tmp");
        {
            std::ofstream out(staging);
            if (!out) throw SolverError("external solver: cannot write " + staging.string());
            export_qubo(out, q, idx);
        }
        fs::rename(staging, problem);
        while (!fs::exists(samples_path)) {
            if (std::chrono::steady_clock::now() - start > options.timeout)
                throw SolverError("external solver: timed out waiting for " + samples_path.string());
            std::this_thread::sleep_for(options.poll_interval);
        }
    }

    std::ifstream in(samples_path);
    if (!in) throw SolverError("external solver: cannot open " + samples_path.string());
    auto samples = read_samples(in, q.num_vars());
    if (samples.empty()) throw SolverError("external solver: samples file holds no samples");

    std::size_t discrepancies = 0;
    for (const auto& s : samples) {
        const double recomputed = q.energy(s.bits);
        if (!std::isnan(s.energy) && std::abs(s.energy - recomputed) > 1e-9 * std::max(1.0, std::abs(recomputed))) {
            ++discrepancies;
            std::clog << "warning: external sample " << bits_to_string(s.bits) << " reports energy " << s.energy
                      << ", recomputed " << recomputed << '\n';
        }
    }
    SolverMeta meta;
    meta.name = "external";
    meta.params = {{"samples_file", samples_path.string()}, {"energy_discrepancies", std::to_string(discrepancies)}};
    meta.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return SampleSet::from_samples(q, std::move(samples), std::move(meta));
}

}  // namespace qembed
