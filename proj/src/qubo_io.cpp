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

#include <charconv>
#include <fstream>
#include <set>
#include <string_view>

#include "json.hpp"
#include "qembed/error.hpp"
#include "qembed/qubo.hpp"

namespace qembed {

using ojson = nlohmann::ordered_json;

void export_qubo(std::ostream& out, const Qubo& q, const VarIndexer* idx) {
    if (idx && idx->num_vars() != q.num_vars()) throw ShapeError("export_qubo: indexer does not match the model");
    ojson doc;
    doc["num_vars"] = q.num_vars();
    auto& names = doc["names"] = ojson::array();
    for (VarId v = 0; v < q.num_vars(); ++v) names.push_back(idx ? idx->name(v) : "q:" + std::to_string(v));
    auto& linear = doc["linear"] = ojson::object();
    for (auto [i, c] : q.linear()) linear[std::to_string(i)] = c;
    auto& quadratic = doc["quadratic"] = ojson::array();
    for (const auto& [key, c] : q.quadratic()) quadratic.push_back({key.first, key.second, c});
    doc["offset"] = q.offset();
    out << doc.dump(1) << '\n';
}

namespace {

std::optional<long long> parse_int(std::string_view s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

// Rebuilds the embedding layout from variable names, or nullopt when the
// names do not describe one.
std::optional<VarIndexer> indexer_from_names(const std::vector<std::string>& names) {
    long long n = 0, k = 0;
    std::size_t first_aux = names.size();
    for (std::size_t v = 0; v < names.size(); ++v) {
        auto parts = split(names[v], ':');
        if (parts.size() == 4 && parts[0] == "z") {
            first_aux = v;
            break;
        }
        if (parts.size() != 3 || parts[0] != "x") return std::nullopt;
        auto node = parse_int(parts[1]);
        auto dim = parse_int(parts[2]);
        if (!node || !dim) return std::nullopt;
        n = std::max(n, *node + 1);
        k = std::max(k, *dim + 1);
    }
    if (k < 1 || static_cast<std::size_t>(n * k) != first_aux || (names.size() - first_aux) % k != 0)
        return std::nullopt;
    std::vector<Edge> pairs;
    for (std::size_t v = first_aux; v < names.size(); v += k) {
        auto parts = split(names[v], ':');
        if (parts.size() != 4 || parts[0] != "z") return std::nullopt;
        auto x = parse_int(parts[1]);
        auto y = parse_int(parts[2]);
        if (!x || !y) return std::nullopt;
        pairs.emplace_back(static_cast<Node>(*x), static_cast<Node>(*y));
    }
    VarIndexer idx;
    try {
        idx = VarIndexer(static_cast<int>(n), static_cast<int>(k), std::move(pairs));
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
    for (std::size_t v = 0; v < names.size(); ++v)
        if (idx.name(v) != names[v]) return std::nullopt;
    return idx;
}

}  // namespace

QuboFile import_qubo(std::istream& in) {
    // nlohmann silently keeps the last of duplicate object keys, so linear
    // keys are checked while parsing.
    std::set<std::string> linear_keys;
    std::string duplicate;
    int linear_depth = -1;
    bool next_is_linear = false;
    auto callback = [&](int depth, nlohmann::json::parse_event_t event, nlohmann::json& parsed) {
        using E = nlohmann::json::parse_event_t;
        if (event == E::key) {
            if (depth == 1) next_is_linear = parsed == "linear";
            if (depth == linear_depth + 1 && linear_depth >= 0) {
                auto key = parsed.get<std::string>();
                if (!linear_keys.insert(key).second && duplicate.empty()) duplicate = "linear key " + key;
            }
        } else if (event == E::object_start && depth == 1 && next_is_linear) {
            linear_depth = depth;
            next_is_linear = false;
        } else if (event == E::object_end && depth == linear_depth) {
            linear_depth = -1;
        }
        return true;
    };

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in, callback);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!duplicate.empty()) throw ParseError("duplicate " + duplicate);
    if (!doc.is_object()) throw ParseError("QUBO file must be an object");

    try {
        const auto num_vars = doc.at("num_vars").get<std::size_t>();
        Qubo q(num_vars);
        auto bad_index = [&](long long i) { return i < 0 || static_cast<std::size_t>(i) >= num_vars; };

        if (doc.contains("linear")) {
            for (const auto& [key, value] : doc["linear"].items()) {
                auto i = parse_int(key);
                if (!i || bad_index(*i)) throw ParseError("bad linear index '" + key + "'");
                q.add_linear(static_cast<VarId>(*i), value.get<double>());
            }
        }
        std::set<Qubo::QuadKey> seen;
        if (doc.contains("quadratic")) {
            for (const auto& term : doc["quadratic"]) {
                if (!term.is_array() || term.size() != 3) throw ParseError("quadratic entries must be [i, j, coeff]");
                auto i = term[0].get<long long>();
                auto j = term[1].get<long long>();
                if (bad_index(i) || bad_index(j)) throw ParseError("quadratic index out of range");
                if (i == j) throw ParseError("diagonal quadratic key [" + std::to_string(i) + "," + std::to_string(j) + "]");
                Qubo::QuadKey key{static_cast<VarId>(std::min(i, j)), static_cast<VarId>(std::max(i, j))};
                if (!seen.insert(key).second)
                    throw ParseError("duplicate quadratic key [" + std::to_string(key.first) + "," +
                                     std::to_string(key.second) + "]");
                q.add_quadratic(key.first, key.second, term[2].get<double>());
            }
        }
        if (doc.contains("offset")) q.add_offset(doc["offset"].get<double>());

        QuboFile file{std::move(q), std::nullopt};
        if (doc.contains("names")) {
            auto names = doc["names"].get<std::vector<std::string>>();
            if (names.size() != num_vars) throw ParseError("names list length differs from num_vars");
            file.indexer = indexer_from_names(names);
        }
        return file;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
}

void save_qubo(const std::string& path, const Qubo& q, const VarIndexer* idx) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    export_qubo(out, q, idx);
}

QuboFile load_qubo(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return import_qubo(in);
}

}  // namespace qembed
