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

#include "qembed/eval.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "qembed/error.hpp"

namespace qembed {

int Embedding::dot(Node x, Node y) const {
    int d = 0;
    const auto* a = bits.data() + static_cast<std::size_t>(x) * k;
    const auto* b = bits.data() + static_cast<std::size_t>(y) * k;
    for (int i = 0; i < k; ++i) d += a[i] & b[i];
    return d;
}

EmbeddingResult decode(std::span<const std::uint8_t> bits, const VarIndexer& idx) {
    if (bits.size() != idx.num_vars())
        throw ShapeError("decode: assignment has " + std::to_string(bits.size()) + " bits, indexer expects " +
                         std::to_string(idx.num_vars()));
    EmbeddingResult r;
    r.vectors = Embedding(idx.num_nodes(), idx.dim());
    std::copy_n(bits.begin(), r.vectors.bits.size(), r.vectors.bits.begin());
    for (std::size_t j = 0; j < idx.num_pairs(); ++j) {
        auto [x, y] = idx.pairs()[j];
        for (int i = 0; i < idx.dim(); ++i) {
            const int product = bits[idx.embedding_var(x, i)] & bits[idx.embedding_var(y, i)];
            if (bits[idx.aux_var(j, i)] != product) ++r.violations;
        }
    }
    return r;
}

double embedding_objective(const Embedding& emb, const SimilarityMap& sim, const BuilderParams& params,
                           bool include_zeros) {
    double obj = 0.0;
    for (const auto& p : sim.nonzero) {
        const double r = emb.scaled_dot(p.x, p.y) - p.score;
        obj += params.alpha * params.weight(p.x, p.y) * r * r;
    }
    if (include_zeros && !sim.zero_pairs.empty()) {
        long long dots = 0;
        for (auto [x, y] : sim.zero_pairs) dots += emb.dot(x, y);
        obj += params.beta * static_cast<double>(dots) / emb.k;
    }
    return obj;
}

PairError embedding_error(const Embedding& emb, const SimilarityMap& sim, bool include_zeros) {
    if (emb.n != sim.n) throw ShapeError("embedding_error: embedding and similarity map disagree on n");
    PairError e;
    double sq = 0.0, abs_sum = 0.0;
    auto add = [&](double r) {
        sq += r * r;
        abs_sum += std::abs(r);
        ++e.pairs;
    };
    if (!include_zeros) {
        for (const auto& p : sim.nonzero) add(emb.scaled_dot(p.x, p.y) - p.score);
    } else {
        // Walk all pairs in order, merging the sorted nonzero list.
        auto it = sim.nonzero.begin();
        for (Node x = 0; x < emb.n; ++x)
            for (Node y = x + 1; y < emb.n; ++y) {
                double s = 0.0;
                if (it != sim.nonzero.end() && it->x == x && it->y == y) s = (it++)->score;
                add(emb.scaled_dot(x, y) - s);
            }
    }
    if (e.pairs) {
        e.mse = sq / static_cast<double>(e.pairs);
        e.mae = abs_sum / static_cast<double>(e.pairs);
    }
    return e;
}

ErrorMetrics error_metrics(const Embedding& emb, const SimilarityMap& sim) {
    auto all = embedding_error(emb, sim, true);
    return {embedding_error(emb, sim, false).mse, all.mse, all.mae};
}

EmbeddingResult evaluate(std::span<const std::uint8_t> bits, const VarIndexer& idx, const SimilarityMap& sim,
                         const BuilderParams& params) {
    auto r = decode(bits, idx);
    r.objective = embedding_objective(r.vectors, sim, params);
    r.metrics = error_metrics(r.vectors, sim);
    return r;
}

BruteForceResult brute_force_embedding(const SimilarityMap& sim, int k, bool include_zeros,
                                       const BuilderParams& params) {
    if (k < 1) throw std::invalid_argument("brute_force_embedding: k must be positive");
    const long long total_bits = static_cast<long long>(sim.n) * k;
    if (total_bits > kMaxBruteForceBits)
        throw std::invalid_argument("brute_force_embedding: n*k = " + std::to_string(total_bits) + " exceeds " +
                                    std::to_string(kMaxBruteForceBits));
    const std::uint32_t mask = (1U << k) - 1;
    const double kd = k;

    struct Term {
        int x_shift, y_shift;
        double score, weight;
    };
    std::vector<Term> terms;
    for (const auto& p : sim.nonzero)
        terms.push_back({p.x * k, p.y * k, p.score, params.alpha * params.weight(p.x, p.y)});
    std::vector<std::pair<int, int>> zeros;
    if (include_zeros)
        for (auto [x, y] : sim.zero_pairs) zeros.emplace_back(x * k, y * k);

    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_code = 0;
    for (std::uint32_t code = 0; code < (std::uint32_t{1} << total_bits); ++code) {
        double obj = 0.0;
        for (const auto& t : terms) {
            const int d = std::popcount(((code >> t.x_shift) & (code >> t.y_shift)) & mask);
            const double r = d / kd - t.score;
            obj += t.weight * r * r;
        }
        if (!zeros.empty()) {
            int dots = 0;
            for (auto [xs, ys] : zeros) dots += std::popcount(((code >> xs) & (code >> ys)) & mask);
            obj += params.beta * dots / kd;
        }
        if (obj < best) {
            best = obj;
            best_code = code;
        }
    }
    BruteForceResult r{Embedding(sim.n, k), best};
    for (long long b = 0; b < total_bits; ++b) r.vectors.bits[b] = (best_code >> b) & 1U;
    return r;
}

Selection select_best(const SampleSet& set, const VarIndexer& idx, const SimilarityMap& sim,
                      const BuilderParams& params) {
    const double ground = set.best().energy;
    const double tol = 1e-9 * std::max(1.0, std::abs(ground));
    Selection pick;
    for (const auto& s : set.samples()) {
        if (s.energy > ground + tol) break;
        auto r = evaluate(s.bits, idx, sim, params);
        if (!pick.sample || r.violations < pick.result.violations ||
            (r.violations == pick.result.violations && r.objective < pick.result.objective)) {
            pick.sample = &s;
            pick.result = std::move(r);
        }
    }
    return pick;
}

void write_embedding(std::ostream& out, const Embedding& emb) {
    nlohmann::ordered_json doc;
    doc["k"] = emb.k;
    auto& vectors = doc["vectors"] = nlohmann::ordered_json::object();
    for (Node x = 0; x < emb.n; ++x) {
        std::string s;
        for (auto b : emb.vector(x)) s += b ? '1' : '0';
        vectors[std::to_string(x)] = s;
    }
    out << doc.dump(1) << '\n';
}

}  // namespace qembed
