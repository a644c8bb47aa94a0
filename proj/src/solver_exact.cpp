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

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include <omp.h>

#include "compiled_qubo.hpp"
#include "qembed/error.hpp"
#include "qembed/solver.hpp"

namespace qembed {

namespace {

constexpr double kRelTol = 1e-9;
// Candidates are gathered in a looser window before exact re-evaluation, to
// absorb drift in the incrementally updated energies.
constexpr double kCandidateTol = 1e-7;

double window(double best, double rel) { return rel * std::max(1.0, std::abs(best)); }

void check_size(const Qubo& q) {
    if (q.num_vars() > kMaxExactVars)
        throw SolverError("exact solver refuses " + std::to_string(q.num_vars()) + " variables (limit " +
                          std::to_string(kMaxExactVars) + ")");
}

Assignment decode(std::uint64_t code, std::size_t n) {
    Assignment bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = (code >> i) & 1U;
    return bits;
}

struct Candidates {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::uint64_t> codes;

    void offer(double e, std::uint64_t code, std::size_t cap) {
        if (e < best - window(best, kCandidateTol)) {
            best = e;
            codes.clear();
        }
        if (e <= best + window(best, kCandidateTol) && codes.size() < cap) {
            codes.push_back(code);
            best = std::min(best, e);
        }
    }
};

SampleSet finish(const Qubo& q, std::vector<std::uint64_t> codes, const ExactParams& params, const char* name,
                 std::chrono::steady_clock::time_point start) {
    std::sort(codes.begin(), codes.end());
    std::vector<Sample> samples;
    samples.reserve(codes.size());
    double best = std::numeric_limits<double>::infinity();
    for (auto code : codes) {
        Sample s{decode(code, q.num_vars()), 0.0, 1};
        s.energy = q.energy(s.bits);
        best = std::min(best, s.energy);
        samples.push_back(std::move(s));
    }
    std::erase_if(samples, [&](const Sample& s) { return s.energy > best + window(best, kRelTol); });
    if (samples.size() > params.max_solutions) samples.resize(params.max_solutions);
    SolverMeta meta;
    meta.name = name;
    meta.params = {{"num_vars", std::to_string(q.num_vars())}};
    meta.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return SampleSet::from_samples(q, std::move(samples), std::move(meta));
}

}  // namespace

SampleSet solve_exact(const Qubo& q, const ExactParams& params) {
    check_size(q);
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = q.num_vars();
    const detail::CompiledQubo cq(q);

    // The top `prefix_bits` variables are fixed per chunk; the rest are
    // walked in Gray-code order with O(degree) energy updates.
    const std::size_t prefix_bits = std::min<std::size_t>(n, 6);
    const std::size_t low_bits = n - prefix_bits;
    const auto chunks = static_cast<std::int64_t>(1) << prefix_bits;
    std::vector<Candidates> found(chunks);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t chunk = 0; chunk < chunks; ++chunk) {
        Assignment bits = decode(static_cast<std::uint64_t>(chunk) << low_bits, n);
        std::vector<double> field(n);
        cq.fields(bits.data(), field.data());
        double e = cq.offset;
        for (std::size_t i = 0; i < n; ++i)
            if (bits[i]) {
                e += cq.linear[i];
                for (std::size_t k = cq.row_start[i]; k < cq.row_start[i + 1]; ++k)
                    if (cq.neighbor[k] > i && bits[cq.neighbor[k]]) e += cq.coupling[k];
            }
        std::uint64_t code = static_cast<std::uint64_t>(chunk) << low_bits;
        auto& cand = found[chunk];
        cand.offer(e, code, params.max_solutions);
        for (std::uint64_t step = 1; step < (std::uint64_t{1} << low_bits); ++step) {
            const auto i = static_cast<std::size_t>(std::countr_zero(step));
            e += bits[i] ? -field[i] : field[i];
            bits[i] ^= 1U;
            code ^= std::uint64_t{1} << i;
            cq.apply_flip(i, bits.data(), field.data());
            cand.offer(e, code, params.max_solutions);
        }
    }

    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : found) best = std::min(best, c.best);
    std::vector<std::uint64_t> codes;
    for (const auto& c : found)
        if (c.best <= best + window(best, kCandidateTol)) codes.insert(codes.end(), c.codes.begin(), c.codes.end());
    return finish(q, std::move(codes), params, "exact", start);
}

SampleSet solve_exact_serial(const Qubo& q, const ExactParams& params) {
    check_size(q);
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = q.num_vars();
    Candidates cand;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code)
        cand.offer(q.energy(decode(code, n)), code, params.max_solutions);
    return finish(q, std::move(cand.codes), params, "exact", start);
}

namespace {

constexpr std::size_t kMaxComponent = 16;

std::vector<std::vector<std::size_t>> components(const detail::CompiledQubo& cq, const std::vector<bool>& removed) {
    std::vector<int> label(cq.num_vars, -1);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t s = 0; s < cq.num_vars; ++s) {
        if (removed[s] || label[s] >= 0) continue;
        out.emplace_back();
        std::vector<std::size_t> stack{s};
        label[s] = static_cast<int>(out.size() - 1);
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            out.back().push_back(v);
            for (std::size_t e = cq.row_start[v]; e < cq.row_start[v + 1]; ++e) {
                auto w = cq.neighbor[e];
                if (!removed[w] && label[w] < 0) {
                    label[w] = label[s];
                    stack.push_back(w);
                }
            }
        }
        std::sort(out.back().begin(), out.back().end());
    }
    return out;
}

}  // namespace

SampleSet solve_exact_conditioned(const Qubo& q, const ExactParams& params) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = q.num_vars();
    const detail::CompiledQubo cq(q);

    // Greedy conditioning order: each step removes the variable leaving the
    // cheapest residual enumeration (sum of 2^|component|), ties to the
    // highest residual degree, then the lowest index. The prefix of that
    // order with the lowest total work 2^|cond| * sum 2^|component| wins.
    std::vector<bool> removed(n, false);
    std::vector<std::size_t> order;
    auto residual = [](const std::vector<std::vector<std::size_t>>& cs) {
        double total = 0.0;
        for (const auto& c : cs) total += std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(c.size(), 1000)));
        return total;
    };
    auto comps = components(cq, removed);
    std::size_t best_prefix = 0;
    double best_work = std::numeric_limits<double>::infinity();
    for (;;) {
        const bool small = std::all_of(comps.begin(), comps.end(), [](const auto& c) { return c.size() <= kMaxComponent; });
        const double work = std::ldexp(residual(comps), static_cast<int>(order.size()));
        if (small && work < best_work) {
            best_work = work;
            best_prefix = order.size();
        }
        if (order.size() == kMaxExactVars) break;
        std::size_t pick = n;
        std::size_t pick_degree = 0;
        double pick_cost = 0.0;
        for (const auto& c : comps) {
            if (c.size() < 2) continue;
            for (auto v : c) {
                std::size_t d = 0;
                for (std::size_t e = cq.row_start[v]; e < cq.row_start[v + 1]; ++e) d += !removed[cq.neighbor[e]];
                removed[v] = true;
                const double after = residual(components(cq, removed));
                removed[v] = false;
                if (pick == n || after < pick_cost || (after == pick_cost && d > pick_degree)) {
                    pick = v;
                    pick_degree = d;
                    pick_cost = after;
                }
            }
        }
        if (pick == n) break;
        removed[pick] = true;
        order.push_back(pick);
        comps = components(cq, removed);
    }
    if (!std::isfinite(best_work))
        throw SolverError("conditioned exact solver needs more than " + std::to_string(kMaxExactVars) +
                          " conditioning variables");
    std::vector<std::size_t> cond(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_prefix));
    std::fill(removed.begin(), removed.end(), false);
    for (auto v : cond) removed[v] = true;
    comps = components(cq, removed);
    std::sort(cond.begin(), cond.end());

    // Dense couplings inside each component.
    std::vector<std::vector<double>> inner(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const auto m = comps[c].size();
        inner[c].assign(m * m, 0.0);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b) inner[c][a * m + b] = q.quadratic(comps[c][a], comps[c][b]);
    }

    const auto num_cond = static_cast<std::int64_t>(std::int64_t{1} << cond.size());
    std::vector<double> totals(num_cond);
    std::vector<Assignment> completions(num_cond);

#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t code = 0; code < num_cond; ++code) {
        Assignment bits(n, 0);
        for (std::size_t b = 0; b < cond.size(); ++b) bits[cond[b]] = (code >> b) & 1;
        std::vector<double> field(n);
        cq.fields(bits.data(), field.data());
        // Energy of the conditioning variables alone.
        double e = cq.offset;
        for (auto v : cond)
            if (bits[v]) {
                e += cq.linear[v];
                for (std::size_t k = cq.row_start[v]; k < cq.row_start[v + 1]; ++k)
                    if (cq.neighbor[k] > v && bits[cq.neighbor[k]] && removed[cq.neighbor[k]]) e += cq.coupling[k];
            }
        for (std::size_t ci = 0; ci < comps.size(); ++ci) {
            const auto& comp = comps[ci];
            const auto& mat = inner[ci];
            double comp_best = std::numeric_limits<double>::infinity();
            std::uint64_t best_code = 0;
            for (std::uint64_t c = 0; c < (std::uint64_t{1} << comp.size()); ++c) {
                // Field values already include couplings to conditioned bits,
                // so only pairs inside the component are added here.
                double ce = 0.0;
                for (std::size_t a = 0; a < comp.size(); ++a) {
                    if (!((c >> a) & 1U)) continue;
                    const auto v = comp[a];
                    ce += field[v];
                    for (std::size_t b = a + 1; b < comp.size(); ++b)
                        if ((c >> b) & 1U) ce += mat[a * comp.size() + b];
                }
                if (ce < comp_best) {
                    comp_best = ce;
                    best_code = c;
                }
            }
            e += comp_best;
            for (std::size_t a = 0; a < comp.size(); ++a) bits[comp[a]] = (best_code >> a) & 1U;
        }
        totals[code] = e;
        completions[code] = std::move(bits);
    }

    double best = *std::min_element(totals.begin(), totals.end());
    std::vector<Sample> samples;
    for (std::int64_t code = 0; code < num_cond; ++code)
        if (totals[code] <= best + window(best, kCandidateTol)) samples.push_back({std::move(completions[code]), 0.0, 1});
    for (auto& s : samples) s.energy = q.energy(s.bits);
    double exact_best = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) exact_best = std::min(exact_best, s.energy);
    std::erase_if(samples, [&](const Sample& s) { return s.energy > exact_best + window(exact_best, kRelTol); });
    if (samples.size() > params.max_solutions) samples.resize(params.max_solutions);

    SolverMeta meta;
    meta.name = "exact_conditioned";
    meta.params = {{"num_vars", std::to_string(n)}, {"conditioning_vars", std::to_string(cond.size())}};
    meta.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return SampleSet::from_samples(q, std::move(samples), std::move(meta));
}

}  // namespace qembed
