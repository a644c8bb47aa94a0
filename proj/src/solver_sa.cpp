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
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <omp.h>

#include "compiled_qubo.hpp"
#include "qembed/error.hpp"
#include "qembed/rng.hpp"
#include "qembed/solver.hpp"

namespace qembed {

const Sample& SampleSet::best() const {
    if (samples_.empty()) throw SolverError("SampleSet::best on an empty sample set");
    return samples_.front();
}

SampleSet SampleSet::from_samples(const Qubo& q, std::vector<Sample> samples, SolverMeta meta) {
    SampleSet set;
    set.num_vars_ = q.num_vars();
    set.meta_ = std::move(meta);
    for (auto& s : samples) s.energy = q.energy(s.bits);
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.bits < b.bits; });
    for (auto& s : samples) {
        if (!set.samples_.empty() && set.samples_.back().bits == s.bits)
            set.samples_.back().occurrences += s.occurrences;
        else
            set.samples_.push_back(std::move(s));
    }
    std::stable_sort(set.samples_.begin(), set.samples_.end(),
                     [](const Sample& a, const Sample& b) { return a.energy < b.energy; });
    return set;
}

SampleSet SampleSet::from_reads(const Qubo& q, std::vector<Assignment> reads, SolverMeta meta) {
    std::vector<Sample> samples;
    samples.reserve(reads.size());
    for (auto& r : reads) samples.push_back({std::move(r), 0.0, 1});
    return from_samples(q, std::move(samples), std::move(meta));
}

void SaParams::validate() const {
    if (num_reads < 1) throw std::invalid_argument("SaParams: num_reads must be >= 1");
    if (num_sweeps < 1) throw std::invalid_argument("SaParams: num_sweeps must be >= 1");
    if (beta_range) {
        auto [hot, cold] = *beta_range;
        if (!std::isfinite(hot) || !std::isfinite(cold) || hot <= 0 || !(hot < cold))
            throw std::invalid_argument("SaParams: need finite 0 < beta_hot < beta_cold");
    }
}

std::pair<double, double> default_beta_range(const Qubo& q) {
    std::vector<double> bound(q.num_vars(), 0.0);
    double min_coeff = std::numeric_limits<double>::infinity();
    for (auto [i, c] : q.linear()) {
        bound[i] += std::abs(c);
        min_coeff = std::min(min_coeff, std::abs(c));
    }
    for (const auto& [key, c] : q.quadratic()) {
        bound[key.first] += std::abs(c);
        bound[key.second] += std::abs(c);
        min_coeff = std::min(min_coeff, std::abs(c));
    }
    double max_delta = 0.0;
    for (double b : bound) max_delta = std::max(max_delta, b);
    if (max_delta == 0.0) return {0.1, 1.0};  // flat landscape
    return {std::log(2.0) / max_delta, std::log(1000.0) / min_coeff};
}

namespace {

// Beyond this beta*dE the acceptance probability is below 2^-64.
constexpr double kMaxExponent = 44.36;

std::vector<double> geometric_schedule(double hot, double cold, std::size_t sweeps) {
    std::vector<double> betas(sweeps);
    if (sweeps == 1) {
        betas[0] = cold;
        return betas;
    }
    const double ratio = cold / hot;
    for (std::size_t s = 0; s < sweeps; ++s)
        betas[s] = hot * std::pow(ratio, static_cast<double>(s) / static_cast<double>(sweeps - 1));
    return betas;
}

Assignment anneal_read(const detail::CompiledQubo& cq, const std::vector<double>& betas, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = cq.num_vars;
    Assignment bits(n);
    for (std::size_t i = 0; i < n; i += 64) {
        std::uint64_t word = rng();
        for (std::size_t b = 0; b < 64 && i + b < n; ++b) bits[i + b] = (word >> b) & 1U;
    }
    std::vector<double> field(n);
    cq.fields(bits.data(), field.data());

    for (double beta : betas) {
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = bits[i] ? -field[i] : field[i];
            bool flip = delta <= 0.0;
            if (!flip) {
                const double x = beta * delta;
                flip = x < kMaxExponent && uniform01(rng) < std::exp(-x);
            }
            if (flip) {
                bits[i] ^= 1U;
                cq.apply_flip(i, bits.data(), field.data());
            }
        }
    }
    return bits;
}

struct SaSetup {
    detail::CompiledQubo compiled;
    std::vector<double> betas;
    SolverMeta meta;
};

SaSetup prepare(const Qubo& q, const SaParams& p, const char* name) {
    p.validate();
    auto [hot, cold] = p.beta_range.value_or(default_beta_range(q));
    SaSetup s{detail::CompiledQubo(q), geometric_schedule(hot, cold, p.num_sweeps), {}};
    s.meta.name = name;
    s.meta.seed = p.seed;
    s.meta.params = {{"num_reads", std::to_string(p.num_reads)},
                     {"num_sweeps", std::to_string(p.num_sweeps)},
                     {"beta_hot", std::to_string(hot)},
                     {"beta_cold", std::to_string(cold)}};
    return s;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SampleSet solve_sa(const Qubo& q, const SaParams& params) {
    const auto start = std::chrono::steady_clock::now();
    auto setup = prepare(q, params, "sa");
    std::vector<Assignment> reads(params.num_reads);
    const auto num_reads = static_cast<std::int64_t>(params.num_reads);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t r = 0; r < num_reads; ++r)
        reads[r] = anneal_read(setup.compiled, setup.betas, derive_seed(params.seed, {static_cast<std::uint64_t>(r)}));
    setup.meta.wall_ms = elapsed_ms(start);
    return SampleSet::from_reads(q, std::move(reads), std::move(setup.meta));
}

SampleSet solve_sa_serial(const Qubo& q, const SaParams& params) {
    const auto start = std::chrono::steady_clock::now();
    auto setup = prepare(q, params, "sa");
    std::vector<Assignment> reads;
    reads.reserve(params.num_reads);
    for (std::size_t r = 0; r < params.num_reads; ++r)
        reads.push_back(anneal_read(setup.compiled, setup.betas, derive_seed(params.seed, {r})));
    setup.meta.wall_ms = elapsed_ms(start);
    return SampleSet::from_reads(q, std::move(reads), std::move(setup.meta));
}

}  // namespace qembed
