#pragma once

#include "qkinetic/parallel.hpp"
#include "qkinetic/rng.hpp"
#include "qkinetic/stats.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace qk {

/// Sample count and seed of one Monte Carlo estimate. The stream tag keeps
/// estimates that share a seed statistically independent.
struct McBudget {
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;

    McBudget with_stream(std::uint64_t s) const { return {samples, seed, s}; }
    McBudget with_samples(std::size_t n) const { return {n, seed, stream}; }
};

inline constexpr std::size_t kMcBatch = 2048;

/// Mean of `width` jointly sampled observables. sample(rng, out) fills
/// out[0..width). Batches have fixed size and their own stream, so the
/// result does not depend on the worker count.
template <class Fn>
std::vector<Estimate> monte_carlo_multi(const McBudget& budget, std::size_t width, Fn&& sample)
{
    std::size_t n_batches = (budget.samples + kMcBatch - 1) / kMcBatch;
    auto parts = run_batches<std::vector<Accumulator>>(n_batches, [&](std::size_t b) {
        Rng rng(budget.seed, (budget.stream << 32) ^ b);
        std::vector<Accumulator> acc(width);
        std::vector<double> out(width);
        std::size_t count = std::min(kMcBatch, budget.samples - b * kMcBatch);
        for (std::size_t i = 0; i < count; ++i) {
            std::fill(out.begin(), out.end(), 0.0);
            sample(rng, out);
            for (std::size_t k = 0; k < width; ++k)
                acc[k].add(out[k]);
        }
        return acc;
    });
    std::vector<Accumulator> total(width);
    for (const auto& p : parts)
        for (std::size_t k = 0; k < width; ++k)
            total[k].merge(p[k]);
    std::vector<Estimate> est;
    for (const auto& a : total)
        est.push_back(a.estimate());
    return est;
}

template <class Fn>
Estimate monte_carlo(const McBudget& budget, Fn&& sample)
{
    return monte_carlo_multi(budget, 1, [&](Rng& rng, std::vector<double>& out) { out[0] = sample(rng); })[0];
}

} // namespace qk
