#pragma once

#include "qkinetic/vec.hpp"

#include <cstdint>
#include <random>

namespace qk {

/// SplitMix64 finalizer, used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Random stream identified by (seed, stream). Streams are assigned per
/// Monte Carlo batch, never per worker thread, so results do not depend on
/// how batches are distributed over threads.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream)
        : engine_(splitmix64(seed ^ splitmix64(stream + 0x5851f42d4c957f2dULL)))
    {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() { return normal_(engine_); }
    int sign() { return uniform() < 0.5 ? -1 : 1; }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

    Vec normal_vec(int dim)
    {
        Vec v(dim);
        for (int i = 0; i < dim; ++i)
            v[i] = normal();
        return v;
    }

    /// Uniform point on S^{d-1} from a normalized Gaussian vector.
    Vec unit_vec(int dim)
    {
        for (;;) {
            Vec v = normal_vec(dim);
            double n = norm(v);
            if (n > 1e-300)
                return v * (1.0 / n);
        }
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace qk
