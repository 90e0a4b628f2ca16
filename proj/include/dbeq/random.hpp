#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dbeq/game.hpp"

namespace dbeq {

// splitmix64 step; used to derive independent stream seeds from one root
// seed so that per-task randomness does not depend on scheduling order.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
    return mix_seed(root ^ mix_seed(stream + 0x51ed2701ab0d3dd7ULL));
}

/**
 * Deterministic uniform double in [0, 1). The standard distributions are
 * implementation-defined, so frozen expected values would not survive a
 * standard-library change; this maps the raw 64-bit stream directly.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double unit() { return double(gen_() >> 11) * 0x1.0p-53; }

    double in(double lo, double hi) { return lo + (hi - lo) * unit(); }

    std::size_t index(std::size_t n) { return std::size_t(gen_() % std::uint64_t(n)); }

private:
    std::mt19937_64 gen_;
};

// Uniform (flat Dirichlet) point of the k-simplex via exponential gaps.
inline MixedStrategy random_mixed(Rng& rng, std::size_t k) {
    std::vector<double> p(k);
    double sum = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        double u = rng.unit();
        p[a] = -std::log1p(-u);
        sum += p[a];
    }
    if (sum <= 0.0) return MixedStrategy::uniform(k);
    for (double& v : p) v /= sum;
    return MixedStrategy::normalized(std::move(p));
}

inline SubProfile random_sub_profile(Rng& rng, const std::vector<std::size_t>& opp_sizes) {
    SubProfile s;
    s.reserve(opp_sizes.size());
    for (std::size_t k : opp_sizes) s.push_back(random_mixed(rng, k));
    return s;
}

// i.i.d. payoffs in [lo, hi); tensors drawn player-major so a given seed
// pins the game exactly.
inline Game random_game(Rng& rng, const std::vector<std::size_t>& shape, double lo = 0.0,
                        double hi = 1.0, std::string name = "") {
    std::size_t total = 1;
    for (std::size_t k : shape) total *= k;
    std::vector<std::vector<double>> payoffs;
    payoffs.reserve(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) {
        std::vector<double> t(total);
        for (double& v : t) v = rng.in(lo, hi);
        payoffs.push_back(std::move(t));
    }
    return Game::from_tensors(shape, std::move(payoffs), std::move(name));
}

} // namespace dbeq
