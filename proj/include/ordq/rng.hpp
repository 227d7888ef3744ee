#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace ordq {

/// splitmix64 finalizer; used to derive well-separated seeds for substreams.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for substream `idx` of the stream identified by `seed`.
/// Simulation results must depend only on (inputs, seed, draws), never on
/// scheduling, so every independent unit of work gets its own substream.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t idx) {
    return mix64(seed ^ mix64(idx));
}

inline std::uint64_t substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return substream(substream(seed, a), b);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// One multinomial draw as per-category counts, by chained binomials.
inline std::vector<std::int64_t> sample_multinomial(Rng& rng, std::int64_t n,
                                                    const std::vector<double>& probs) {
    std::vector<std::int64_t> counts(probs.size(), 0);
    double mass_left = 1.0;
    std::int64_t n_left = n;
    for (std::size_t j = 0; j + 1 < probs.size() && n_left > 0; ++j) {
        double p = (mass_left > 0.0) ? probs[j] / mass_left : 0.0;
        if (p > 1.0) p = 1.0;
        if (p < 0.0) p = 0.0;
        std::binomial_distribution<std::int64_t> bin(n_left, p);
        counts[j] = bin(rng);
        n_left -= counts[j];
        mass_left -= probs[j];
    }
    if (!counts.empty()) counts.back() += n_left;
    return counts;
}

/// One Dirichlet(alpha) draw via normalized gammas.
inline std::vector<double> sample_dirichlet(Rng& rng, const std::vector<double>& alpha) {
    std::vector<double> draw(alpha.size());
    double total = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] <= 0.0) {
            // Degenerate concentration: category gets exactly zero mass.
            draw[i] = 0.0;
            continue;
        }
        std::gamma_distribution<double> g(alpha[i], 1.0);
        draw[i] = g(rng);
        total += draw[i];
    }
    if (total <= 0.0) {
        throw std::runtime_error("sample_dirichlet: all concentrations degenerate");
    }
    for (double& v : draw) v /= total;
    return draw;
}

} // namespace ordq
