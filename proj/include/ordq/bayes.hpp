#pragma once

#include "ordq/rng.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ordq {

enum class BayesEvent { Sd1XY, Sd1YX, ScXY, ScYX };
enum class BayesCall { Support, Reject, Inconclusive };

/// Posterior sampler settings. prior = 1 is the uniform Dirichlet prior;
/// improper_prior switches to the Dirichlet(eps) limit, which puts zero
/// posterior mass on unobserved categories (the zero-count guard avoids
/// numerically unstable gamma draws with shape ~1e-10).
struct PosteriorConfig {
    std::int64_t draws = 10000;
    std::uint64_t seed = 1;
    bool improper_prior = false;
    double improper_epsilon = 1e-10;

    void validate() const {
        if (draws < 1000)
            throw std::invalid_argument("PosteriorConfig: draws must be >= 1000");
    }
};

namespace detail {

inline void validate_counts(const std::vector<std::int64_t>& counts) {
    if (counts.size() < 2)
        throw std::invalid_argument("posterior_prob: need at least two categories");
    std::int64_t total = 0;
    for (std::int64_t c : counts) {
        if (c < 0) throw std::invalid_argument("posterior_prob: negative count");
        total += c;
    }
    if (total < 1)
        throw std::invalid_argument("posterior_prob: total count must be >= 1");
}

inline std::vector<double> posterior_alpha(const std::vector<std::int64_t>& counts,
                                           const PosteriorConfig& cfg) {
    std::vector<double> alpha(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (cfg.improper_prior)
            alpha[i] = (counts[i] > 0)
                           ? static_cast<double>(counts[i]) + cfg.improper_epsilon
                           : 0.0;
        else
            alpha[i] = 1.0 + static_cast<double>(counts[i]);
    }
    return alpha;
}

/// CDF differences theta_j = F_X(j) - F_Y(j), j = 1..J-1, from two
/// probability vectors.
inline void cdf_diffs(const std::vector<double>& px, const std::vector<double>& py,
                      std::vector<double>& theta) {
    double fx = 0.0, fy = 0.0;
    for (std::size_t j = 0; j + 1 < px.size(); ++j) {
        fx += px[j];
        fy += py[j];
        theta[j] = fx - fy;
    }
}

inline bool holds_sd1(const std::vector<double>& theta, double sign) {
    for (double t : theta)
        if (sign * t > 0.0) return false;
    return true;
}

/// Single crossing with strict inequalities: a nonempty strict-negative
/// prefix followed by a nonempty strict-positive suffix.
inline bool holds_sc(const std::vector<double>& theta, double sign) {
    std::size_t i = 0;
    while (i < theta.size() && sign * theta[i] < 0.0) ++i;
    if (i == 0 || i == theta.size()) return false;
    for (; i < theta.size(); ++i)
        if (!(sign * theta[i] > 0.0)) return false;
    return true;
}

} // namespace detail

/// Posterior probability of an ordinal relationship under independent
/// Dirichlet-multinomial models for the two groups: the fraction of
/// posterior draws in which the relationship holds. Deterministic given
/// (counts, seed, draws). Weighted data must be converted to integer
/// counts upstream.
inline double posterior_prob(const std::vector<std::int64_t>& counts_x,
                             const std::vector<std::int64_t>& counts_y,
                             BayesEvent event, const PosteriorConfig& cfg) {
    cfg.validate();
    detail::validate_counts(counts_x);
    detail::validate_counts(counts_y);
    if (counts_x.size() != counts_y.size())
        throw std::invalid_argument("posterior_prob: category counts differ");
    const std::size_t J = counts_x.size();
    if ((event == BayesEvent::ScXY || event == BayesEvent::ScYX) && J < 3)
        throw std::invalid_argument("posterior_prob: single crossing needs J >= 3");

    const std::vector<double> ax = detail::posterior_alpha(counts_x, cfg);
    const std::vector<double> ay = detail::posterior_alpha(counts_y, cfg);
    Rng rng_x = make_rng(substream(cfg.seed, 0));
    Rng rng_y = make_rng(substream(cfg.seed, 1));

    std::vector<double> theta(J - 1);
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < cfg.draws; ++s) {
        const std::vector<double> px = sample_dirichlet(rng_x, ax);
        const std::vector<double> py = sample_dirichlet(rng_y, ay);
        detail::cdf_diffs(px, py, theta);
        bool holds = false;
        switch (event) {
            case BayesEvent::Sd1XY: holds = detail::holds_sd1(theta, +1.0); break;
            case BayesEvent::Sd1YX: holds = detail::holds_sd1(theta, -1.0); break;
            case BayesEvent::ScXY: holds = detail::holds_sc(theta, +1.0); break;
            case BayesEvent::ScYX: holds = detail::holds_sc(theta, -1.0); break;
        }
        if (holds) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(cfg.draws);
}

/// Empirical reporting convention: support when the posterior probability
/// exceeds 1-alpha, reject when it falls below alpha.
inline BayesCall bayes_decision(double prob, double alpha) {
    if (!(prob > 0.0 && prob < 1.0) && !(prob == 0.0 || prob == 1.0))
        throw std::invalid_argument("bayes_decision: prob must lie in [0, 1]");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("bayes_decision: alpha must lie in (0, 1)");
    if (prob > 1.0 - alpha) return BayesCall::Support;
    if (prob < alpha) return BayesCall::Reject;
    return BayesCall::Inconclusive;
}

} // namespace ordq
