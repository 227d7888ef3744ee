#pragma once

#include "ordq/math.hpp"
#include "ordq/ordinal.hpp"
#include "ordq/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ordq {

enum class Stat { Min, Max, MaxAbs, MaxSigned };

/// Settings for simulating quantiles of functionals of correlated standard
/// normals. `signs` is consulted only for Stat::MaxSigned.
struct SimConfig {
    std::int64_t draws = 100000;
    std::uint64_t seed = 1;
    Stat stat = Stat::Min;
    std::vector<int> signs;

    void validate() const {
        if (draws < 1000) throw std::invalid_argument("SimConfig: draws must be >= 1000");
        if (stat == Stat::MaxSigned) {
            for (int s : signs)
                if (s != 1 && s != -1)
                    throw std::invalid_argument("SimConfig: signs must be +1 or -1");
        }
    }

    SimConfig with(Stat s, std::uint64_t sd) const {
        SimConfig c = *this;
        c.stat = s;
        c.seed = sd;
        c.signs.clear();
        return c;
    }
};

struct Correlation {
    Eigen::MatrixXd R;        // correlation of the nondegenerate components
    std::vector<int> kept;    // 1-based component indices retained
    std::vector<int> dropped; // 1-based components with zero variance
};

/// Correlation matrix of Sigma. Zero-variance rows/columns are dropped and
/// reported; the matching confidence limits are degenerate with coverage 1,
/// so they never need a simulated critical value.
inline Correlation correlation_from_sigma(const Eigen::MatrixXd& Sigma,
                                          double psd_tol = 1e-8) {
    if (Sigma.rows() != Sigma.cols())
        throw std::invalid_argument("correlation_from_sigma: matrix not square");
    const Eigen::Index d = Sigma.rows();
    if ((Sigma - Sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("correlation_from_sigma: matrix not symmetric");
    Correlation out;
    for (Eigen::Index j = 0; j < d; ++j) {
        if (Sigma(j, j) > 0.0)
            out.kept.push_back(static_cast<int>(j) + 1);
        else
            out.dropped.push_back(static_cast<int>(j) + 1);
    }
    const Eigen::Index m = static_cast<Eigen::Index>(out.kept.size());
    out.R.resize(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) {
            const Eigen::Index ja = out.kept[static_cast<std::size_t>(a)] - 1;
            const Eigen::Index jb = out.kept[static_cast<std::size_t>(b)] - 1;
            out.R(a, b) = Sigma(ja, jb) / std::sqrt(Sigma(ja, ja) * Sigma(jb, jb));
        }
    }
    if (m > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.R,
                                                          Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -psd_tol)
            throw std::invalid_argument(
                "correlation_from_sigma: matrix not positive semidefinite");
    }
    return out;
}

/// Cholesky factor of a correlation matrix, escalating the diagonal jitter
/// through 1e-10, 1e-8, 1e-6 on numerically semidefinite inputs.
inline Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& R) {
    static constexpr double jitters[] = {0.0, 1e-10, 1e-8, 1e-6};
    for (double jitter : jitters) {
        Eigen::MatrixXd M = R;
        M.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(M);
        if (llt.info() == Eigen::Success) return llt.matrixL();
    }
    throw std::runtime_error("cholesky_with_jitter: factorization failed");
}

namespace detail {

inline double apply_stat(const Eigen::VectorXd& v, Stat stat,
                         const std::vector<int>& signs) {
    switch (stat) {
        case Stat::Min:
            return v.minCoeff();
        case Stat::Max:
            return v.maxCoeff();
        case Stat::MaxAbs:
            return v.cwiseAbs().maxCoeff();
        case Stat::MaxSigned: {
            double best = -std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < v.size(); ++i)
                best = std::max(best, signs[static_cast<std::size_t>(i)] * v[i]);
            return best;
        }
    }
    throw std::logic_error("apply_stat: unknown statistic");
}

/// Empirical p-quantile by the inverse-ECDF convention, x_(ceil(p*n)).
inline double empirical_quantile(std::vector<double>& draws, double p) {
    const auto n = static_cast<std::int64_t>(draws.size());
    auto idx = static_cast<std::int64_t>(std::ceil(p * static_cast<double>(n))) - 1;
    idx = std::clamp<std::int64_t>(idx, 0, n - 1);
    std::nth_element(draws.begin(), draws.begin() + idx, draws.end());
    return draws[static_cast<std::size_t>(idx)];
}

} // namespace detail

/// Empirical p-quantile of the configured statistic of Z ~ N(0, R), on the
/// t-statistic scale. Deterministic given (R, cfg, p).
inline double simulate_stat_quantile(const Eigen::MatrixXd& R, const SimConfig& cfg,
                                     double p) {
    cfg.validate();
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("simulate_stat_quantile: p must lie in (0, 1)");
    const Eigen::Index d = R.rows();
    if (d == 0)
        throw std::invalid_argument("simulate_stat_quantile: empty correlation matrix");
    if (cfg.stat == Stat::MaxSigned &&
        static_cast<Eigen::Index>(cfg.signs.size()) != d)
        throw std::invalid_argument("simulate_stat_quantile: signs/dimension mismatch");
    const Eigen::MatrixXd L = cholesky_with_jitter(R);
    Rng rng = make_rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> stats(static_cast<std::size_t>(cfg.draws));
    Eigen::VectorXd z(d);
    for (std::int64_t i = 0; i < cfg.draws; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) z[j] = normal(rng);
        const Eigen::VectorXd v = L * z;
        stats[static_cast<std::size_t>(i)] = detail::apply_stat(v, cfg.stat, cfg.signs);
    }
    return detail::empirical_quantile(stats, p);
}

/// Same quantile mapped through the standard normal CDF, i.e. the empirical
/// p-quantile of Phi(statistic). Phi is strictly increasing, so the two
/// quantiles commute.
inline double simulate_phi_quantile(const Eigen::MatrixXd& R, const SimConfig& cfg,
                                    double p) {
    return norm_cdf(simulate_stat_quantile(R, cfg, p));
}

/// Simulated critical values for one inner-confidence-set construction.
/// `z_x`/`z_y` are the multipliers actually applied to the standard errors;
/// they are 0 when every component on that side is degenerate (the limits
/// are then exact and the tilde level is reported as NaN).
struct CritValues {
    double tilde_alpha = std::numeric_limits<double>::quiet_NaN();
    double tilde_beta = std::numeric_limits<double>::quiet_NaN();
    double z_x = 0.0;
    double z_y = 0.0;
    std::vector<int> dropped_x;
    std::vector<int> dropped_y;
};

/// One-sided joint limits: upper for the X CDF (min statistic at level
/// 1 - sqrt(1-alpha)) and lower for the Y CDF (max statistic at sqrt(1-alpha)).
inline CritValues critvals_method1(const OrdinalCdf& x, const OrdinalCdf& y,
                                   double alpha, const SimConfig& cfg) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("critvals_method1: alpha must lie in (0, 1)");
    const double root = std::sqrt(1.0 - alpha);
    CritValues cv;
    const Correlation cx = correlation_from_sigma(x.Sigma);
    cv.dropped_x = cx.dropped;
    if (cx.R.rows() > 0) {
        const double t = simulate_stat_quantile(
            cx.R, cfg.with(Stat::Min, substream(cfg.seed, 0)), 1.0 - root);
        cv.tilde_alpha = norm_cdf(t);
        cv.z_x = -t;  // z_{1 - tilde_alpha}
    }
    const Correlation cy = correlation_from_sigma(y.Sigma);
    cv.dropped_y = cy.dropped;
    if (cy.R.rows() > 0) {
        const double t = simulate_stat_quantile(
            cy.R, cfg.with(Stat::Max, substream(cfg.seed, 1)), root);
        cv.tilde_beta = 1.0 - norm_cdf(t);
        cv.z_y = t;  // z_{1 - tilde_beta}
    }
    return cv;
}

namespace detail {

/// Critical value for max{s1*t(j), s2*t(k)} restricted to the nondegenerate
/// components of the 2x2 submatrix of Sigma at (j, k). Returns the t-scale
/// quantile at level p, or 0 when both components are degenerate.
inline double pair_max_quantile(const Eigen::MatrixXd& Sigma, int j, int k, int s1,
                                int s2, double p, const SimConfig& cfg) {
    Eigen::MatrixXd sub(2, 2);
    sub << Sigma(j - 1, j - 1), Sigma(j - 1, k - 1), Sigma(k - 1, j - 1),
        Sigma(k - 1, k - 1);
    const Correlation c = correlation_from_sigma(sub);
    if (c.R.rows() == 0) return 0.0;
    SimConfig sc = cfg;
    sc.stat = Stat::MaxSigned;
    sc.signs.clear();
    const int signs[2] = {s1, s2};
    for (int idx : c.kept) sc.signs.push_back(signs[idx - 1]);
    return simulate_stat_quantile(c.R, sc, p);
}

} // namespace detail

/// Fixed-pair limits: calibrates max{-t_X(j), t_X(k)} on the X side and
/// max{t_Y(j), -t_Y(k)} on the Y side, both at the sqrt(1-alpha) quantile.
inline CritValues critvals_method2(const OrdinalCdf& x, const OrdinalCdf& y, int j,
                                   int k, double alpha, const SimConfig& cfg) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("critvals_method2: alpha must lie in (0, 1)");
    if (!(1 <= j && j < k && k <= x.J - 1))
        throw std::invalid_argument("critvals_method2: need 1 <= j < k <= J-1");
    const double root = std::sqrt(1.0 - alpha);
    CritValues cv;
    SimConfig cfg_x = cfg;
    cfg_x.seed = substream(cfg.seed, 0);
    cv.z_x = detail::pair_max_quantile(x.Sigma, j, k, -1, +1, root, cfg_x);
    cv.tilde_alpha = 1.0 - norm_cdf(cv.z_x);
    SimConfig cfg_y = cfg;
    cfg_y.seed = substream(cfg.seed, 1);
    cv.z_y = detail::pair_max_quantile(y.Sigma, j, k, +1, -1, root, cfg_y);
    cv.tilde_beta = 1.0 - norm_cdf(cv.z_y);
    return cv;
}

/// Two-sided joint limits from the max-absolute statistic; the reported
/// tilde levels are the full two-sided alphas (limits use z_{1 - tilde/2}).
inline CritValues critvals_method3(const OrdinalCdf& x, const OrdinalCdf& y,
                                   double alpha, const SimConfig& cfg) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("critvals_method3: alpha must lie in (0, 1)");
    const double root = std::sqrt(1.0 - alpha);
    CritValues cv;
    const Correlation cx = correlation_from_sigma(x.Sigma);
    cv.dropped_x = cx.dropped;
    if (cx.R.rows() > 0) {
        cv.z_x = simulate_stat_quantile(
            cx.R, cfg.with(Stat::MaxAbs, substream(cfg.seed, 0)), root);
        cv.tilde_alpha = 2.0 * (1.0 - norm_cdf(cv.z_x));
    }
    const Correlation cy = correlation_from_sigma(y.Sigma);
    cv.dropped_y = cy.dropped;
    if (cy.R.rows() > 0) {
        cv.z_y = simulate_stat_quantile(
            cy.R, cfg.with(Stat::MaxAbs, substream(cfg.seed, 1)), root);
        cv.tilde_beta = 2.0 * (1.0 - norm_cdf(cv.z_y));
    }
    return cv;
}

} // namespace ordq
