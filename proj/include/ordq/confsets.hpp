#pragma once

#include "ordq/gauss_sim.hpp"
#include "ordq/identify.hpp"
#include "ordq/interval.hpp"
#include "ordq/ordinal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ordq {

enum class CsMethod { Between, WithinFixed, WithinAll };

/// Why a per-category piece of an inner confidence set came out empty.
enum class PieceStatus {
    Interval,       // nonempty piece
    NoEvidence,     // point estimates already give no interval here
    LimitsCrossed,  // estimates disagree but the confidence limits crossed
};

/// Per-category confidence limits backing an inner confidence set. Limits
/// are stored unclamped; comparisons always use the raw values and only
/// rendering clamps into [0, 1].
struct ConfidenceLimits {
    CsMethod method = CsMethod::Between;
    double alpha = 0.0;
    int j = 0, k = 0;  // fixed category pair (WithinFixed only)
    CritValues crit;
    std::vector<double> x_upper, x_lower, y_upper, y_lower;  // NaN where unused
    std::vector<PieceStatus> status_x;  // pieces (CXU(j), CYL(j)]
    std::vector<PieceStatus> status_y;  // pieces (CYU(j), CXL(j)] (within methods)
};

namespace detail {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

inline double stderr_at(const OrdinalCdf& c, int j) {
    return std::sqrt(c.Sigma(j - 1, j - 1) / c.n);
}

/// Intersect a raw-limit interval with (0, 1] before storing.
inline void add_clamped(QuantileSet& s, double lo, double hi) {
    s.add(std::max(lo, 0.0), std::min(hi, 1.0));
}

inline void add_clamped(RectSet& s, double lo1, double hi1, double lo2, double hi2) {
    s.add(Rect{{std::max(lo1, 0.0), std::min(hi1, 1.0)},
               {std::max(lo2, 0.0), std::min(hi2, 1.0)}});
}

inline PieceStatus classify(double est_lo, double est_hi, double lim_lo, double lim_hi) {
    if (!(est_lo < est_hi)) return PieceStatus::NoEvidence;
    return (lim_lo < lim_hi) ? PieceStatus::Interval : PieceStatus::LimitsCrossed;
}

} // namespace detail

/// Inner confidence set for the between-group quantile set: the union over
/// categories of (CXU(j), CYL(j)] whenever the upper X limit stays below the
/// lower Y limit. Contained in the true set with asymptotic probability at
/// least 1 - alpha.
inline std::pair<QuantileSet, ConfidenceLimits> cs_between(const OrdinalCdf& x,
                                                           const OrdinalCdf& y,
                                                           double alpha,
                                                           const SimConfig& cfg) {
    if (x.J != y.J) throw std::invalid_argument("cs_between: category counts differ");
    const int d = x.J - 1;
    ConfidenceLimits lim;
    lim.method = CsMethod::Between;
    lim.alpha = alpha;
    lim.crit = critvals_method1(x, y, alpha, cfg);
    lim.x_upper.assign(static_cast<std::size_t>(d), detail::kNan);
    lim.y_lower.assign(static_cast<std::size_t>(d), detail::kNan);
    lim.status_x.assign(static_cast<std::size_t>(d), PieceStatus::NoEvidence);
    QuantileSet set;
    for (int j = 1; j <= d; ++j) {
        const double xu = x.F_at(j) + lim.crit.z_x * detail::stderr_at(x, j);
        const double yl = y.F_at(j) - lim.crit.z_y * detail::stderr_at(y, j);
        lim.x_upper[static_cast<std::size_t>(j - 1)] = xu;
        lim.y_lower[static_cast<std::size_t>(j - 1)] = yl;
        lim.status_x[static_cast<std::size_t>(j - 1)] =
            detail::classify(x.F_at(j), y.F_at(j), xu, yl);
        if (xu < yl) detail::add_clamped(set, xu, yl);
    }
    return {std::move(set), std::move(lim)};
}

/// Inner confidence set for a fixed category pair j < k: a single rectangle
/// (CXU(j), CYL(j)] x (CYU(k), CXL(k)], empty as soon as either side's
/// limits cross.
inline std::pair<RectSet, ConfidenceLimits> cs_within_fixed(const OrdinalCdf& x,
                                                            const OrdinalCdf& y, int j,
                                                            int k, double alpha,
                                                            const SimConfig& cfg) {
    if (x.J != y.J)
        throw std::invalid_argument("cs_within_fixed: category counts differ");
    const int d = x.J - 1;
    ConfidenceLimits lim;
    lim.method = CsMethod::WithinFixed;
    lim.alpha = alpha;
    lim.j = j;
    lim.k = k;
    lim.crit = critvals_method2(x, y, j, k, alpha, cfg);
    lim.x_upper.assign(static_cast<std::size_t>(d), detail::kNan);
    lim.x_lower.assign(static_cast<std::size_t>(d), detail::kNan);
    lim.y_upper.assign(static_cast<std::size_t>(d), detail::kNan);
    lim.y_lower.assign(static_cast<std::size_t>(d), detail::kNan);
    lim.status_x.assign(static_cast<std::size_t>(d), PieceStatus::NoEvidence);
    lim.status_y.assign(static_cast<std::size_t>(d), PieceStatus::NoEvidence);

    const double xu = x.F_at(j) + lim.crit.z_x * detail::stderr_at(x, j);
    const double xl = x.F_at(k) - lim.crit.z_x * detail::stderr_at(x, k);
    const double yl = y.F_at(j) - lim.crit.z_y * detail::stderr_at(y, j);
    const double yu = y.F_at(k) + lim.crit.z_y * detail::stderr_at(y, k);
    lim.x_upper[static_cast<std::size_t>(j - 1)] = xu;
    lim.y_lower[static_cast<std::size_t>(j - 1)] = yl;
    lim.y_upper[static_cast<std::size_t>(k - 1)] = yu;
    lim.x_lower[static_cast<std::size_t>(k - 1)] = xl;
    lim.status_x[static_cast<std::size_t>(j - 1)] =
        detail::classify(x.F_at(j), y.F_at(j), xu, yl);
    lim.status_y[static_cast<std::size_t>(k - 1)] =
        detail::classify(y.F_at(k), x.F_at(k), yu, xl);

    RectSet set;
    if (xu < yl && yu < xl) detail::add_clamped(set, xu, yl, yu, xl);
    return {std::move(set), std::move(lim)};
}

/// Inner confidence set over all category pairs: two-sided joint limits give
/// per-category intervals That_Xj = (CXU(j), CYL(j)] and
/// That_Yk = (CYU(k), CXL(k)]; the set is the union of That_Xj x That_Yk
/// over j < k.
inline std::pair<RectSet, ConfidenceLimits> cs_within_all(const OrdinalCdf& x,
                                                          const OrdinalCdf& y,
                                                          double alpha,
                                                          const SimConfig& cfg) {
    if (x.J != y.J)
        throw std::invalid_argument("cs_within_all: category counts differ");
    const int d = x.J - 1;
    ConfidenceLimits lim;
    lim.method = CsMethod::WithinAll;
    lim.alpha = alpha;
    lim.crit = critvals_method3(x, y, alpha, cfg);
    lim.x_upper.resize(static_cast<std::size_t>(d));
    lim.x_lower.resize(static_cast<std::size_t>(d));
    lim.y_upper.resize(static_cast<std::size_t>(d));
    lim.y_lower.resize(static_cast<std::size_t>(d));
    lim.status_x.resize(static_cast<std::size_t>(d));
    lim.status_y.resize(static_cast<std::size_t>(d));

    std::vector<Interval> piece_x(static_cast<std::size_t>(d)), piece_y(static_cast<std::size_t>(d));
    for (int j = 1; j <= d; ++j) {
        const std::size_t i = static_cast<std::size_t>(j - 1);
        const double sx = lim.crit.z_x * detail::stderr_at(x, j);
        const double sy = lim.crit.z_y * detail::stderr_at(y, j);
        lim.x_lower[i] = x.F_at(j) - sx;
        lim.x_upper[i] = x.F_at(j) + sx;
        lim.y_lower[i] = y.F_at(j) - sy;
        lim.y_upper[i] = y.F_at(j) + sy;
        piece_x[i] = Interval{lim.x_upper[i], lim.y_lower[i]};
        piece_y[i] = Interval{lim.y_upper[i], lim.x_lower[i]};
        lim.status_x[i] = detail::classify(x.F_at(j), y.F_at(j), piece_x[i].lo,
                                           piece_x[i].hi);
        lim.status_y[i] = detail::classify(y.F_at(j), x.F_at(j), piece_y[i].lo,
                                           piece_y[i].hi);
    }
    RectSet set;
    for (int j = 1; j <= d; ++j) {
        const std::size_t ij = static_cast<std::size_t>(j - 1);
        if (!(piece_x[ij].lo < piece_x[ij].hi)) continue;
        for (int k = j + 1; k <= d; ++k) {
            const std::size_t ik = static_cast<std::size_t>(k - 1);
            if (!(piece_y[ik].lo < piece_y[ik].hi)) continue;
            detail::add_clamped(set, piece_x[ij].lo, piece_x[ij].hi, piece_y[ik].lo,
                                piece_y[ik].hi);
        }
    }
    return {std::move(set), std::move(lim)};
}

} // namespace ordq
