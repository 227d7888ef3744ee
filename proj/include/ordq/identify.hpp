#pragma once

#include "ordq/interval.hpp"
#include "ordq/ordinal.hpp"

#include <optional>
#include <stdexcept>
#include <utility>

namespace ordq {

/// Quantile levels at which the latent X distribution provably sits above
/// the latent Y distribution: union over j of (F_X(j), F_Y(j)] for the
/// categories where F_X(j) < F_Y(j). Requires each Y threshold to be at or
/// below the matching X threshold for the latent interpretation to hold.
inline QuantileSet between_set(const OrdinalCdf& x, const OrdinalCdf& y) {
    if (x.J != y.J) throw std::invalid_argument("between_set: category counts differ");
    QuantileSet s;
    for (std::size_t j = 0; j < x.F.size(); ++j)
        if (x.F[j] < y.F[j]) s.add(x.F[j], y.F[j]);
    return s;
}

/// For a fixed category pair j < k: the quantile-level sets (T1, T2) such
/// that every interquantile range Q(tau2) - Q(tau1) with tau1 in T1, tau2
/// in T2 is strictly wider for latent Y than for latent X (common threshold
/// shift assumed). Both crossings must be present, else both sets are empty.
/// The reversed orientation is obtained by swapping the arguments.
inline std::pair<QuantileSet, QuantileSet> within_pair_sets(const OrdinalCdf& x,
                                                            const OrdinalCdf& y, int j,
                                                            int k) {
    if (x.J != y.J)
        throw std::invalid_argument("within_pair_sets: category counts differ");
    if (!(1 <= j && j < k && k <= x.J - 1))
        throw std::invalid_argument("within_pair_sets: need 1 <= j < k <= J-1");
    QuantileSet t1, t2;
    if (x.F_at(j) < y.F_at(j) && y.F_at(k) < x.F_at(k)) {
        t1.add(x.F_at(j), y.F_at(j));
        t2.add(y.F_at(k), x.F_at(k));
    }
    return {t1, t2};
}

/// Category m at which the ordinal CDFs cross exactly once:
/// F_X(j) < F_Y(j) for all j <= m and F_X(j) > F_Y(j) for m < j <= J-1,
/// all inequalities strict. Returns nothing when no such m exists
/// (m = J-1 would leave no upper segment, so 1 <= m <= J-2).
inline std::optional<int> single_crossing(const OrdinalCdf& x, const OrdinalCdf& y) {
    if (x.J != y.J)
        throw std::invalid_argument("single_crossing: category counts differ");
    const int d = x.J - 1;
    for (int m = 1; m <= d - 1; ++m) {
        bool ok = true;
        for (int j = 1; j <= d && ok; ++j) {
            if (j <= m)
                ok = x.F_at(j) < y.F_at(j);
            else
                ok = x.F_at(j) > y.F_at(j);
        }
        if (ok) return m;
    }
    return std::nullopt;
}

/// All category pairs at once: union over j < k of T_Xj x T_Yk, where
/// T_Xj = (F_X(j), F_Y(j)] when F_X(j) < F_Y(j) and
/// T_Yk = (F_Y(k), F_X(k)] when F_Y(k) < F_X(k).
/// Under a single crossing this equals the product of the two crossing sets.
inline RectSet within_all_set(const OrdinalCdf& x, const OrdinalCdf& y) {
    if (x.J != y.J)
        throw std::invalid_argument("within_all_set: category counts differ");
    const int d = x.J - 1;
    RectSet out;
    for (int j = 1; j <= d; ++j) {
        if (!(x.F_at(j) < y.F_at(j))) continue;
        for (int k = j + 1; k <= d; ++k) {
            if (!(y.F_at(k) < x.F_at(k))) continue;
            out.add(Rect{{x.F_at(j), y.F_at(j)}, {y.F_at(k), x.F_at(k)}});
        }
    }
    return out;
}

} // namespace ordq
