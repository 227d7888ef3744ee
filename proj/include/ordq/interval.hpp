#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

namespace ordq {

/// Half-open interval (lo, hi]. All set logic in this library keeps the
/// open-left / closed-right convention; endpoint comparisons are exact
/// (endpoints always derive from identical arithmetic on both sides).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double tau) const { return lo < tau && tau <= hi; }
    double length() const { return hi - lo; }
};

/// Finite union of disjoint half-open intervals inside (0,1), kept sorted
/// and normalized: touching intervals (a,b] u (b,c] collapse to (a,c].
class QuantileSet {
public:
    QuantileSet() = default;

    explicit QuantileSet(std::vector<Interval> parts) {
        for (const Interval& iv : parts) add(iv);
    }

    /// Insert one interval; empty or inverted inputs are ignored.
    void add(Interval iv) {
        if (!(iv.lo < iv.hi)) return;
        raw_.push_back(iv);
        normalized_ = false;
    }

    void add(double lo, double hi) { add(Interval{lo, hi}); }

    bool empty() const {
        normalize();
        return raw_.empty();
    }

    const std::vector<Interval>& intervals() const {
        normalize();
        return raw_;
    }

    bool contains(double tau) const {
        normalize();
        for (const Interval& iv : raw_)
            if (iv.contains(tau)) return true;
        return false;
    }

    double total_length() const {
        normalize();
        double sum = 0.0;
        for (const Interval& iv : raw_) sum += iv.length();
        return sum;
    }

    friend QuantileSet qs_union(const QuantileSet& a, const QuantileSet& b) {
        QuantileSet out;
        out.raw_ = a.intervals();
        for (const Interval& iv : b.intervals()) out.raw_.push_back(iv);
        out.normalized_ = false;
        return out;
    }

    /// True iff every point of a lies in b. With both sides normalized,
    /// each interval of a must sit inside a single interval of b.
    friend bool qs_subset(const QuantileSet& a, const QuantileSet& b) {
        const auto& as = a.intervals();
        const auto& bs = b.intervals();
        for (const Interval& ia : as) {
            bool covered = false;
            for (const Interval& ib : bs) {
                if (ib.lo <= ia.lo && ia.hi <= ib.hi) {
                    covered = true;
                    break;
                }
            }
            if (!covered) return false;
        }
        return true;
    }

    friend bool operator==(const QuantileSet& a, const QuantileSet& b) {
        const auto& as = a.intervals();
        const auto& bs = b.intervals();
        if (as.size() != bs.size()) return false;
        for (std::size_t i = 0; i < as.size(); ++i)
            if (as[i].lo != bs[i].lo || as[i].hi != bs[i].hi) return false;
        return true;
    }

    /// "(0.016, 0.029] u (0.073, 0.120]"; empty set renders as "{}".
    std::string to_string(int decimals = 3) const {
        normalize();
        if (raw_.empty()) return "{}";
        std::string out;
        char buf[64];
        for (std::size_t i = 0; i < raw_.size(); ++i) {
            if (i > 0) out += " u ";
            std::snprintf(buf, sizeof buf, "(%.*f, %.*f]", decimals, raw_[i].lo,
                          decimals, raw_[i].hi);
            out += buf;
        }
        return out;
    }

private:
    void normalize() const {
        if (normalized_) return;
        auto& v = raw_;
        std::sort(v.begin(), v.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        std::vector<Interval> merged;
        for (const Interval& iv : v) {
            if (!merged.empty() && iv.lo <= merged.back().hi) {
                merged.back().hi = std::max(merged.back().hi, iv.hi);
            } else {
                merged.push_back(iv);
            }
        }
        v = std::move(merged);
        normalized_ = true;
    }

    mutable std::vector<Interval> raw_;
    mutable bool normalized_ = true;
};

/// Half-open rectangle (lo1,hi1] x (lo2,hi2].
struct Rect {
    Interval t1;
    Interval t2;

    bool contains(double tau1, double tau2) const {
        return t1.contains(tau1) && t2.contains(tau2);
    }
    bool covers(const Rect& r) const {
        return t1.lo <= r.t1.lo && r.t1.hi <= t1.hi && t2.lo <= r.t2.lo &&
               r.t2.hi <= t2.hi;
    }
};

/// Finite union of half-open rectangles in (0,1)^2, normalized so that no
/// stored rectangle is contained in another.
class RectSet {
public:
    RectSet() = default;

    void add(Rect r) {
        if (!(r.t1.lo < r.t1.hi) || !(r.t2.lo < r.t2.hi)) return;
        raw_.push_back(r);
        normalized_ = false;
    }

    bool empty() const {
        normalize();
        return raw_.empty();
    }

    const std::vector<Rect>& rects() const {
        normalize();
        return raw_;
    }

    bool contains(double tau1, double tau2) const {
        normalize();
        for (const Rect& r : raw_)
            if (r.contains(tau1, tau2)) return true;
        return false;
    }

    /// Exact subset test by coordinate compression: between consecutive
    /// endpoint breakpoints, membership in every rectangle is constant for
    /// half-open cells, so it suffices to compare cell coverage.
    friend bool rs_subset(const RectSet& a, const RectSet& b) {
        const auto& as = a.rects();
        if (as.empty()) return true;
        const auto& bs = b.rects();
        std::vector<double> xs, ys;
        auto collect = [&](const std::vector<Rect>& rs) {
            for (const Rect& r : rs) {
                xs.push_back(r.t1.lo);
                xs.push_back(r.t1.hi);
                ys.push_back(r.t2.lo);
                ys.push_back(r.t2.hi);
            }
        };
        collect(as);
        collect(bs);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            const Interval cx{xs[i], xs[i + 1]};
            for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
                const Interval cy{ys[j], ys[j + 1]};
                const Rect cell{cx, cy};
                bool in_a = false;
                for (const Rect& r : as)
                    if (r.covers(cell)) { in_a = true; break; }
                if (!in_a) continue;
                bool in_b = false;
                for (const Rect& r : bs)
                    if (r.covers(cell)) { in_b = true; break; }
                if (!in_b) return false;
            }
        }
        return true;
    }

    std::string to_string(int decimals = 3) const {
        normalize();
        if (raw_.empty()) return "{}";
        std::string out;
        char buf[128];
        for (std::size_t i = 0; i < raw_.size(); ++i) {
            if (i > 0) out += " u ";
            std::snprintf(buf, sizeof buf, "(%.*f, %.*f] x (%.*f, %.*f]", decimals,
                          raw_[i].t1.lo, decimals, raw_[i].t1.hi, decimals,
                          raw_[i].t2.lo, decimals, raw_[i].t2.hi);
            out += buf;
        }
        return out;
    }

private:
    void normalize() const {
        if (normalized_) return;
        auto& v = raw_;
        std::vector<Rect> kept;
        for (std::size_t i = 0; i < v.size(); ++i) {
            bool dominated = false;
            for (std::size_t j = 0; j < v.size() && !dominated; ++j) {
                if (i == j) continue;
                if (v[j].covers(v[i]) && !(v[i].covers(v[j]) && i < j)) dominated = true;
            }
            if (!dominated) kept.push_back(v[i]);
        }
        std::sort(kept.begin(), kept.end(), [](const Rect& a, const Rect& b) {
            if (a.t1.lo != b.t1.lo) return a.t1.lo < b.t1.lo;
            return a.t2.lo < b.t2.lo;
        });
        v = std::move(kept);
        normalized_ = true;
    }

    mutable std::vector<Rect> raw_;
    mutable bool normalized_ = true;
};

} // namespace ordq
