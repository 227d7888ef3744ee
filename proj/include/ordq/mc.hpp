#pragma once

#include "ordq/confsets.hpp"
#include "ordq/freq_tests.hpp"
#include "ordq/identify.hpp"
#include "ordq/math.hpp"
#include "ordq/ordinal.hpp"
#include "ordq/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace ordq {

/// Discrete latent law on a finite grid (<= 2000 support points), so that
/// CDFs, generalized-inverse quantiles, and the identified sets are exact.
/// Parametric laws are discretized through their inverse CDF, which keeps
/// the oracle and the data generator on the same law.
class GridLaw {
public:
    static constexpr int kMaxPoints = 2000;

    static GridLaw from_points(std::vector<double> points, std::vector<double> probs) {
        if (points.empty() || points.size() != probs.size())
            throw std::invalid_argument("GridLaw: points/probs size mismatch");
        if (points.size() > kMaxPoints)
            throw std::invalid_argument("GridLaw: more than 2000 support points");
        std::vector<std::size_t> order(points.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
        GridLaw law;
        double total = 0.0;
        for (std::size_t idx : order) {
            if (!(probs[idx] >= 0.0))
                throw std::invalid_argument("GridLaw: negative probability");
            if (!law.points_.empty() && points[idx] == law.points_.back()) {
                law.probs_.back() += probs[idx];
            } else {
                law.points_.push_back(points[idx]);
                law.probs_.push_back(probs[idx]);
            }
            total += probs[idx];
        }
        if (!(total > 0.0)) throw std::invalid_argument("GridLaw: zero total mass");
        // extended-precision accumulation keeps count-like masses exact
        law.cum_.resize(law.probs_.size());
        long double run = 0.0L, full = 0.0L;
        for (double p : law.probs_) full += static_cast<long double>(p);
        for (std::size_t i = 0; i < law.probs_.size(); ++i) {
            run += static_cast<long double>(law.probs_[i]);
            law.cum_[i] = static_cast<double>(run / full);
            law.probs_[i] /= total;
        }
        law.cum_.back() = 1.0;
        return law;
    }

    static GridLaw normal(double mean, double sd, int grid = 1000) {
        std::vector<double> pts(static_cast<std::size_t>(grid));
        for (int i = 0; i < grid; ++i)
            pts[static_cast<std::size_t>(i)] =
                mean + sd * norm_quantile((i + 0.5) / grid);
        return from_points(std::move(pts),
                           std::vector<double>(static_cast<std::size_t>(grid),
                                               1.0 / grid));
    }

    static GridLaw logistic(double mu, double s, int grid = 1000) {
        std::vector<double> pts(static_cast<std::size_t>(grid));
        for (int i = 0; i < grid; ++i) {
            const double u = (i + 0.5) / grid;
            pts[static_cast<std::size_t>(i)] = mu + s * std::log(u / (1.0 - u));
        }
        return from_points(std::move(pts),
                           std::vector<double>(static_cast<std::size_t>(grid),
                                               1.0 / grid));
    }

    static GridLaw mixture(const std::vector<std::pair<double, GridLaw>>& parts) {
        std::vector<double> pts, pr;
        for (const auto& [w, law] : parts) {
            if (!(w >= 0.0)) throw std::invalid_argument("GridLaw: negative weight");
            for (std::size_t i = 0; i < law.points_.size(); ++i) {
                pts.push_back(law.points_[i]);
                pr.push_back(w * law.probs_[i]);
            }
        }
        return from_points(std::move(pts), std::move(pr));
    }

    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& probs() const { return probs_; }

    /// F(q) = P(V <= q).
    double cdf(double q) const {
        auto it = std::upper_bound(points_.begin(), points_.end(), q);
        if (it == points_.begin()) return 0.0;
        return cum_[static_cast<std::size_t>(it - points_.begin()) - 1];
    }

    /// Generalized inverse Q(tau) = inf{q : F(q) >= tau}, 0 < tau <= 1.
    double quantile(double tau) const {
        if (!(tau > 0.0 && tau <= 1.0))
            throw std::domain_error("GridLaw::quantile: tau must lie in (0, 1]");
        auto it = std::lower_bound(cum_.begin(), cum_.end(), tau);
        if (it == cum_.end()) return points_.back();
        return points_[static_cast<std::size_t>(it - cum_.begin())];
    }

private:
    std::vector<double> points_;
    std::vector<double> probs_;
    std::vector<double> cum_;
};

/// One simulation design: latent laws for both groups, thresholds for X,
/// per-category threshold offsets for Y, and sampling sizes.
struct LatentScenario {
    GridLaw latent_x;
    GridLaw latent_y;
    std::vector<double> thresholds;  // strictly increasing, size J-1
    std::vector<double> shifts;      // Y thresholds are thresholds[j] + shifts[j]
    std::int64_t n_x = 1000;
    std::int64_t n_y = 1000;
    int reps = 1000;
    std::uint64_t seed = 1;
    std::string name;

    int J() const { return static_cast<int>(thresholds.size()) + 1; }

    void validate() const {
        if (thresholds.empty())
            throw std::invalid_argument("LatentScenario: need at least one threshold");
        for (std::size_t i = 1; i < thresholds.size(); ++i)
            if (!(thresholds[i - 1] < thresholds[i]))
                throw std::invalid_argument(
                    "LatentScenario: thresholds must be strictly increasing");
        if (shifts.size() != thresholds.size())
            throw std::invalid_argument("LatentScenario: one shift per threshold");
        for (std::size_t i = 1; i < thresholds.size(); ++i)
            if (!(thresholds[i - 1] + shifts[i - 1] < thresholds[i] + shifts[i]))
                throw std::invalid_argument(
                    "LatentScenario: shifted Y thresholds must stay increasing");
        if (n_x < 1 || n_y < 1)
            throw std::invalid_argument("LatentScenario: sample sizes must be >= 1");
    }

    std::vector<double> exact_cdf_x() const {
        std::vector<double> F(thresholds.size());
        for (std::size_t j = 0; j < thresholds.size(); ++j)
            F[j] = latent_x.cdf(thresholds[j]);
        return F;
    }

    std::vector<double> exact_cdf_y() const {
        std::vector<double> F(thresholds.size());
        for (std::size_t j = 0; j < thresholds.size(); ++j)
            F[j] = latent_y.cdf(thresholds[j] + shifts[j]);
        return F;
    }

    /// Ordinal pmf over 1..J implied by a CDF vector.
    static std::vector<double> pmf_from_cdf(const std::vector<double>& F) {
        std::vector<double> p(F.size() + 1);
        double prev = 0.0;
        for (std::size_t j = 0; j < F.size(); ++j) {
            p[j] = F[j] - prev;
            prev = F[j];
        }
        p.back() = 1.0 - prev;
        return p;
    }

    /// Scenario whose ordinal distributions are exactly the given pmfs
    /// (latent mass at the category indices, thresholds between them).
    static LatentScenario from_pmfs(const std::vector<double>& pmf_x,
                                    const std::vector<double>& pmf_y) {
        if (pmf_x.size() != pmf_y.size() || pmf_x.size() < 2)
            throw std::invalid_argument("from_pmfs: bad pmf sizes");
        std::vector<double> pts(pmf_x.size());
        for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = static_cast<double>(i + 1);
        LatentScenario s;
        s.latent_x = GridLaw::from_points(pts, pmf_x);
        s.latent_y = GridLaw::from_points(pts, pmf_y);
        for (std::size_t j = 0; j + 1 < pmf_x.size(); ++j)
            s.thresholds.push_back(static_cast<double>(j + 1) + 0.5);
        s.shifts.assign(s.thresholds.size(), 0.0);
        return s;
    }
};

enum class IdCheck { Between, Within };

namespace detail {

/// Grid over one half-open interval: start half a step inside the open left
/// endpoint, and always include the closed right endpoint.
inline std::vector<double> interval_grid(const Interval& iv, double step) {
    std::vector<double> g;
    for (double t = iv.lo + step / 2.0; t < iv.hi; t += step) g.push_back(t);
    g.push_back(iv.hi);
    return g;
}

} // namespace detail

/// Brute-force check of the identification claims on an exact scenario.
/// Between: every grid tau in the between-group set must satisfy
/// Q_X(tau) > Q_Y(tau). Within: every grid pair in the all-pairs rectangle
/// set must have the X interquantile range strictly smaller. Returns the
/// number of violating grid points (pairs); 0 means the claim held.
inline std::int64_t verify_identification(const LatentScenario& sc, double grid_step,
                                          IdCheck check) {
    sc.validate();
    const OrdinalCdf cx = OrdinalCdf::from_cdf_values(sc.exact_cdf_x(), 1.0);
    const OrdinalCdf cy = OrdinalCdf::from_cdf_values(sc.exact_cdf_y(), 1.0);
    std::int64_t violations = 0;
    if (check == IdCheck::Between) {
        const QuantileSet set = between_set(cx, cy);
        for (const Interval& iv : set.intervals()) {
            for (double tau : detail::interval_grid(iv, grid_step)) {
                if (!(sc.latent_x.quantile(tau) > sc.latent_y.quantile(tau)))
                    ++violations;
            }
        }
    } else {
        const RectSet set = within_all_set(cx, cy);
        for (const Rect& r : set.rects()) {
            const std::vector<double> g1 = detail::interval_grid(r.t1, grid_step);
            const std::vector<double> g2 = detail::interval_grid(r.t2, grid_step);
            std::vector<double> d1(g1.size()), d2(g2.size());
            for (std::size_t i = 0; i < g1.size(); ++i)
                d1[i] = sc.latent_x.quantile(g1[i]) - sc.latent_y.quantile(g1[i]);
            for (std::size_t i = 0; i < g2.size(); ++i)
                d2[i] = sc.latent_x.quantile(g2[i]) - sc.latent_y.quantile(g2[i]);
            // Q_X(t2)-Q_X(t1) < Q_Y(t2)-Q_Y(t1)  <=>  d(t2) < d(t1)
            for (double a : d2)
                for (double b : d1)
                    if (!(a < b)) ++violations;
        }
    }
    return violations;
}

struct CoverageResult {
    int reps = 0;
    int covered = 0;
    double coverage = 0.0;
    double mc_se = 0.0;
};

struct SizeResult {
    int reps = 0;
    int rejections = 0;
    double rate = 0.0;
    double mc_se = 0.0;
};

namespace detail {

inline OrdinalSample sample_group(Rng& rng, const std::vector<double>& pmf,
                                  std::int64_t n, const std::string& label) {
    const std::vector<std::int64_t> counts = sample_multinomial(rng, n, pmf);
    OrdinalSample s;
    s.J = static_cast<int>(pmf.size());
    s.counts.assign(counts.begin(), counts.end());
    s.n_raw = n;
    s.label = label;
    return s;
}

inline double binomial_se(double p, int reps) {
    return std::sqrt(p * (1.0 - p) / reps);
}

/// Run body(r) for r = 0..reps-1 across a thread pool. Every replication
/// derives its randomness from its own substream, so results are identical
/// for any thread count.
template <typename Fn>
inline void run_replications(int reps, Fn&& body) {
    const unsigned hw = std::thread::hardware_concurrency();
    const unsigned workers =
        std::min<unsigned>(hw ? hw : 1, static_cast<unsigned>(std::max(reps, 1)));
    if (workers <= 1) {
        for (int r = 0; r < reps; ++r) body(r);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1))
                    body(r);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace detail

/// Empirical coverage Pr(inner CS subset of the true set) across
/// replications. For the fixed-pair method, pass the category pair (j, k).
inline CoverageResult coverage_study(const LatentScenario& sc, CsMethod method,
                                     double alpha, const SimConfig& cfg, int j = 0,
                                     int k = 0) {
    sc.validate();
    if (sc.reps < 1) throw std::invalid_argument("coverage_study: reps must be >= 1");
    const std::vector<double> Fx = sc.exact_cdf_x();
    const std::vector<double> Fy = sc.exact_cdf_y();
    const OrdinalCdf true_x = OrdinalCdf::from_cdf_values(Fx, 1.0);
    const OrdinalCdf true_y = OrdinalCdf::from_cdf_values(Fy, 1.0);
    const std::vector<double> pmf_x = LatentScenario::pmf_from_cdf(Fx);
    const std::vector<double> pmf_y = LatentScenario::pmf_from_cdf(Fy);

    QuantileSet true_qs;
    RectSet true_rs;
    switch (method) {
        case CsMethod::Between:
            true_qs = between_set(true_x, true_y);
            break;
        case CsMethod::WithinFixed: {
            const auto [t1, t2] = within_pair_sets(true_x, true_y, j, k);
            if (!t1.empty() && !t2.empty())
                true_rs.add(Rect{t1.intervals()[0], t2.intervals()[0]});
            break;
        }
        case CsMethod::WithinAll:
            true_rs = within_all_set(true_x, true_y);
            break;
    }

    CoverageResult out;
    out.reps = sc.reps;
    std::vector<char> covered(static_cast<std::size_t>(sc.reps), 0);
    detail::run_replications(sc.reps, [&](int r) {
        const std::uint64_t rs = substream(sc.seed, static_cast<std::uint64_t>(r));
        Rng rng_x = make_rng(substream(rs, 0));
        Rng rng_y = make_rng(substream(rs, 1));
        const OrdinalCdf ex =
            estimate_cdf(detail::sample_group(rng_x, pmf_x, sc.n_x, "x"));
        const OrdinalCdf ey =
            estimate_cdf(detail::sample_group(rng_y, pmf_y, sc.n_y, "y"));
        SimConfig rc = cfg;
        rc.seed = substream(rs, 2);
        bool cover = false;
        switch (method) {
            case CsMethod::Between:
                cover = qs_subset(cs_between(ex, ey, alpha, rc).first, true_qs);
                break;
            case CsMethod::WithinFixed:
                cover = rs_subset(cs_within_fixed(ex, ey, j, k, alpha, rc).first,
                                  true_rs);
                break;
            case CsMethod::WithinAll:
                cover = rs_subset(cs_within_all(ex, ey, alpha, rc).first, true_rs);
                break;
        }
        covered[static_cast<std::size_t>(r)] = cover ? 1 : 0;
    });
    for (char c : covered) out.covered += c;
    out.coverage = static_cast<double>(out.covered) / out.reps;
    out.mc_se = detail::binomial_se(out.coverage, out.reps);
    return out;
}

/// Empirical rejection rate of a frequentist test under the scenario's
/// (typically boundary) data-generating process.
inline SizeResult size_study(const LatentScenario& sc, Hypothesis test, double alpha,
                             const SimConfig& cfg) {
    sc.validate();
    if (sc.reps < 1) throw std::invalid_argument("size_study: reps must be >= 1");
    const std::vector<double> pmf_x = LatentScenario::pmf_from_cdf(sc.exact_cdf_x());
    const std::vector<double> pmf_y = LatentScenario::pmf_from_cdf(sc.exact_cdf_y());
    SizeResult out;
    out.reps = sc.reps;
    std::vector<char> rejected(static_cast<std::size_t>(sc.reps), 0);
    detail::run_replications(sc.reps, [&](int r) {
        const std::uint64_t rs = substream(sc.seed, static_cast<std::uint64_t>(r));
        Rng rng_x = make_rng(substream(rs, 0));
        Rng rng_y = make_rng(substream(rs, 1));
        const OrdinalCdf ex =
            estimate_cdf(detail::sample_group(rng_x, pmf_x, sc.n_x, "x"));
        const OrdinalCdf ey =
            estimate_cdf(detail::sample_group(rng_y, pmf_y, sc.n_y, "y"));
        SimConfig rc = cfg;
        rc.seed = substream(rs, 2);
        bool reject = false;
        switch (test) {
            case Hypothesis::Sd1XY:
                reject = test_sd1(ex, ey, alpha, rc).reject;
                break;
            case Hypothesis::NonSd1XY:
                reject = test_nonsd1(ex, ey, alpha).reject;
                break;
            case Hypothesis::ScXY:
                reject = test_sc(ex, ey, alpha, rc).reject;
                break;
        }
        rejected[static_cast<std::size_t>(r)] = reject ? 1 : 0;
    });
    for (char c : rejected) out.rejections += c;
    out.rate = static_cast<double>(out.rejections) / out.reps;
    out.mc_se = detail::binomial_se(out.rate, out.reps);
    return out;
}

// ---------------------------------------------------------------------------
// Scenario factories for the oracle suites.
// ---------------------------------------------------------------------------

namespace detail {

inline GridLaw random_grid_law(Rng& rng) {
    std::uniform_int_distribution<int> size_dist(40, 300);
    std::normal_distribution<double> point_dist(0.0, 1.0);
    std::exponential_distribution<double> mass_dist(1.0);
    const int G = size_dist(rng);
    std::vector<double> pts(static_cast<std::size_t>(G)), pr(static_cast<std::size_t>(G));
    for (int i = 0; i < G; ++i) {
        pts[static_cast<std::size_t>(i)] = point_dist(rng);
        pr[static_cast<std::size_t>(i)] = mass_dist(rng);
    }
    return GridLaw::from_points(std::move(pts), std::move(pr));
}

inline std::vector<double> random_thresholds(Rng& rng, int count) {
    std::uniform_real_distribution<double> u(-1.3, 1.3);
    std::vector<double> g(static_cast<std::size_t>(count));
    for (double& v : g) v = u(rng);
    std::sort(g.begin(), g.end());
    for (std::size_t i = 1; i < g.size(); ++i)
        if (g[i] - g[i - 1] < 1e-3) g[i] = g[i - 1] + 1e-3;
    return g;
}

} // namespace detail

/// Random scenario with arbitrary latent laws and nonpositive per-category
/// threshold shifts (the between-group assumption). The shifted Y thresholds
/// are re-sorted so they remain a valid increasing threshold sequence;
/// sorting preserves the pointwise <= constraint.
inline LatentScenario make_random_between_scenario(std::uint64_t seed) {
    Rng rng = make_rng(substream(seed, 101));
    LatentScenario sc;
    sc.seed = seed;
    sc.latent_x = detail::random_grid_law(rng);
    sc.latent_y = detail::random_grid_law(rng);
    std::uniform_int_distribution<int> jdist(2, 5);
    sc.thresholds = detail::random_thresholds(rng, jdist(rng));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> shift_dist(0.0, 0.3);
    std::vector<double> ythr(sc.thresholds.size());
    for (std::size_t j = 0; j < ythr.size(); ++j) {
        const double drop =
            (u01(rng) < 1.0 / 3.0) ? 0.0 : std::fabs(shift_dist(rng));
        ythr[j] = sc.thresholds[j] - drop;
    }
    std::sort(ythr.begin(), ythr.end());
    for (std::size_t j = 1; j < ythr.size(); ++j)
        if (ythr[j] <= ythr[j - 1]) ythr[j] = ythr[j - 1] + 1e-9;
    sc.shifts.resize(ythr.size());
    for (std::size_t j = 0; j < ythr.size(); ++j)
        sc.shifts[j] = ythr[j] - sc.thresholds[j];
    return sc;
}

/// Random scenario with a common threshold shift (the within-group
/// assumption), regenerated until the all-pairs rectangle set is nonempty
/// so the interquantile-range check is never vacuous.
inline LatentScenario make_random_within_scenario(std::uint64_t seed) {
    for (std::uint64_t attempt = 0; attempt < 500; ++attempt) {
        Rng rng = make_rng(substream(seed, 202 + attempt));
        LatentScenario sc;
        sc.seed = seed;
        sc.latent_x = detail::random_grid_law(rng);
        sc.latent_y = detail::random_grid_law(rng);
        std::uniform_int_distribution<int> jdist(2, 5);
        sc.thresholds = detail::random_thresholds(rng, jdist(rng));
        std::uniform_real_distribution<double> shift_dist(-0.4, 0.4);
        sc.shifts.assign(sc.thresholds.size(), shift_dist(rng));
        const OrdinalCdf cx = OrdinalCdf::from_cdf_values(sc.exact_cdf_x(), 1.0);
        const OrdinalCdf cy = OrdinalCdf::from_cdf_values(sc.exact_cdf_y(), 1.0);
        if (!within_all_set(cx, cy).empty()) return sc;
    }
    throw std::runtime_error("make_random_within_scenario: no crossing found");
}

/// Negative control: a positive threshold shift (violating the between-group
/// assumption) with identical latent laws, so the claimed quantile ordering
/// fails on the whole reported set.
inline LatentScenario make_negative_control_between() {
    std::vector<double> pts(1000), pr(1000, 1e-3);
    for (int i = 0; i < 1000; ++i)
        pts[static_cast<std::size_t>(i)] = (i + 1) / 1000.0;
    LatentScenario sc;
    sc.name = "control-positive-shift";
    sc.latent_x = GridLaw::from_points(pts, pr);
    sc.latent_y = sc.latent_x;
    sc.thresholds = {0.3};
    sc.shifts = {0.2};
    return sc;
}

/// Negative control: non-common shifts fabricate an ordinal crossing between
/// identical latent laws, so the interquantile-range conclusion fails.
inline LatentScenario make_negative_control_within() {
    std::vector<double> pts(1000), pr(1000, 1e-3);
    for (int i = 0; i < 1000; ++i)
        pts[static_cast<std::size_t>(i)] = (i + 1) / 1000.0;
    LatentScenario sc;
    sc.name = "control-noncommon-shift";
    sc.latent_x = GridLaw::from_points(pts, pr);
    sc.latent_y = sc.latent_x;
    sc.thresholds = {0.3, 0.6};
    sc.shifts = {0.15, -0.1};  // non-common but thresholds stay increasing
    return sc;
}

} // namespace ordq
