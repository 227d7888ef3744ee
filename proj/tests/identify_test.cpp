#include "ordq/identify.hpp"

#include "fixtures.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using Catch::Approx;
using namespace ordq;

namespace {

OrdinalCdf cdf(const std::vector<double>& F) {
    return OrdinalCdf::from_cdf_values(F, 1000.0);
}

} // namespace

TEST_CASE("between_set: education comparison reproduces the published set",
          "[identify]") {
    const QuantileSet s =
        between_set(cdf(fixtures::kEduHigh2006), cdf(fixtures::kEduLow2006));
    const auto& iv = s.intervals();
    REQUIRE(iv.size() == 4);
    REQUIRE(iv[0].lo == 0.0161);
    REQUIRE(iv[0].hi == 0.0287);
    REQUIRE(iv[1].lo == 0.0734);
    REQUIRE(iv[1].hi == 0.1205);
    REQUIRE(iv[2].lo == 0.2957);
    REQUIRE(iv[2].hi == 0.3905);
    REQUIRE(iv[3].lo == 0.6427);
    REQUIRE(iv[3].hi == 0.6731);
    REQUIRE(s.to_string(2) == "(0.02, 0.03] u (0.07, 0.12] u (0.30, 0.39] u (0.64, 0.67]");
}

TEST_CASE("between_set: identical CDFs give the empty set", "[identify]") {
    const OrdinalCdf c = cdf(fixtures::kWhite2006);
    REQUIRE(between_set(c, c).empty());
}

TEST_CASE("between_set: the two orientations are disjoint and lengths add up",
          "[identify][property]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> fx(4), fy(4);
        for (int j = 0; j < 4; ++j) {
            fx[static_cast<std::size_t>(j)] = u(rng);
            fy[static_cast<std::size_t>(j)] = u(rng);
        }
        std::sort(fx.begin(), fx.end());
        std::sort(fy.begin(), fy.end());
        const OrdinalCdf cx = cdf(fx), cy = cdf(fy);
        const QuantileSet sx = between_set(cx, cy);
        const QuantileSet sy = between_set(cy, cx);
        for (const Interval& a : sx.intervals())
            for (double tau : {a.hi, (a.lo + a.hi) / 2})
                REQUIRE_FALSE(sy.contains(tau));
        // union length equals the summed category gaps unless per-category
        // intervals overlap, in which case merging can only lose length
        double direct = 0.0;
        bool disjoint = true;
        double prev_hi = -1.0;
        for (int j = 0; j < 4; ++j) {
            const double lo = fx[static_cast<std::size_t>(j)];
            const double hi = fy[static_cast<std::size_t>(j)];
            if (lo < hi) {
                if (prev_hi > lo) disjoint = false;
                prev_hi = hi;
                direct += hi - lo;
            }
        }
        if (disjoint)
            REQUIRE(sx.total_length() == Approx(direct).margin(1e-12));
        REQUIRE(sx.total_length() <= direct + 1e-12);
    }
}

TEST_CASE("single_crossing: 2006 vs 2008 men in poverty cross at m=2",
          "[identify]") {
    const auto m =
        single_crossing(cdf(fixtures::kPoverty2006), cdf(fixtures::kPoverty2008));
    REQUIRE(m.has_value());
    REQUIRE(*m == 2);
}

TEST_CASE("single_crossing: no crossing cases", "[identify]") {
    const OrdinalCdf c = cdf(fixtures::kPoverty2006);
    REQUIRE_FALSE(single_crossing(c, c).has_value());

    // (-, +, -) pattern is a double crossing
    const OrdinalCdf x = cdf({0.2, 0.5, 0.6});
    const OrdinalCdf y = cdf({0.3, 0.4, 0.7});
    REQUIRE_FALSE(single_crossing(x, y).has_value());

    // strict dominance has no upper segment
    const OrdinalCdf lo = cdf({0.1, 0.2, 0.3});
    const OrdinalCdf hi = cdf({0.2, 0.3, 0.4});
    REQUIRE_FALSE(single_crossing(lo, hi).has_value());
}

TEST_CASE("single_crossing is antisymmetric", "[identify][property]") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> fx(5), fy(5);
        for (int j = 0; j < 5; ++j) {
            fx[static_cast<std::size_t>(j)] = u(rng);
            fy[static_cast<std::size_t>(j)] = u(rng);
        }
        std::sort(fx.begin(), fx.end());
        std::sort(fy.begin(), fy.end());
        const OrdinalCdf cx = cdf(fx), cy = cdf(fy);
        if (single_crossing(cx, cy).has_value())
            REQUIRE_FALSE(single_crossing(cy, cx).has_value());
    }
}

TEST_CASE("within_pair_sets: 70-16 interquantile range fixture", "[identify]") {
    const auto [t1, t2] = within_pair_sets(cdf(fixtures::kPoverty2006),
                                           cdf(fixtures::kPoverty2008), 2, 4);
    REQUIRE(t1.intervals().size() == 1);
    REQUIRE(t1.intervals()[0].lo == 0.1560);
    REQUIRE(t1.intervals()[0].hi == 0.1656);
    REQUIRE(t2.intervals()[0].lo == 0.6710);
    REQUIRE(t2.intervals()[0].hi == 0.7062);
    REQUIRE(t1.contains(0.16));
    REQUIRE(t2.contains(0.70));
}

TEST_CASE("within_pair_sets: no crossing at the pair gives two empty sets",
          "[identify]") {
    const auto [t1, t2] = within_pair_sets(cdf(fixtures::kEduHigh2006),
                                           cdf(fixtures::kEduLow2006), 1, 2);
    REQUIRE(t1.empty());
    REQUIRE(t2.empty());
    REQUIRE_THROWS_AS(within_pair_sets(cdf(fixtures::kEduHigh2006),
                                       cdf(fixtures::kEduLow2006), 2, 2),
                      std::invalid_argument);
}

TEST_CASE("within_all_set: single crossing equals the product of the crossing sets",
          "[identify]") {
    const OrdinalCdf x = cdf(fixtures::kPoverty2006);
    const OrdinalCdf y = cdf(fixtures::kPoverty2008);
    const auto m = single_crossing(x, y);
    REQUIRE(m.has_value());
    const RectSet all = within_all_set(x, y);

    QuantileSet t1, t2;
    for (int j = 1; j <= *m; ++j) t1.add(x.F_at(j), y.F_at(j));
    for (int k = *m + 1; k <= x.J - 1; ++k) t2.add(y.F_at(k), x.F_at(k));
    RectSet product;
    for (const Interval& a : t1.intervals())
        for (const Interval& b : t2.intervals()) product.add(Rect{a, b});
    REQUIRE(rs_subset(all, product));
    REQUIRE(rs_subset(product, all));
}

TEST_CASE("within_all_set: identical CDFs give the empty set", "[identify]") {
    const OrdinalCdf c = cdf(fixtures::kBlack2006);
    REQUIRE(within_all_set(c, c).empty());
}

TEST_CASE("within_all_set: hand enumeration for a (-, +, -) pattern",
          "[identify]") {
    // theta = (-, +, -): only the pair (j, k) = (1, 2) contributes.
    const OrdinalCdf x = cdf({0.2, 0.5, 0.6});
    const OrdinalCdf y = cdf({0.3, 0.4, 0.7});
    const RectSet s = within_all_set(x, y);
    REQUIRE(s.rects().size() == 1);
    const Rect r = s.rects()[0];
    REQUIRE(r.t1.lo == 0.2);
    REQUIRE(r.t1.hi == 0.3);
    REQUIRE(r.t2.lo == 0.4);
    REQUIRE(r.t2.hi == 0.5);
}
