#include "ordq/freq_tests.hpp"

#include "fixtures.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using Catch::Approx;
using namespace ordq;

namespace {

SimConfig cfg(std::uint64_t seed = 1, std::int64_t draws = 100000) {
    SimConfig c;
    c.draws = draws;
    c.seed = seed;
    return c;
}

OrdinalCdf synthetic(const std::vector<double>& F, double n) {
    return OrdinalCdf::from_cdf_values(F, n);
}

} // namespace

TEST_CASE("test_nonsd1: threshold arithmetic at J=2", "[freq]") {
    // craft t_1 = -1.70 with pooled se = 0.1
    OrdinalCdf x = synthetic({0.40}, 100);
    OrdinalCdf y = synthetic({0.57}, 100);
    x.Sigma(0, 0) = 0.5;
    y.Sigma(0, 0) = 0.5;
    const TestReport rep = test_nonsd1(x, y, 0.05);
    REQUIRE(rep.statistic == Approx(-1.70).margin(1e-12));
    REQUIRE(rep.critical_value == Approx(-1.6448536269514722).margin(1e-9));
    REQUIRE(rep.reject);
}

TEST_CASE("test_nonsd1: education comparison at scale rejects", "[freq]") {
    const OrdinalCdf high = synthetic(fixtures::kEduHigh2006, 1e6);
    const OrdinalCdf low = synthetic(fixtures::kEduLow2006, 1e6);
    REQUIRE(test_nonsd1(high, low, 0.05).reject);
    // reversed direction: some positive theta, never rejects
    REQUIRE_FALSE(test_nonsd1(low, high, 0.05).reject);
}

TEST_CASE("test_nonsd1: any nonnegative difference blocks rejection", "[freq]") {
    const OrdinalCdf x = synthetic({0.2, 0.5}, 10000);
    const OrdinalCdf y = synthetic({0.5, 0.5}, 10000);  // theta_2 = 0
    REQUIRE_FALSE(test_nonsd1(x, y, 0.05).reject);
}

TEST_CASE("test_nonsd1: invariant to rescaling sampling weights", "[freq]") {
    OrdinalSample a;
    a.J = 3;
    a.counts = {30.0, 40.0, 30.0};
    a.weight_sq_sum = 120.0;
    a.n_raw = 100;
    OrdinalSample b;
    b.J = 3;
    b.counts = {50.0, 30.0, 20.0};
    b.weight_sq_sum = 140.0;
    b.n_raw = 100;
    const TestReport r1 = test_nonsd1(estimate_cdf(a), estimate_cdf(b), 0.05);
    for (double scale : {5.0, 0.25}) {
        OrdinalSample a2 = a, b2 = b;
        for (double& c : a2.counts) c *= scale;
        for (double& c : b2.counts) c *= scale;
        a2.weight_sq_sum *= scale * scale;
        b2.weight_sq_sum *= scale * scale;
        const TestReport r2 = test_nonsd1(estimate_cdf(a2), estimate_cdf(b2), 0.05);
        REQUIRE(r2.statistic == Approx(r1.statistic).margin(1e-12));
        REQUIRE(r2.reject == r1.reject);
    }
}

TEST_CASE("test_nonsd1: monotone in the evidence", "[freq]") {
    bool rejected_before = false;
    for (double gap : {0.002, 0.005, 0.01, 0.02, 0.05}) {
        const OrdinalCdf x = synthetic({0.50 - gap, 0.70 - gap}, 2000);
        const OrdinalCdf y = synthetic({0.50, 0.70}, 2000);
        const bool rej = test_nonsd1(x, y, 0.05).reject;
        if (rejected_before) REQUIRE(rej);
        rejected_before = rej;
    }
}

TEST_CASE("test_sd1: zero differences never reject", "[freq]") {
    const OrdinalCdf c = synthetic({0.3, 0.6}, 500);
    const TestReport rep = test_sd1(c, c, 0.05, cfg());
    REQUIRE(rep.statistic == 0.0);
    REQUIRE(rep.critical_value > 0.0);
    REQUIRE_FALSE(rep.reject);
    REQUIRE(rep.selected_moments == std::vector<int>{1, 2});
}

TEST_CASE("test_sd1: dominance violation at scale rejects", "[freq]") {
    // X = low education: theta = F_low - F_high > 0 everywhere
    const OrdinalCdf low = synthetic(fixtures::kEduLow2006, 1e6);
    const OrdinalCdf high = synthetic(fixtures::kEduHigh2006, 1e6);
    const TestReport rep = test_sd1(low, high, 0.05, cfg(2));
    REQUIRE(rep.reject);
    // the other direction is consistent with dominance
    REQUIRE_FALSE(test_sd1(high, low, 0.05, cfg(3)).reject);
}

TEST_CASE("test_sd1: one-dimensional critical value is z_{1-alpha}", "[freq]") {
    const OrdinalCdf x = synthetic({0.49}, 800);
    const OrdinalCdf y = synthetic({0.5}, 900);
    const TestReport rep = test_sd1(x, y, 0.05, cfg(5));
    REQUIRE(rep.selected_moments == std::vector<int>{1});
    REQUIRE(rep.critical_value == Approx(1.6448536269514722).margin(0.02));
}

TEST_CASE("test_sd1: clearly slack moments are dropped from calibration",
          "[freq]") {
    // theta_1 very negative, theta_2 at zero
    const OrdinalCdf x = synthetic({0.20, 0.60}, 4000);
    const OrdinalCdf y = synthetic({0.35, 0.60}, 4000);
    const TestReport rep = test_sd1(x, y, 0.05, cfg(6));
    REQUIRE(rep.selected_moments == std::vector<int>{2});
    REQUIRE_FALSE(rep.reject);
}

TEST_CASE("test_sc: no evidence fails to reject", "[freq]") {
    const OrdinalCdf c = synthetic({0.25, 0.5, 0.75}, 1000);
    const TestReport rep = test_sc(c, c, 0.05, cfg());
    REQUIRE_FALSE(rep.reject);
    REQUIRE(rep.per_k.size() == 2);
    REQUIRE(rep.statistic <= 0.0);
}

TEST_CASE("test_sc: double crossing at scale rejects", "[freq]") {
    const double d = 0.04;
    const OrdinalCdf x = synthetic({0.30 - d, 0.50 + d, 0.70 - d}, 100000);
    const OrdinalCdf y = synthetic({0.30, 0.50, 0.70}, 100000);
    const TestReport rep = test_sc(x, y, 0.05, cfg(7));
    REQUIRE(rep.reject);
    for (const PerCrossingDecision& pk : rep.per_k) REQUIRE(pk.reject);
    REQUIRE(rep.statistic > 0.0);
}

TEST_CASE("test_sc: true single crossing is not rejected", "[freq]") {
    const double d = 0.04;
    const OrdinalCdf x = synthetic({0.30 - d, 0.50 + d, 0.70 + d}, 100000);
    const OrdinalCdf y = synthetic({0.30, 0.50, 0.70}, 100000);
    const TestReport rep = test_sc(x, y, 0.05, cfg(8));
    REQUIRE_FALSE(rep.reject);
    // the crossing-at-1 hypothesis is the one that survives
    REQUIRE_FALSE(rep.per_k[0].reject);
    REQUIRE(rep.per_k[1].reject);
}

TEST_CASE("test_sc: reject decision is consistent with per-k margins", "[freq]") {
    const OrdinalCdf x = synthetic(fixtures::kPoverty2006, 1082);
    const OrdinalCdf y = synthetic(fixtures::kPoverty2008, 1095);
    const TestReport rep = test_sc(x, y, 0.05, cfg(9));
    bool all = true;
    for (const PerCrossingDecision& pk : rep.per_k) {
        REQUIRE(pk.reject == (pk.statistic > pk.critical_value));
        all = all && pk.reject;
    }
    REQUIRE(rep.reject == all);
    REQUIRE((rep.statistic > 0.0) == rep.reject);
}

TEST_CASE("tests validate their inputs", "[freq]") {
    const OrdinalCdf two = synthetic({0.5}, 100);
    const OrdinalCdf three = synthetic({0.3, 0.7}, 100);
    REQUIRE_THROWS_AS(test_sc(two, two, 0.05, cfg()), std::invalid_argument);
    REQUIRE_THROWS_AS(test_sd1(two, three, 0.05, cfg()), std::invalid_argument);
    REQUIRE_THROWS_AS(test_sd1(two, two, 0.7, cfg()), std::invalid_argument);
    REQUIRE_THROWS_AS(test_nonsd1(two, three, 0.05), std::invalid_argument);
}

TEST_CASE("test_sd1: zero-variance certainty dominates", "[freq]") {
    // F_X(1) = 0.5 vs F_Y(1) = 0 with zero variance on the Y side only;
    // pooled variance positive, ordinary rejection at scale
    const OrdinalCdf x = synthetic({0.5, 0.8}, 100000);
    const OrdinalCdf y = synthetic({0.0, 0.8}, 100000);
    const TestReport rep = test_sd1(x, y, 0.05, cfg(10));
    REQUIRE(rep.reject);

    // both sides degenerate at a category with a positive difference:
    // infinite t-statistic, rejection regardless of the critical value
    OrdinalCdf xi = synthetic({0.5, 0.8}, 1000);
    OrdinalCdf yi = synthetic({0.4, 0.8}, 1000);
    xi.Sigma(0, 0) = 0.0;
    yi.Sigma(0, 0) = 0.0;
    const TestReport rep2 = test_sd1(xi, yi, 0.05, cfg(11));
    REQUIRE(std::isinf(rep2.statistic));
    REQUIRE(rep2.reject);
}
