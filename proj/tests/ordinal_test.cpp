#include "ordq/ordinal.hpp"
#include "ordq/rng.hpp"

#include "fixtures.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

using Catch::Approx;
using namespace ordq;

namespace {

std::vector<double> counts_from_cdf(const std::vector<double>& F, double n) {
    std::vector<double> c;
    double prev = 0.0;
    for (double f : F) {
        c.push_back((f - prev) * n);
        prev = f;
    }
    c.push_back((1.0 - prev) * n);
    return c;
}

} // namespace

TEST_CASE("estimate_cdf: tabulated health counts reproduce the CDF", "[ordinal]") {
    const auto counts = counts_from_cdf(fixtures::kPoverty2006, fixtures::kPovertyN2006);
    const OrdinalCdf c = estimate_cdf(OrdinalSample::from_counts(counts, "2006"));
    REQUIRE(c.J == 5);
    for (std::size_t j = 0; j < 4; ++j)
        REQUIRE(c.F[j] == Approx(fixtures::kPoverty2006[j]).margin(1e-12));
    REQUIRE(c.n == Approx(fixtures::kPovertyN2006));
}

TEST_CASE("estimate_cdf: uniform counts give F(j) = j/J", "[ordinal]") {
    const OrdinalCdf c = estimate_cdf(OrdinalSample::from_counts({3, 3, 3, 3, 3, 3}));
    for (int j = 1; j <= 5; ++j)
        REQUIRE(c.F_at(j) == Approx(j / 6.0).margin(1e-15));
}

TEST_CASE("estimate_cdf: covariance formula by hand", "[ordinal]") {
    const OrdinalCdf c = estimate_cdf(OrdinalSample::from_counts({3, 1, 0, 4}, "", 8));
    // F = (0.375, 0.5, 0.5); Sigma_13 = F(1)(1 - F(3))
    REQUIRE(c.Sigma(0, 2) == Approx(0.375 * (1.0 - 0.5)).margin(1e-15));
    REQUIRE(c.Sigma(0, 2) == Approx(0.1875).margin(1e-15));
    REQUIRE(c.Sigma(1, 1) == Approx(0.25).margin(1e-15));
}

TEST_CASE("estimate_cdf: invalid samples rejected", "[ordinal]") {
    OrdinalSample zero;
    zero.J = 3;
    zero.counts = {0.0, 0.0, 0.0};
    zero.n_raw = 0;
    REQUIRE_THROWS_AS(estimate_cdf(zero), std::invalid_argument);

    OrdinalSample negative;
    negative.J = 2;
    negative.counts = {1.0, -0.5};
    negative.n_raw = 2;
    REQUIRE_THROWS_AS(estimate_cdf(negative), std::invalid_argument);

    OrdinalSample small_n;
    small_n.J = 3;
    small_n.counts = {1.0, 1.0, 1.0};
    small_n.n_raw = 2;  // fewer observations than occupied categories
    REQUIRE_THROWS_AS(estimate_cdf(small_n), std::invalid_argument);
}

TEST_CASE("estimate_cdf: F monotone for random counts", "[ordinal]") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> jdist(2, 9);
    std::exponential_distribution<double> mass(1.0);
    for (int rep = 0; rep < 200; ++rep) {
        const int J = jdist(rng);
        std::vector<double> counts(static_cast<std::size_t>(J));
        for (double& c : counts) c = mass(rng);
        const OrdinalCdf cdf =
            estimate_cdf(OrdinalSample::from_counts(counts, "", J));
        for (std::size_t j = 1; j < cdf.F.size(); ++j)
            REQUIRE(cdf.F[j] >= cdf.F[j - 1]);
        REQUIRE(cdf.F.back() <= 1.0 + 1e-12);
    }
}

TEST_CASE("estimate_cdf: Kish effective size for weighted data", "[ordinal]") {
    OrdinalSample s;
    s.J = 2;
    s.counts = {3.0, 3.0};          // total weight 6
    s.weight_sq_sum = 1.0 + 4.0 + 1.0 + 4.0 + 1.0 + 1.0;  // weights 1,2,1,2,1,1
    s.n_raw = 6;
    const OrdinalCdf c = estimate_cdf(s);
    REQUIRE(c.n == Approx(36.0 / 12.0));
    // unit weights fall back to n_raw
    const OrdinalCdf u = estimate_cdf(OrdinalSample::from_counts({2, 2}));
    REQUIRE(u.n == Approx(4.0));
}

TEST_CASE("estimate_cdf: Sigma matches Monte Carlo covariance", "[ordinal][mc]") {
    const std::vector<double> pmf{0.2, 0.3, 0.4, 0.1};
    std::vector<double> F{0.2, 0.5, 0.9};
    const int n = 200, reps = 5000;
    Rng rng = make_rng(31);
    std::vector<std::vector<double>> w(3, std::vector<double>(reps));
    for (int r = 0; r < reps; ++r) {
        const auto counts = sample_multinomial(rng, n, pmf);
        double cum = 0.0;
        for (int j = 0; j < 3; ++j) {
            cum += static_cast<double>(counts[static_cast<std::size_t>(j)]);
            w[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)] =
                std::sqrt(n) * (cum / n - F[static_cast<std::size_t>(j)]);
        }
    }
    for (int j = 0; j < 3; ++j) {
        for (int k = j; k < 3; ++k) {
            double mean = 0.0, m2 = 0.0;
            for (int r = 0; r < reps; ++r) {
                const double prod =
                    w[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)] *
                    w[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)];
                mean += prod;
                m2 += prod * prod;
            }
            mean /= reps;
            const double var = m2 / reps - mean * mean;
            const double se = std::sqrt(var / reps);
            const double sigma = F[static_cast<std::size_t>(j)] *
                                 (1.0 - F[static_cast<std::size_t>(k)]);
            REQUIRE(std::fabs(mean - sigma) <= 3.0 * se + 1e-9);
        }
    }
}

TEST_CASE("merge_categories: groups of five", "[ordinal]") {
    std::vector<double> counts(25);
    for (int i = 0; i < 25; ++i) counts[static_cast<std::size_t>(i)] = i + 1.0;
    const OrdinalSample s = OrdinalSample::from_counts(counts);
    const OrdinalSample m =
        merge_categories(s, MergeSpec::parse("1-5,6-10,11-15,16-20,21-25"));
    REQUIRE(m.J == 5);
    REQUIRE(m.counts[0] == Approx(1 + 2 + 3 + 4 + 5));
    REQUIRE(m.counts[4] == Approx(21 + 22 + 23 + 24 + 25));
    REQUIRE(m.n_raw == s.n_raw);
}

TEST_CASE("merge_categories: identity spec leaves the sample unchanged", "[ordinal]") {
    const OrdinalSample s = OrdinalSample::from_counts({1, 2, 3, 4});
    const OrdinalSample m = merge_categories(s, MergeSpec::identity(4));
    REQUIRE(m.J == 4);
    REQUIRE(m.counts == s.counts);
}

TEST_CASE("merge_categories: simple addition", "[ordinal]") {
    const OrdinalSample m = merge_categories(OrdinalSample::from_counts({1, 2, 3, 4}),
                                             MergeSpec::parse("1-2,3-4"));
    REQUIRE(m.counts == std::vector<double>{3.0, 7.0});
}

TEST_CASE("merge_categories: bad specs rejected", "[ordinal]") {
    const OrdinalSample s = OrdinalSample::from_counts({1, 2, 3, 4});
    REQUIRE_THROWS_AS(merge_categories(s, MergeSpec::parse("1-2")),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(merge_categories(s, MergeSpec::parse("1-3,3-4")),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(merge_categories(s, MergeSpec::parse("2-4")),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(MergeSpec::parse("1-x"), std::invalid_argument);
}

TEST_CASE("merge then estimate == estimate then read right endpoints", "[ordinal]") {
    std::mt19937_64 rng(23);
    std::exponential_distribution<double> mass(1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> counts(10);
        for (double& c : counts) c = mass(rng);
        const OrdinalSample s = OrdinalSample::from_counts(counts, "", 10);
        const MergeSpec spec = MergeSpec::parse("1-3,4,5-9,10");
        const OrdinalCdf merged = estimate_cdf(merge_categories(s, spec));
        const OrdinalCdf full = estimate_cdf(s);
        // right endpoints of the first three ranges: categories 3, 4, 9
        REQUIRE(merged.F_at(1) == Approx(full.F_at(3)).margin(1e-12));
        REQUIRE(merged.F_at(2) == Approx(full.F_at(4)).margin(1e-12));
        REQUIRE(merged.F_at(3) == Approx(full.F_at(9)).margin(1e-12));
    }
}

TEST_CASE("cdf_difference: education comparison and antisymmetry", "[ordinal]") {
    const OrdinalCdf high = OrdinalCdf::from_cdf_values(fixtures::kEduHigh2006, 100);
    const OrdinalCdf low = OrdinalCdf::from_cdf_values(fixtures::kEduLow2006, 100);
    const std::vector<double> expected{-0.0126, -0.0471, -0.0948, -0.0304};
    const std::vector<double> d = cdf_difference(high, low);
    for (std::size_t j = 0; j < 4; ++j)
        REQUIRE(d[j] == Approx(expected[j]).margin(1e-12));

    const std::vector<double> rev = cdf_difference(low, high);
    for (std::size_t j = 0; j < 4; ++j) REQUIRE(rev[j] == Approx(-d[j]).margin(0));

    const std::vector<double> same = cdf_difference(high, high);
    for (double v : same) REQUIRE(v == 0.0);

    const OrdinalCdf a = OrdinalCdf::from_cdf_values({0.3}, 10);
    const OrdinalCdf b = OrdinalCdf::from_cdf_values({0.7}, 10);
    REQUIRE(cdf_difference(a, b)[0] == Approx(-0.4).margin(1e-15));

    REQUIRE_THROWS_AS(cdf_difference(a, high), std::invalid_argument);
}
