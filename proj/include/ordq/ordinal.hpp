#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ordq {

/// Tabulated ordinal data for one group: per-category totals of sampling
/// weights (plain counts when the data are unweighted) plus the raw
/// observation count. Categories are 1..J after ingestion; any label
/// mapping happens upstream.
struct OrdinalSample {
    int J = 0;
    std::vector<double> counts;  // per-category weight totals, size J
    std::int64_t n_raw = 0;      // unweighted observation count
    double weight_sq_sum = 0.0;  // sum of squared weights; 0 means unit weights
    std::string label;

    double total_weight() const {
        return std::accumulate(counts.begin(), counts.end(), 0.0);
    }

    /// Sample size used in sqrt(n) scaling: n_raw for unit weights,
    /// otherwise the Kish effective size (sum w)^2 / sum w^2.
    double effective_n() const {
        if (weight_sq_sum <= 0.0) return static_cast<double>(n_raw);
        const double w = total_weight();
        return w * w / weight_sq_sum;
    }

    void validate() const {
        if (J < 2) throw std::invalid_argument("OrdinalSample: J must be >= 2");
        if (static_cast<int>(counts.size()) != J)
            throw std::invalid_argument("OrdinalSample: counts must have J entries");
        int positive = 0;
        for (double c : counts) {
            if (!(c >= 0.0))
                throw std::invalid_argument("OrdinalSample: counts must be nonnegative");
            if (c > 0.0) ++positive;
        }
        if (!(total_weight() > 0.0))
            throw std::invalid_argument("OrdinalSample: total weight must be positive");
        if (n_raw < positive)
            throw std::invalid_argument(
                "OrdinalSample: n_raw below number of occupied categories");
    }

    static OrdinalSample from_counts(std::vector<double> counts, std::string label = "",
                                     std::int64_t n_raw = -1) {
        OrdinalSample s;
        s.J = static_cast<int>(counts.size());
        s.counts = std::move(counts);
        s.label = std::move(label);
        s.n_raw = (n_raw >= 0) ? n_raw
                               : static_cast<std::int64_t>(std::llround(s.total_weight()));
        s.validate();
        return s;
    }
};

/// Estimated ordinal CDF: F(1..J-1) with F(J) == 1 implicit, the effective
/// sample size, and the asymptotic covariance estimate of sqrt(n)*(Fhat - F).
struct OrdinalCdf {
    int J = 0;
    std::vector<double> F;   // size J-1, monotone nondecreasing in [0,1]
    double n = 0.0;
    Eigen::MatrixXd Sigma;   // (J-1) x (J-1), symmetric PSD

    double F_at(int j) const { return F.at(static_cast<std::size_t>(j) - 1); }

    void validate() const {
        if (J < 2) throw std::invalid_argument("OrdinalCdf: J must be >= 2");
        if (static_cast<int>(F.size()) != J - 1)
            throw std::invalid_argument("OrdinalCdf: F must have J-1 entries");
        double prev = 0.0;
        for (double f : F) {
            if (!(f >= prev - 1e-12) || !(f <= 1.0 + 1e-12))
                throw std::invalid_argument("OrdinalCdf: F must be monotone in [0, 1]");
            prev = f;
        }
        if (Sigma.rows() != J - 1 || Sigma.cols() != J - 1)
            throw std::invalid_argument("OrdinalCdf: Sigma must be (J-1) x (J-1)");
    }

    /// Build directly from CDF values, with the iid multinomial covariance
    /// Sigma_jk = F(min)*(1 - F(max)).
    static OrdinalCdf from_cdf_values(const std::vector<double>& F, double n) {
        OrdinalCdf c;
        c.J = static_cast<int>(F.size()) + 1;
        c.F = F;
        c.n = n;
        const int d = c.J - 1;
        c.Sigma.resize(d, d);
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                c.Sigma(j, k) = F[static_cast<std::size_t>(std::min(j, k))] *
                                (1.0 - F[static_cast<std::size_t>(std::max(j, k))]);
        c.validate();
        return c;
    }
};

/// Ordered, contiguous, exhaustive grouping of categories 1..J.
struct MergeSpec {
    std::vector<std::pair<int, int>> groups;  // inclusive [first, last] ranges

    void validate(int J) const {
        if (groups.empty()) throw std::invalid_argument("MergeSpec: no groups");
        int expect = 1;
        for (const auto& [lo, hi] : groups) {
            if (lo != expect || hi < lo)
                throw std::invalid_argument(
                    "MergeSpec: ranges must be contiguous, ordered, and disjoint");
            expect = hi + 1;
        }
        if (expect != J + 1)
            throw std::invalid_argument("MergeSpec: ranges must cover 1.." +
                                        std::to_string(J));
    }

    static MergeSpec identity(int J) {
        MergeSpec m;
        for (int j = 1; j <= J; ++j) m.groups.emplace_back(j, j);
        return m;
    }

    /// Parse "1-12,13,14,19-25" style range lists.
    static MergeSpec parse(const std::string& text) {
        MergeSpec m;
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t comma = text.find(',', pos);
            if (comma == std::string::npos) comma = text.size();
            const std::string tok = text.substr(pos, comma - pos);
            std::size_t dash = tok.find('-');
            try {
                if (dash == std::string::npos) {
                    const int v = std::stoi(tok);
                    m.groups.emplace_back(v, v);
                } else {
                    m.groups.emplace_back(std::stoi(tok.substr(0, dash)),
                                          std::stoi(tok.substr(dash + 1)));
                }
            } catch (const std::exception&) {
                throw std::invalid_argument("MergeSpec: bad range token '" + tok + "'");
            }
            pos = comma + 1;
        }
        if (m.groups.empty()) throw std::invalid_argument("MergeSpec: empty spec");
        return m;
    }
};

/// Weighted empirical CDF with the iid covariance estimate
/// Sigma_jk = Fhat(min(j,k)) * (1 - Fhat(max(j,k))).
inline OrdinalCdf estimate_cdf(const OrdinalSample& sample) {
    sample.validate();
    const double total = sample.total_weight();
    std::vector<double> F(static_cast<std::size_t>(sample.J) - 1);
    double cum = 0.0;
    for (int j = 0; j < sample.J - 1; ++j) {
        cum += sample.counts[static_cast<std::size_t>(j)];
        F[static_cast<std::size_t>(j)] = cum / total;
    }
    OrdinalCdf cdf = OrdinalCdf::from_cdf_values(F, sample.effective_n());
    return cdf;
}

inline OrdinalSample merge_categories(const OrdinalSample& sample, const MergeSpec& spec) {
    sample.validate();
    spec.validate(sample.J);
    OrdinalSample out;
    out.J = static_cast<int>(spec.groups.size());
    out.counts.reserve(spec.groups.size());
    for (const auto& [lo, hi] : spec.groups) {
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) sum += sample.counts[static_cast<std::size_t>(j - 1)];
        out.counts.push_back(sum);
    }
    out.n_raw = sample.n_raw;
    out.weight_sq_sum = sample.weight_sq_sum;
    out.label = sample.label;
    out.validate();
    return out;
}

/// Componentwise ordinal CDF difference F_X(j) - F_Y(j), j = 1..J-1.
inline std::vector<double> cdf_difference(const OrdinalCdf& x, const OrdinalCdf& y) {
    if (x.J != y.J)
        throw std::invalid_argument("cdf_difference: category counts differ");
    std::vector<double> d(x.F.size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = x.F[j] - y.F[j];
    return d;
}

} // namespace ordq
