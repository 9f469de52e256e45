#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "bellsim/coding.hpp"
#include "bellsim/rejection.hpp"

namespace bellsim {

// Hypothesis tests used by the experiment layer: goodness of fit of
// the observed message histogram against its geometric law, a
// homogeneity test showing the histogram does not depend on the first
// party's setting, and a KS test for uniform variates. Pooling rules
// follow the usual expected-count >= 5 convention.

/// Upper tail of the chi-square distribution with df degrees of
/// freedom, P(X >= statistic).
inline double chi_square_survival(double statistic, unsigned df) {
    if (!(statistic >= 0.0)) {
        throw std::invalid_argument("chi_square_survival: statistic must be >= 0");
    }
    if (df < 1) {
        throw std::invalid_argument("chi_square_survival: df must be >= 1");
    }
    return boost::math::gamma_q(0.5 * df, 0.5 * statistic);
}

struct GofResult {
    double statistic;
    unsigned df;
    double p_value;
};

/// Chi-square goodness of fit of an observed histogram of K against
/// the geometric law with known success probability p. Bins are
/// {1}, ..., {kmax} plus a pooled tail {> kmax}, with kmax chosen so
/// every expected count stays >= min_expected; p is fixed a priori, so
/// df = kmax (one less than the number of bins).
inline GofResult chi_square_geometric_fit(const KCounts& counts, double p,
                                          double min_expected = 5.0) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument(
            "chi_square_geometric_fit: p must be in (0, 1)");
    }
    if (counts.empty()) {
        throw std::invalid_argument("chi_square_geometric_fit: empty histogram");
    }
    std::uint64_t total = 0;
    for (const auto& [k, n] : counts) total += n;
    const double n_total = static_cast<double>(total);
    const double q = 1.0 - p;

    std::uint64_t kmax = 1;
    while (n_total * geometric_pmf(p, kmax + 1) >= min_expected) ++kmax;
    // Tail mass is (1-p)^kmax; shrink until the tail bin is populated.
    while (kmax > 1 && n_total * std::pow(q, static_cast<double>(kmax)) <
                           min_expected) {
        --kmax;
    }

    std::vector<double> observed(kmax + 1, 0.0);
    for (const auto& [k, n] : counts) {
        const std::size_t bin =
            (k <= kmax) ? static_cast<std::size_t>(k - 1) : kmax;
        observed[bin] += static_cast<double>(n);
    }

    double statistic = 0.0;
    for (std::uint64_t k = 1; k <= kmax; ++k) {
        const double expected = n_total * geometric_pmf(p, k);
        const double d = observed[k - 1] - expected;
        statistic += d * d / expected;
    }
    const double tail_expected =
        n_total * std::pow(q, static_cast<double>(kmax));
    const double tail_d = observed[kmax] - tail_expected;
    statistic += tail_d * tail_d / tail_expected;

    const unsigned df = static_cast<unsigned>(kmax);
    return GofResult{statistic, df, chi_square_survival(statistic, df)};
}

/// Chi-square test that several histograms of K were drawn from one
/// common distribution. Columns are {1}, ..., {kmax} plus a pooled
/// tail, with kmax chosen so every expected cell stays >= min_expected;
/// expected cells are row_total * column_total / grand_total and
/// df = (rows - 1) * (columns - 1).
inline GofResult chi_square_homogeneity(const std::vector<KCounts>& groups,
                                        double min_expected = 5.0) {
    if (groups.size() < 2) {
        throw std::invalid_argument(
            "chi_square_homogeneity: need at least two groups");
    }

    std::uint64_t max_k = 0;
    std::vector<double> row_totals(groups.size(), 0.0);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (const auto& [k, n] : groups[i]) {
            row_totals[i] += static_cast<double>(n);
            max_k = std::max(max_k, k);
        }
        if (row_totals[i] == 0.0) {
            throw std::invalid_argument("chi_square_homogeneity: empty group");
        }
    }
    const double grand = std::accumulate(row_totals.begin(), row_totals.end(), 0.0);
    const double row_min = *std::min_element(row_totals.begin(), row_totals.end());

    const auto column_total = [&](std::uint64_t k) {
        double t = 0.0;
        for (const auto& g : groups) {
            const auto it = g.find(k);
            if (it != g.end()) t += static_cast<double>(it->second);
        }
        return t;
    };

    // Largest prefix 1..kmax whose columns all keep expected cells
    // above the floor even in the smallest row.
    std::uint64_t kmax = 0;
    while (kmax < max_k &&
           row_min * column_total(kmax + 1) / grand >= min_expected) {
        ++kmax;
    }
    double tail_total = 0.0;
    for (std::uint64_t k = kmax + 1; k <= max_k; ++k) tail_total += column_total(k);
    while (kmax > 1 && tail_total > 0.0 &&
           row_min * tail_total / grand < min_expected) {
        tail_total += column_total(kmax);
        --kmax;
    }
    const bool has_tail = tail_total > 0.0;
    const std::size_t columns = static_cast<std::size_t>(kmax) + (has_tail ? 1 : 0);
    if (kmax == 0 || columns < 2) {
        throw std::invalid_argument(
            "chi_square_homogeneity: too little data to form two columns");
    }

    std::vector<std::vector<double>> observed(
        groups.size(), std::vector<double>(columns, 0.0));
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (const auto& [k, n] : groups[i]) {
            const std::size_t col = (k <= kmax)
                                        ? static_cast<std::size_t>(k - 1)
                                        : columns - 1;
            observed[i][col] += static_cast<double>(n);
        }
    }
    std::vector<double> col_totals(columns, 0.0);
    for (const auto& row : observed) {
        for (std::size_t j = 0; j < columns; ++j) col_totals[j] += row[j];
    }

    double statistic = 0.0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = 0; j < columns; ++j) {
            const double expected = row_totals[i] * col_totals[j] / grand;
            const double d = observed[i][j] - expected;
            statistic += d * d / expected;
        }
    }
    const unsigned df = static_cast<unsigned>((groups.size() - 1) * (columns - 1));
    return GofResult{statistic, df, chi_square_survival(statistic, df)};
}

/// Two-sided Kolmogorov-Smirnov statistic of a sample against a
/// continuous CDF: sup_x |F_n(x) - F(x)|.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, const Cdf& cdf) {
    if (samples.empty()) {
        throw std::invalid_argument("ks_statistic: empty sample");
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

/// Asymptotic two-sided KS critical value at significance alpha:
/// sqrt(ln(2/alpha) / 2) / sqrt(n).
inline double ks_critical_value(std::uint64_t n, double alpha) {
    if (n < 1) {
        throw std::invalid_argument("ks_critical_value: n must be >= 1");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("ks_critical_value: alpha must be in (0, 1)");
    }
    return std::sqrt(std::log(2.0 / alpha) / 2.0) /
           std::sqrt(static_cast<double>(n));
}

}  // namespace bellsim
