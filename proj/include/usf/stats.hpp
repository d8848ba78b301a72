#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace usf {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t hits, std::uint64_t n, double z = 1.96);

/// Standard error sqrt(p(1-p)/n) of an empirical proportion.
double binomial_se(double p, std::uint64_t n);

/// Upper-tail chi-square p-value of observed counts against probabilities.
double chi_square_pvalue(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs);

/// Total variation distance between an empirical law and an exact one;
/// keys missing from either side count with probability zero.
template <class Key>
double total_variation(const std::map<Key, std::uint64_t>& counts, std::uint64_t n,
                       const std::map<Key, double>& exact) {
    double s = 0.0;
    for (const auto& [key, p] : exact) {
        auto it = counts.find(key);
        double q = it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n);
        s += q > p ? q - p : p - q;
    }
    for (const auto& [key, c] : counts)
        if (!exact.count(key)) s += static_cast<double>(c) / static_cast<double>(n);
    return 0.5 * s;
}

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double slope_se = 0.0;
};

/// Weighted least squares y = a + b x with weights 1/variance.
LineFit weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w);

/**
 * Fit of log p_hat against x for binomial estimates, weights from the delta
 * method var(log p_hat) = (1-p)/(N p). Zero counts are replaced by 1/2
 * (continuity correction) so every point has a finite logarithm.
 */
LineFit log_proportion_fit(const std::vector<double>& x, const std::vector<std::uint64_t>& hits,
                           const std::vector<std::uint64_t>& samples);

enum class Trend { Decaying, Flat, Growing };
const char* to_string(Trend t);

/// Decaying if slope + 2 se < 0, growing if slope - 2 se > 0, else flat.
Trend classify_trend(const LineFit& fit);

}  // namespace usf
