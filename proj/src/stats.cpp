#include "usf/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace usf {

Interval wilson_interval(std::uint64_t hits, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double binomial_se(double p, std::uint64_t n) {
    return n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

double chi_square_pvalue(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs) {
    if (observed.size() != probs.size() || observed.size() < 2)
        throw std::invalid_argument("chi-square needs matching vectors of at least two cells");
    std::uint64_t n = 0;
    for (auto o : observed) n += o;
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double e = probs[i] * static_cast<double>(n);
        double d = static_cast<double>(observed[i]) - e;
        stat += d * d / e;
    }
    boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

LineFit weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
    if (x.size() != y.size() || x.size() != w.size() || x.size() < 2)
        throw std::invalid_argument("line fit needs at least two weighted points");
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.slope_se = std::sqrt(1.0 / sxx);
    return f;
}

LineFit log_proportion_fit(const std::vector<double>& x, const std::vector<std::uint64_t>& hits,
                           const std::vector<std::uint64_t>& samples) {
    std::vector<double> y(x.size()), w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double n = static_cast<double>(samples[i]);
        const double h = hits[i] == 0 ? 0.5 : static_cast<double>(hits[i]);
        const double p = h / n;
        y[i] = std::log(p);
        // A point with p_hat = 1 would get infinite weight; floor its variance.
        const double var = std::max((1.0 - p) / (n * p), 0.25 / (n * n));
        w[i] = 1.0 / var;
    }
    return weighted_line_fit(x, y, w);
}

const char* to_string(Trend t) {
    switch (t) {
        case Trend::Decaying: return "decaying";
        case Trend::Flat: return "flat";
        case Trend::Growing: return "growing";
    }
    return "flat";
}

Trend classify_trend(const LineFit& fit) {
    if (fit.slope + 2.0 * fit.slope_se < 0.0) return Trend::Decaying;
    if (fit.slope - 2.0 * fit.slope_se > 0.0) return Trend::Growing;
    return Trend::Flat;
}

}  // namespace usf
