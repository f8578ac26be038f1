#include "mexp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mexp {

Interval wilson(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    Interval ci{std::max(0.0, centre - half), std::min(1.0, centre + half)};
    // pin the degenerate ends exactly
    if (successes == 0) ci.lo = 0.0;
    if (successes == trials) ci.hi = 1.0;
    return ci;
}

LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y, std::span<const double> w) {
    if (x.size() != y.size() || x.size() != w.size()) throw std::invalid_argument("fit: size mismatch");
    LineFit fit;
    fit.points = x.size();
    if (x.size() < 2) throw std::invalid_argument("fit: need at least two points");

    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
    }
    const double mx = sx / sw;
    const double my = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double rss = 0.0, uw = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        rss += w[i] * r * r;
        uw += r * r;
    }
    fit.residual_rms = std::sqrt(uw / static_cast<double>(x.size()));
    double model_se = std::sqrt(1.0 / sxx);
    double resid_se = x.size() > 2 ? std::sqrt(rss / static_cast<double>(x.size() - 2) / sxx) : 0.0;
    fit.slope_se = std::max(model_se, resid_se);
    return fit;
}

}  // namespace mexp
