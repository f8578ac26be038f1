#pragma once

#include <cstdint>
#include <span>

namespace mexp {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double half_width() const { return 0.5 * (hi - lo); }
    bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

/// Wilson score interval for `successes` out of `trials`.
Interval wilson(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double residual_rms = 0.0;
    std::size_t points = 0;
};

/// Weighted least squares y ~ a + b x. Weights are inverse variances; the
/// reported standard error is the larger of the model-based and the
/// residual-scaled one.
LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y, std::span<const double> w);

}  // namespace mexp
