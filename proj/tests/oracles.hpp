#pragma once

// Brute-force reference computations, written independently of the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

inline double circ(double a, double b) {
    double d = std::fabs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

inline double frac(double v) { return v - std::floor(v); }

using Map1 = std::function<double(double)>;
using Dist1 = std::function<double(double, double)>;

/// Lebesgue measure of {y : d(f^i x, f^i y) <= delta, 0 <= i < n} by the
/// midpoint rule on `cells` cells of [0,1).
inline double one_sided_ball(const Map1& f, const Dist1& d, double x, double delta, int n, int cells) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    double p = x;
    for (int i = 0; i < n; ++i) {
        xs[static_cast<std::size_t>(i)] = p;
        p = f(p);
    }
    std::int64_t inside = 0;
    for (int c = 0; c < cells; ++c) {
        double y = (c + 0.5) / cells;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            ok = d(xs[static_cast<std::size_t>(i)], y) <= delta;
            y = f(y);
        }
        if (ok) ++inside;
    }
    return static_cast<double>(inside) / cells;
}

/// Same, with the two-sided window -n <= i < n.
inline double two_sided_ball(const Map1& f, const Map1& finv, const Dist1& d, double x, double delta, int n, int cells) {
    std::vector<double> fw(static_cast<std::size_t>(n)), bw(static_cast<std::size_t>(n));
    double p = x, q = x;
    for (int i = 0; i < n; ++i) {
        fw[static_cast<std::size_t>(i)] = p;
        p = f(p);
        q = finv(q);
        bw[static_cast<std::size_t>(i)] = q;
    }
    std::int64_t inside = 0;
    for (int c = 0; c < cells; ++c) {
        const double y0 = (c + 0.5) / cells;
        double y = y0;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            ok = d(fw[static_cast<std::size_t>(i)], y) <= delta;
            y = f(y);
        }
        y = y0;
        for (int i = 0; i < n && ok; ++i) {
            y = finv(y);
            ok = d(bw[static_cast<std::size_t>(i)], y) <= delta;
        }
        if (ok) ++inside;
    }
    return static_cast<double>(inside) / cells;
}

/// Area of {(u,v) : circ(u,a) + circ(v,b) <= r} on a cells x cells midpoint grid.
inline double torus_l1_ball(double a, double b, double r, int cells) {
    std::int64_t inside = 0;
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j)
            if (circ((i + 0.5) / cells, a) + circ((j + 0.5) / cells, b) <= r) ++inside;
    return static_cast<double>(inside) / (static_cast<double>(cells) * cells);
}

/// Mean of a 0/1 indicator over [0,1) on a midpoint grid.
inline double grid_fraction(const std::function<bool(double)>& pred, int cells) {
    std::int64_t inside = 0;
    for (int c = 0; c < cells; ++c)
        if (pred((c + 0.5) / cells)) ++inside;
    return static_cast<double>(inside) / cells;
}

/// Binomial standard error of a proportion p over n draws.
inline double binom_se(double p, double n) { return std::sqrt(std::max(p * (1.0 - p), 1e-12) / n); }

/// Small hand-rolled generator for property tests.
struct Gen {
    std::uint64_t s;
    explicit Gen(std::uint64_t seed) : s(seed * 0x9E3779B97F4A7C15ULL + 1) {}
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
};

}  // namespace oracle
