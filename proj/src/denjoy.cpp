#include "mexp/denjoy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mexp/errors.hpp"
#include "mexp/geometry.hpp"

namespace mexp {

namespace {
constexpr std::size_t kBuckets = 4096;
}

CircleAffineMap::CircleAffineMap(std::vector<double> knots, std::vector<double> lifted_images)
    : knots_(std::move(knots)), images_(std::move(lifted_images)) {
    const std::size_t n = knots_.size();
    if (n < 2 || images_.size() != n) throw ConstructionError("affine circle map needs matching knot/image lists");
    if (knots_.front() < 0.0 || knots_.back() >= 1.0) throw ConstructionError("knots must lie in [0,1)");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(knots_[i] > knots_[i - 1])) throw ConstructionError("knots must be strictly increasing");
        if (!(images_[i] > images_[i - 1])) throw ConstructionError("map must be strictly increasing");
    }
    if (!(images_.back() < images_.front() + 1.0)) throw ConstructionError("map must have degree one");

    slopes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x1 = i + 1 < n ? knots_[i + 1] : knots_[0] + 1.0;
        const double y1 = i + 1 < n ? images_[i + 1] : images_[0] + 1.0;
        slopes_[i] = (y1 - images_[i]) / (x1 - knots_[i]);
    }

    bucket_.resize(kBuckets);
    std::size_t i = 0;
    for (std::size_t b = 0; b < kBuckets; ++b) {
        const double lo = static_cast<double>(b) / kBuckets;
        while (i + 1 < n && knots_[i + 1] <= lo) ++i;
        bucket_[b] = i;
    }
}

std::size_t CircleAffineMap::segment(double p) const {
    if (p < knots_.front()) return knots_.size() - 1;
    std::size_t b = static_cast<std::size_t>(p * kBuckets);
    if (b >= kBuckets) b = kBuckets - 1;
    std::size_t i = bucket_[b];
    while (i + 1 < knots_.size() && knots_[i + 1] <= p) ++i;
    return i;
}

double CircleAffineMap::lift(double p) const {
    const std::size_t i = segment(p);
    const double px = p < knots_.front() ? p + 1.0 : p;
    return images_[i] + (px - knots_[i]) * slopes_[i];
}

double CircleAffineMap::operator()(double p) const { return wrap_unit(lift(p)); }

CircleAffineMap CircleAffineMap::inverse() const {
    const std::size_t n = knots_.size();
    std::vector<double> wrapped(n);
    for (std::size_t i = 0; i < n; ++i) wrapped[i] = wrap_unit(images_[i]);
    const std::size_t start =
        static_cast<std::size_t>(std::min_element(wrapped.begin(), wrapped.end()) - wrapped.begin());
    std::vector<double> k(n), y(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i = (start + j) % n;
        k[j] = wrapped[i];
        y[j] = knots_[i] + (start + j >= n ? 1.0 : 0.0);
    }
    // the inverse's lift must start in [0,1)
    const double shift = std::floor(y[0]);
    for (double& v : y) v -= shift;
    return CircleAffineMap(std::move(k), std::move(y));
}

double golden_conjugate() { return (std::sqrt(5.0) - 1.0) / 2.0; }

const DenjoyGap& DenjoyConstruction::gap(int k) const {
    if (k < -gap_bound || k > gap_bound) throw std::out_of_range("gap index " + std::to_string(k));
    return gaps[static_cast<std::size_t>(by_index_[static_cast<std::size_t>(k + gap_bound)])];
}

double DenjoyConstruction::smallest_gap() const {
    double m = 1.0;
    for (const auto& g : gaps) m = std::min(m, g.length);
    return m;
}

double DenjoyConstruction::staircase(double p) const {
    // gaps[0] starts at 0, so some gap has left <= p
    auto it = std::upper_bound(gaps.begin(), gaps.end(), p, [](double v, const DenjoyGap& g) { return v < g.left; });
    const DenjoyGap& g = *std::prev(it);
    if (p <= g.right()) return g.theta;
    return std::min(g.theta + 2.0 * (p - g.right()), std::nextafter(1.0, 0.0));
}

double DenjoyConstruction::staircase_lift(double p) const {
    const double f = std::floor(p);
    return f + staircase(p - f);
}

double DenjoyConstruction::staircase_inverse(double t) const {
    const std::size_t below =
        static_cast<std::size_t>(std::lower_bound(sorted_theta_.begin(), sorted_theta_.end(), t) - sorted_theta_.begin());
    return 0.5 * t + prefix_[below];
}

bool DenjoyConstruction::in_open_gap(double p) const {
    auto it = std::upper_bound(gaps.begin(), gaps.end(), p, [](double v, const DenjoyGap& g) { return v < g.left; });
    if (it == gaps.begin()) return false;
    const DenjoyGap& g = *std::prev(it);
    return p > g.left && p < g.right();
}

DenjoyConstruction build_denjoy(double alpha, int gap_bound, double profile) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConstructionError("rotation number must lie in (0,1)");
    if (gap_bound < 8) throw ConstructionError("gap bound N must be at least 8");
    if (!(profile > 0.0)) throw ConstructionError("gap profile must be positive");

    DenjoyConstruction d;
    d.alpha = alpha;
    d.gap_bound = gap_bound;
    d.profile = profile;
    d.eta = 1e-10;

    const int n = gap_bound;
    d.gaps.resize(static_cast<std::size_t>(2 * n + 1));
    double total = 0.0;
    for (int k = -n; k <= n; ++k) {
        DenjoyGap& g = d.gaps[static_cast<std::size_t>(k + n)];
        g.index = k;
        g.theta = wrap_unit(static_cast<double>(k) * alpha);
        const double a = std::abs(k) + profile;
        g.length = 1.0 / (a * (a + 1.0));
        total += g.length;
    }
    for (auto& g : d.gaps) g.length *= 0.5 / total;
    std::sort(d.gaps.begin(), d.gaps.end(), [](const DenjoyGap& a, const DenjoyGap& b) { return a.theta < b.theta; });

    // orbit points k*alpha for |k| <= N+1 must be well separated
    std::vector<double> orbit;
    for (const auto& g : d.gaps) orbit.push_back(g.theta);
    const double theta_next = wrap_unit(static_cast<double>(n + 1) * alpha);
    const double theta_prev = wrap_unit(static_cast<double>(-n - 1) * alpha);
    orbit.push_back(theta_next);
    orbit.push_back(theta_prev);
    std::sort(orbit.begin(), orbit.end());
    constexpr double kMinSeparation = 1e-7;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        const double next = i + 1 < orbit.size() ? orbit[i + 1] : orbit[0] + 1.0;
        if (next - orbit[i] < kMinSeparation)
            throw ConstructionError("orbit points of alpha too close to separate " + std::to_string(2 * n + 1) + " gaps");
    }

    d.prefix_.assign(d.gaps.size() + 1, 0.0);
    d.sorted_theta_.resize(d.gaps.size());
    for (std::size_t i = 0; i < d.gaps.size(); ++i) {
        d.sorted_theta_[i] = d.gaps[i].theta;
        d.gaps[i].left = 0.5 * d.gaps[i].theta + d.prefix_[i];
        d.prefix_[i + 1] = d.prefix_[i] + d.gaps[i].length;
    }
    d.by_index_.resize(d.gaps.size());
    for (std::size_t i = 0; i < d.gaps.size(); ++i)
        d.by_index_[static_cast<std::size_t>(d.gaps[i].index + n)] = static_cast<int>(i);
    for (const auto& g : d.gaps) {
        d.breakpoints.push_back(g.left);
        d.breakpoints.push_back(g.right());
    }

    // Knots of D. Gap endpoints of I_k go to those of I_{k+1}. The last gap
    // I_N is squeezed into an eta-zone around X(theta_{N+1}); an eta-zone
    // around X(theta_{-N-1}) is stretched onto I_{-N}. Elsewhere D = X∘R∘h.
    std::vector<std::pair<double, double>> nodes;
    for (int k = -n; k < n; ++k) {
        const DenjoyGap& g = d.gap(k);
        const DenjoyGap& h = d.gap(k + 1);
        nodes.emplace_back(g.left, h.left);
        nodes.emplace_back(g.right(), h.right());
    }
    const double eta = d.eta;
    const DenjoyGap& last = d.gap(n);
    const DenjoyGap& first = d.gap(-n);
    const double sink = d.staircase_inverse(theta_next);
    const double source = d.staircase_inverse(theta_prev);
    nodes.emplace_back(last.left - eta, sink - eta);
    nodes.emplace_back(last.right() + eta, sink + eta);
    nodes.emplace_back(source - eta, first.left - eta);
    nodes.emplace_back(source + eta, first.right() + eta);
    for (auto& [x, y] : nodes) {
        x = wrap_unit(x);
        y = wrap_unit(y);
    }
    std::sort(nodes.begin(), nodes.end());

    std::vector<double> knots, lifts;
    for (const auto& [x, y] : nodes) {
        knots.push_back(x);
        lifts.push_back(lifts.empty() ? y : lifts.back() + wrap_unit(y - lifts.back()));
    }
    d.map = CircleAffineMap(std::move(knots), std::move(lifts));
    d.inverse_map = d.map.inverse();
    return d;
}

}  // namespace mexp
