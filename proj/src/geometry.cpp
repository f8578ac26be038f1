#include "mexp/geometry.hpp"

#include <algorithm>
#include <limits>

#include "mexp/errors.hpp"

namespace mexp {

std::string to_string(SpaceKind kind) {
    switch (kind) {
        case SpaceKind::circle: return "circle";
        case SpaceKind::interval: return "interval";
        case SpaceKind::torus2: return "torus2";
        case SpaceKind::box: return "box";
    }
    return "?";
}

Space Space::circle() {
    Space s(SpaceKind::circle, 1);
    s.bounds_[0] = {0.0, 1.0};
    return s;
}

Space Space::interval() {
    Space s(SpaceKind::interval, 1);
    s.bounds_[0] = {0.0, 1.0};
    return s;
}

Space Space::torus2() {
    Space s(SpaceKind::torus2, 2);
    s.bounds_[0] = {0.0, 1.0};
    s.bounds_[1] = {0.0, 1.0};
    return s;
}

Space Space::box(std::vector<std::pair<double, double>> bounds) {
    if (bounds.empty() || bounds.size() > kMaxDim)
        throw DomainError("box dimension must be between 1 and " + std::to_string(kMaxDim));
    Space s(SpaceKind::box, bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (!(bounds[i].second > bounds[i].first))
            throw DomainError("box side " + std::to_string(i) + " is empty");
        s.bounds_[i] = bounds[i];
    }
    return s;
}

double Space::diameter() const {
    switch (kind_) {
        case SpaceKind::circle: return 0.5;
        case SpaceKind::interval: return 1.0;
        case SpaceKind::torus2: return 1.0;
        case SpaceKind::box: {
            double d = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) d += bounds_[i].second - bounds_[i].first;
            return d;
        }
    }
    return 0.0;
}

std::string Space::name() const {
    if (kind_ != SpaceKind::box) return to_string(kind_);
    std::string s = "box";
    for (std::size_t i = 0; i < dim_; ++i)
        s += "[" + std::to_string(bounds_[i].first) + "," + std::to_string(bounds_[i].second) + "]";
    return s;
}

Point Space::point(std::initializer_list<double> coords) const {
    return point(std::span<const double>(coords.begin(), coords.size()));
}

Point Space::point(std::span<const double> coords) const {
    if (coords.size() != dim_)
        throw DomainError("expected " + std::to_string(dim_) + " coordinates for " + name());
    Point p;
    p.kind = kind_;
    p.dim = static_cast<std::uint8_t>(dim_);
    std::copy(coords.begin(), coords.end(), p.x.begin());
    p = canonical(p);
    if (!contains(p)) throw DomainError("point outside " + name());
    return p;
}

Point Space::canonical(Point p) const {
    if (periodic())
        for (std::size_t i = 0; i < dim_; ++i) p.x[i] = wrap_unit(p.x[i]);
    return p;
}

bool Space::contains(const Point& p) const {
    if (!tags(p)) return false;
    for (std::size_t i = 0; i < dim_; ++i) {
        if (!std::isfinite(p.x[i])) return false;
        if (periodic()) {
            if (p.x[i] < 0.0 || p.x[i] >= 1.0) return false;
        } else if (p.x[i] < bounds_[i].first || p.x[i] > bounds_[i].second) {
            return false;
        }
    }
    return true;
}

Ball::Ball(Point c, double r, bool is_closed) : center(c), radius(r), closed(is_closed) {
    if (!(r > 0.0)) throw DomainError("ball radius must be positive");
}

double metric(const Point& x, const Point& y) {
    switch (x.kind) {
        case SpaceKind::circle: return circle_gap(x.x[0], y.x[0]);
        case SpaceKind::interval: return std::fabs(x.x[0] - y.x[0]);
        case SpaceKind::torus2: return circle_gap(x.x[0], y.x[0]) + circle_gap(x.x[1], y.x[1]);
        case SpaceKind::box: {
            double d = 0.0;
            for (std::size_t i = 0; i < x.dim; ++i) d += std::fabs(x.x[i] - y.x[i]);
            return d;
        }
    }
    return 0.0;
}

double distance(const Space& space, const Point& x, const Point& y) {
    if (!space.tags(x) || !space.tags(y)) throw DomainError("point does not belong to " + space.name());
    return metric(x, y);
}

bool ball_contains(const Ball& b, const Point& y) {
    if (b.center.kind != y.kind || b.center.dim != y.dim) throw DomainError("ball and point in different spaces");
    double d = metric(b.center, y);
    return b.closed ? d <= b.radius : d < b.radius;
}

std::pair<std::vector<Point>, double> probe_grid(const Space& space, std::size_t probe_count) {
    const std::size_t dim = space.dim();
    std::size_t k = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(std::max<std::size_t>(probe_count, 2)), 1.0 / static_cast<double>(dim))));
    k = std::max<std::size_t>(k, 2);

    std::array<std::vector<double>, kMaxDim> axes;
    double cover_radius = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double lo = space.lower(i), hi = space.upper(i);
        if (space.periodic()) {
            for (std::size_t j = 0; j < k; ++j) axes[i].push_back(static_cast<double>(j) / static_cast<double>(k));
            cover_radius += 0.5 / static_cast<double>(k);
        } else {
            for (std::size_t j = 0; j < k; ++j)
                axes[i].push_back(lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(k - 1));
            cover_radius += 0.5 * (hi - lo) / static_cast<double>(k - 1);
        }
    }

    std::vector<Point> probes;
    std::array<std::size_t, kMaxDim> idx{};
    for (;;) {
        Point p;
        p.kind = space.kind();
        p.dim = static_cast<std::uint8_t>(dim);
        for (std::size_t i = 0; i < dim; ++i) p.x[i] = axes[i][idx[i]];
        probes.push_back(p);
        std::size_t i = 0;
        while (i < dim && ++idx[i] == k) idx[i++] = 0;
        if (i == dim) break;
    }
    return {std::move(probes), cover_radius};
}

double lebesgue_number(std::span<const Ball> cover, const Space& space, std::size_t probe_count) {
    if (cover.empty()) throw CoverError("empty cover");
    for (const Ball& b : cover)
        if (!space.tags(b.center)) throw DomainError("cover ball outside " + space.name());

    auto [probes, grid_radius] = probe_grid(space, probe_count);
    double worst = std::numeric_limits<double>::infinity();
    for (const Point& p : probes) {
        double best = -std::numeric_limits<double>::infinity();
        for (const Ball& b : cover) best = std::max(best, b.radius - metric(p, b.center));
        if (!(best > 0.0)) throw CoverError("probe point not covered by any ball");
        worst = std::min(worst, best);
    }
    // slack is 1-Lipschitz, so points between probes lose at most the grid radius
    const double delta = worst - grid_radius;
    if (!(delta > 0.0)) throw CoverError("probe grid too coarse to certify a Lebesgue number");
    return delta;
}

}  // namespace mexp
