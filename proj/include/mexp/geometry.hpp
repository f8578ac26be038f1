#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mexp {

inline constexpr std::size_t kMaxDim = 4;

enum class SpaceKind : std::uint8_t { circle, interval, torus2, box };

std::string to_string(SpaceKind kind);

/// A point tagged with the kind and dimension of the space it lives in.
/// Circle and torus coordinates are kept in [0,1).
struct Point {
    std::array<double, kMaxDim> x{};
    std::uint8_t dim = 0;
    SpaceKind kind = SpaceKind::interval;

    double operator[](std::size_t i) const { return x[i]; }
    double& operator[](std::size_t i) { return x[i]; }
    friend bool operator==(const Point&, const Point&) = default;
};

/// Wrap a real number into [0,1).
inline double wrap_unit(double v) {
    double r = v - std::floor(v);
    return r >= 1.0 ? 0.0 : r;
}

/// Quotient distance on R/Z.
inline double circle_gap(double a, double b) {
    double d = std::fabs(a - b);
    return std::fmin(d, 1.0 - d);
}

/// Compact metric space: the unit circle, [0,1], the 2-torus with the sum
/// metric, or an axis-aligned box with the sum metric.
class Space {
public:
    static Space circle();
    static Space interval();
    static Space torus2();
    static Space box(std::vector<std::pair<double, double>> bounds);

    SpaceKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    bool periodic() const { return kind_ == SpaceKind::circle || kind_ == SpaceKind::torus2; }
    double lower(std::size_t i) const { return bounds_[i].first; }
    double upper(std::size_t i) const { return bounds_[i].second; }
    double diameter() const;
    std::string name() const;

    /// Build a point, wrapping periodic coordinates and rejecting out-of-range ones.
    Point point(std::initializer_list<double> coords) const;
    Point point(std::span<const double> coords) const;
    Point canonical(Point p) const;
    bool contains(const Point& p) const;
    bool tags(const Point& p) const { return p.kind == kind_ && p.dim == dim_; }

    friend bool operator==(const Space&, const Space&) = default;

private:
    Space(SpaceKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}

    SpaceKind kind_;
    std::size_t dim_;
    std::array<std::pair<double, double>, kMaxDim> bounds_{};
};

struct Ball {
    Point center;
    double radius;
    bool closed = true;

    Ball(Point c, double r, bool is_closed = true);
};

/// The metric of the space the tags describe; no tag validation.
double metric(const Point& x, const Point& y);

/// d(x,y); throws DomainError when either point does not belong to `space`.
double distance(const Space& space, const Point& x, const Point& y);

bool ball_contains(const Ball& b, const Point& y);

/// Conservative Lebesgue number of a finite cover, certified on a probe grid
/// of roughly `probe_count` points. Throws CoverError if some probe is not
/// strictly inside a cover element or the grid is too coarse to certify.
double lebesgue_number(std::span<const Ball> cover, const Space& space, std::size_t probe_count = 4096);

/// Uniform probe grid used by lebesgue_number together with the covering
/// radius of the grid (max distance from any point of the space to a probe).
std::pair<std::vector<Point>, double> probe_grid(const Space& space, std::size_t probe_count);

}  // namespace mexp
