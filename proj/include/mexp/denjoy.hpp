#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace mexp {

/// Orientation-preserving degree-one circle homeomorphism that is affine
/// between knots. Knots are sorted in [0,1); images are stored as a strictly
/// increasing lift with images.back() < images.front() + 1.
class CircleAffineMap {
public:
    CircleAffineMap() = default;
    CircleAffineMap(std::vector<double> knots, std::vector<double> lifted_images);

    double operator()(double p) const;
    /// Lifted image of p in [0,1): a real number whose fractional part is (*this)(p).
    double lift(double p) const;
    CircleAffineMap inverse() const;

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& images() const { return images_; }

private:
    std::size_t segment(double p) const;

    std::vector<double> knots_;
    std::vector<double> images_;
    std::vector<double> slopes_;
    std::vector<std::size_t> bucket_;  // first candidate segment per bucket
};

struct DenjoyGap {
    int index = 0;         // k: the gap sits at the rotation-orbit point k*alpha
    double theta = 0.0;    // frac(k*alpha)
    double left = 0.0;     // left endpoint on the Denjoy circle
    double length = 0.0;
    double right() const { return left + length; }
};

/// Truncated Denjoy counterexample: the rotation by alpha with the orbit
/// points k*alpha, |k| <= N, blown up into wandering intervals I_k.
///
/// The complement of the open gaps (total length 1/2) plays the role of the
/// Cantor minimal set. The staircase h collapses every gap to its orbit point
/// and satisfies h∘D = R_alpha∘h at every gap endpoint.
struct DenjoyConstruction {
    double alpha = 0.0;
    int gap_bound = 0;       // N
    double profile = 2.0;    // lengths ∝ 1/((|k|+profile)(|k|+profile+1))
    double eta = 0.0;        // width of the two matching zones that close the truncation
    std::vector<DenjoyGap> gaps;        // sorted by position
    std::vector<double> breakpoints;    // all gap endpoints, sorted, 2(2N+1) values
    CircleAffineMap map;                // D
    CircleAffineMap inverse_map;        // D^-1

    /// Gap I_k by orbit index.
    const DenjoyGap& gap(int k) const;
    double smallest_gap() const;

    /// Devil's staircase h: Denjoy circle -> rotation circle, values in [0,1).
    double staircase(double p) const;
    /// Lift of h to the real line: floor(p) + h(frac(p)).
    double staircase_lift(double p) const;
    /// Left-continuous inverse of h: the left endpoint of the fiber over t.
    double staircase_inverse(double t) const;

    bool in_open_gap(double p) const;

private:
    friend DenjoyConstruction build_denjoy(double, int, double);
    std::vector<int> by_index_;         // position in `gaps` of I_k, offset by N
    std::vector<double> sorted_theta_;  // gaps[i].theta
    std::vector<double> prefix_;        // sum of lengths of gaps[0..i)
};

double golden_conjugate();

/// Throws ConstructionError for N < 8, alpha outside (0,1), a non-positive
/// profile, or an alpha whose first orbit points are too close to separate.
DenjoyConstruction build_denjoy(double alpha, int gap_bound = 64, double profile = 2.0);

}  // namespace mexp
