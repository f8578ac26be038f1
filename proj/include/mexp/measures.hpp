#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mexp/denjoy.hpp"
#include "mexp/geometry.hpp"
#include "mexp/rng.hpp"
#include "mexp/systems.hpp"

namespace mexp {

using PointSampler = std::function<Point(CounterRng&)>;
using BallMass = std::function<double(const Ball&)>;
using BallSampler = std::function<Point(const Ball&, CounterRng&)>;

/// A Borel probability measure given by a seeded sampler, optionally with an
/// exact ball-mass oracle and a sampler of the measure conditioned on a ball.
struct MeasureSpec {
    std::string name;
    Space space = Space::circle();
    PointSampler draw;
    BallMass ball_mass;
    BallSampler draw_in_ball;
    bool nonatomic = true;
    std::string pushforward_of;

    bool has_oracle() const { return ball_mass && draw_in_ball; }
};

struct EmpiricalBatch {
    std::vector<Point> points;
    std::uint64_t seed = 0;
    std::size_t count = 0;
};

/// Stream id used for plain sampling; sample i draws from CounterRng(seed, kSampleStream, i).
inline constexpr std::uint64_t kSampleStream = hash_label("sample");

/// Deterministic per (seed, index); the worker count never changes the batch.
EmpiricalBatch sample(const MeasureSpec& mu, std::uint64_t seed, std::size_t count, int workers = 1);

MeasureSpec make_lebesgue(const Space& space);
MeasureSpec make_dirac(const Point& atom);
MeasureSpec make_denjoy_minimal(std::shared_ptr<const DenjoyConstruction> d);
MeasureSpec make_denjoy_minimal(const DenjoyConstruction& d);

/// phi_*(mu). The oracle is dropped.
MeasureSpec pushforward(const MeasureSpec& mu, PointMap phi, std::string name);

/// An increasing homeomorphism of the interval or the circle (fixing 0),
/// registered with its inverse so ball masses can be pulled back.
struct MonotoneMap {
    std::string name;
    PointMap forward;
    PointMap inverse;
};

/// phi_*(mu) keeping an exact oracle when mu has one.
MeasureSpec pushforward(const MeasureSpec& mu, const MonotoneMap& phi, std::string name);

MonotoneMap square_map(const Space& space);  // x -> x^2 on [0,1] or on the circle

}  // namespace mexp
