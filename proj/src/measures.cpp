#include "mexp/measures.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "mexp/errors.hpp"
#include "mexp/parallel.hpp"

namespace mexp {

namespace {

Point one_d(const Space& space, double v) {
    Point p;
    p.kind = space.kind();
    p.dim = 1;
    p.x[0] = v;
    return p;
}

double lebesgue_ball_mass(const Space& space, const Ball& b) {
    const double r = b.radius;
    switch (space.kind()) {
        case SpaceKind::circle: return std::min(1.0, 2.0 * r);
        case SpaceKind::interval: {
            const double lo = std::max(0.0, b.center.x[0] - r), hi = std::min(1.0, b.center.x[0] + r);
            return std::max(0.0, hi - lo);
        }
        case SpaceKind::torus2:
            if (r <= 0.5) return 2.0 * r * r;
            if (r < 1.0) return 1.0 - 2.0 * (1.0 - r) * (1.0 - r);
            return 1.0;
        case SpaceKind::box: break;
    }
    throw DomainError("no ball oracle for " + space.name());
}

Point lebesgue_in_ball(const Space& space, const Ball& b, CounterRng& rng) {
    const double r = b.radius;
    Point p = b.center;
    switch (space.kind()) {
        case SpaceKind::circle:
            p.x[0] = r >= 0.5 ? rng.uniform() : wrap_unit(b.center.x[0] + r * (2.0 * rng.uniform() - 1.0));
            return p;
        case SpaceKind::interval: {
            const double lo = std::max(0.0, b.center.x[0] - r), hi = std::min(1.0, b.center.x[0] + r);
            p.x[0] = rng.uniform(lo, hi);
            return p;
        }
        case SpaceKind::torus2: {
            const double side = std::min(r, 0.5);
            for (;;) {
                const double a = side * (2.0 * rng.uniform() - 1.0);
                const double c = side * (2.0 * rng.uniform() - 1.0);
                if (std::fabs(a) + std::fabs(c) <= r) {
                    p.x[0] = wrap_unit(b.center.x[0] + a);
                    p.x[1] = wrap_unit(b.center.x[1] + c);
                    return p;
                }
            }
        }
        case SpaceKind::box: break;
    }
    throw DomainError("no conditional sampler for " + space.name());
}

}  // namespace

EmpiricalBatch sample(const MeasureSpec& mu, std::uint64_t seed, std::size_t count, int workers) {
    if (count == 0) throw DomainError("sample count must be positive");
    EmpiricalBatch batch;
    batch.seed = seed;
    batch.count = count;
    batch.points.resize(count);
    constexpr std::size_t kChunk = 4096;
    const std::size_t chunks = (count + kChunk - 1) / kChunk;
    parallel_for(chunks, workers, [&](std::size_t c) {
        const std::size_t end = std::min(count, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            CounterRng rng(seed, kSampleStream, i);
            batch.points[i] = mu.draw(rng);
        }
    });
    return batch;
}

MeasureSpec make_lebesgue(const Space& space) {
    MeasureSpec mu;
    mu.name = "lebesgue";
    mu.space = space;
    mu.draw = [space](CounterRng& rng) {
        Point p;
        p.kind = space.kind();
        p.dim = static_cast<std::uint8_t>(space.dim());
        for (std::size_t i = 0; i < space.dim(); ++i) p.x[i] = rng.uniform(space.lower(i), space.upper(i));
        return p;
    };
    if (space.kind() != SpaceKind::box) {
        mu.ball_mass = [space](const Ball& b) { return lebesgue_ball_mass(space, b); };
        mu.draw_in_ball = [space](const Ball& b, CounterRng& rng) { return lebesgue_in_ball(space, b, rng); };
    }
    return mu;
}

MeasureSpec make_dirac(const Point& atom) {
    MeasureSpec mu;
    mu.name = "dirac";
    mu.space = atom.kind == SpaceKind::circle    ? Space::circle()
               : atom.kind == SpaceKind::torus2  ? Space::torus2()
               : atom.kind == SpaceKind::interval ? Space::interval()
                                                  : throw DomainError("dirac on a box needs an explicit space");
    mu.nonatomic = false;
    mu.draw = [atom](CounterRng&) { return atom; };
    mu.ball_mass = [atom](const Ball& b) { return ball_contains(b, atom) ? 1.0 : 0.0; };
    mu.draw_in_ball = [atom](const Ball&, CounterRng&) { return atom; };
    return mu;
}

MeasureSpec make_denjoy_minimal(std::shared_ptr<const DenjoyConstruction> d) {
    MeasureSpec mu;
    mu.name = "denjoy-minimal";
    mu.space = Space::circle();
    const Space space = mu.space;
    mu.draw = [d, space](CounterRng& rng) { return one_d(space, d->staircase_inverse(rng.uniform())); };
    mu.ball_mass = [d](const Ball& b) {
        if (b.radius >= 0.5) return 1.0;
        const double c = b.center.x[0];
        return d->staircase_lift(c + b.radius) - d->staircase_lift(c - b.radius);
    };
    mu.draw_in_ball = [d, space](const Ball& b, CounterRng& rng) {
        if (b.radius >= 0.5) return one_d(space, d->staircase_inverse(rng.uniform()));
        const double c = b.center.x[0];
        const double lo = d->staircase_lift(c - b.radius), hi = d->staircase_lift(c + b.radius);
        return one_d(space, d->staircase_inverse(wrap_unit(rng.uniform(lo, hi))));
    };
    return mu;
}

MeasureSpec make_denjoy_minimal(const DenjoyConstruction& d) {
    return make_denjoy_minimal(std::make_shared<const DenjoyConstruction>(d));
}

MeasureSpec pushforward(const MeasureSpec& mu, PointMap phi, std::string name) {
    MeasureSpec out;
    out.name = std::move(name);
    out.space = mu.space;
    out.nonatomic = mu.nonatomic;
    out.pushforward_of = mu.name;
    auto base = mu.draw;
    out.draw = [base, phi](CounterRng& rng) { return phi(base(rng)); };
    return out;
}

MeasureSpec pushforward(const MeasureSpec& mu, const MonotoneMap& phi, std::string name) {
    MeasureSpec out = pushforward(mu, phi.forward, std::move(name));
    out.pushforward_of = mu.name + " by " + phi.name;
    if (!mu.has_oracle() || mu.space.dim() != 1) return out;

    const Space space = mu.space;
    // Pull a ball back to an arc/interval of the base space, expressed as a ball.
    auto preimage = [space, inv = phi.inverse](const Ball& b) -> std::optional<Ball> {
        const double c = b.center.x[0], r = b.radius;
        if (space.kind() == SpaceKind::interval) {
            const double lo = inv(one_d(space, std::max(0.0, c - r))).x[0];
            const double hi = inv(one_d(space, std::min(1.0, c + r))).x[0];
            if (!(hi > lo)) return std::nullopt;
            return Ball(one_d(space, 0.5 * (lo + hi)), 0.5 * (hi - lo));
        }
        if (r >= 0.5) return Ball(one_d(space, 0.0), 0.5);
        const double lo = inv(one_d(space, wrap_unit(c - r))).x[0];
        const double hi = inv(one_d(space, wrap_unit(c + r))).x[0];
        const double len = wrap_unit(hi - lo);
        if (!(len > 0.0)) return std::nullopt;
        return Ball(one_d(space, wrap_unit(lo + 0.5 * len)), 0.5 * len);
    };
    auto base_mass = mu.ball_mass;
    auto base_draw = mu.draw_in_ball;
    auto fwd = phi.forward;
    out.ball_mass = [preimage, base_mass](const Ball& b) {
        auto pre = preimage(b);
        return pre ? base_mass(*pre) : 0.0;
    };
    out.draw_in_ball = [preimage, base_draw, fwd](const Ball& b, CounterRng& rng) {
        auto pre = preimage(b);
        if (!pre) throw DomainError("conditional draw from a null ball");
        return fwd(base_draw(*pre, rng));
    };
    return out;
}

MonotoneMap square_map(const Space& space) {
    if (space.kind() != SpaceKind::interval && space.kind() != SpaceKind::circle)
        throw DomainError("x^2 is registered only on the interval and the circle");
    MonotoneMap m;
    m.name = "x^2";
    m.forward = [](const Point& x) {
        Point y = x;
        y.x[0] = x.x[0] * x.x[0];
        return y;
    };
    m.inverse = [](const Point& x) {
        Point y = x;
        y.x[0] = std::sqrt(x.x[0]);
        return y;
    };
    return m;
}

}  // namespace mexp
