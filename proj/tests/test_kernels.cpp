#include <doctest.h>

#include <cstdint>
#include <vector>

#include "mexp/kernels.hpp"
#include "mexp/measures.hpp"
#include "mexp/survival.hpp"
#include "mexp/systems.hpp"
#include "oracles.hpp"

using namespace mexp;
using kernels::Isa;
using kernels::Kind;

namespace {

struct Lanes {
    std::vector<double> x0, x1, y0, y1;
};

Lanes lanes(std::size_t n, double delta, std::uint64_t seed) {
    oracle::Gen g(seed);
    Lanes l;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = g.unit(), b = g.unit();
        l.x0.push_back(a);
        l.x1.push_back(b);
        // most samples start near the center so the runs are long
        l.y0.push_back(oracle::frac(a + g.range(-1.5 * delta, 1.5 * delta)));
        l.y1.push_back(oracle::frac(b + g.range(-1.5 * delta, 1.5 * delta)));
    }
    return l;
}

std::vector<std::int32_t> run(const kernels::Spec& spec, const kernels::Pass& pass, Lanes l, Isa isa) {
    std::vector<std::int32_t> out(l.x0.size(), -1);
    kernels::survive(spec, pass, {l.x0, l.x1}, {l.y0, l.y1}, out, isa);
    return out;
}

}  // namespace

TEST_CASE("scalar and avx2 kernels agree bit for bit") {
    if (!kernels::isa_available(Isa::avx2)) {
        MESSAGE("avx2 unavailable; scalar only");
        return;
    }
    const std::vector<kernels::Spec> specs = {
        {Kind::identity, 0.0, 1}, {Kind::rotation, 0.6180339887498949, 1}, {Kind::rotation, 0.1, 3},
        {Kind::doubling, 0.0, 1}, {Kind::doubling, 0.0, 2},                 {Kind::tent, 0.0, 1},
        {Kind::square, 0.0, 1},   {Kind::cat, 0.0, 1},                      {Kind::cat, 0.0, 2},
    };
    for (const auto& spec : specs) {
        for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 13u, 1000u, 4099u}) {
            for (bool inverse : {false, true}) {
                if (inverse && !kernels::has_inverse(spec.kind)) continue;
                for (double delta : {0.001, 0.05, 0.3}) {
                    const kernels::Pass pass{inverse, inverse, delta, 25};
                    const Lanes l = lanes(n, delta, n * 31 + static_cast<std::uint64_t>(spec.kind));
                    CAPTURE(static_cast<int>(spec.kind));
                    CAPTURE(n);
                    CAPTURE(inverse);
                    REQUIRE(run(spec, pass, l, Isa::scalar) == run(spec, pass, l, Isa::avx2));
                }
            }
        }
    }
}

TEST_CASE("kernel counts match a direct pair loop") {
    const SystemSpec rot = make_rotation(0.3);
    const Lanes l = lanes(500, 0.05, 4);
    const auto out = run(*rot.kernel, kernels::Pass{false, false, 0.05, 20}, l, kernels::active_isa());
    for (std::size_t j = 0; j < 500; ++j) {
        const int expect = pair_survival(rot, rot.space.point({l.x0[j]}), rot.space.point({l.y0[j]}), Sided::one_sided, 0.05, 20);
        REQUIRE(out[j] == expect);
    }
}

TEST_CASE("forced isa round trip") {
    kernels::force_isa(Isa::scalar);
    CHECK(kernels::active_isa() == Isa::scalar);
    kernels::force_isa(std::nullopt);
    CHECK(kernels::to_string(Isa::scalar) == "scalar");
    CHECK(kernels::to_string(Isa::avx2) == "avx2");
}

TEST_CASE("kernel and generic survival histograms are identical") {
    std::vector<SystemSpec> systems = {make_identity(), make_rotation(0.6180339887498949), make_doubling(), make_tent(),
                                       make_interval_square(), make_cat(), power(make_doubling(), 2)};
    for (const auto& f : systems) {
        const auto mu = make_lebesgue(f.space);
        const Point x = f.space.dim() == 1 ? f.space.point({0.3}) : f.space.point({0.3, 0.7});
        const double delta = 0.05;
        PairAt pair_at = [&](std::uint64_t i) {
            CounterRng rng(9, 1, i);
            return std::make_pair(x, mu.draw_in_ball(Ball(x, delta), rng));
        };
        for (Sided sided : {Sided::one_sided, Sided::two_sided}) {
            if (sided == Sided::two_sided && !f.invertible()) continue;
            SurvivalSettings s{sided, delta, 15, 1, true};
            const auto fast = survival_histogram(f, 10000, pair_at, s);
            s.use_kernel = false;
            const auto slow = survival_histogram(f, 10000, pair_at, s);
            CAPTURE(f.name);
            CAPTURE(static_cast<int>(sided));
            REQUIRE(fast == slow);
            kernels::force_isa(Isa::scalar);
            s.use_kernel = true;
            REQUIRE(survival_histogram(f, 10000, pair_at, s) == slow);
            kernels::force_isa(std::nullopt);
        }
    }
}

TEST_CASE("survival histogram does not depend on worker count") {
    const SystemSpec f = make_cat();
    const auto mu = make_lebesgue(f.space);
    PairAt pair_at = [&](std::uint64_t i) {
        CounterRng a(3, 1, i), b(3, 2, i);
        return std::make_pair(mu.draw(a), mu.draw(b));
    };
    SurvivalSettings s{Sided::two_sided, 0.3, 10, 1, true};
    const auto one = survival_histogram(f, 30000, pair_at, s);
    s.workers = 4;
    CHECK(survival_histogram(f, 30000, pair_at, s) == one);
    const auto surv = survivors_from_histogram(one);
    REQUIRE(surv.size() == 10);
    for (std::size_t i = 1; i < surv.size(); ++i) CHECK(surv[i] <= surv[i - 1]);
}
