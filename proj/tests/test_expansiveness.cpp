#include <doctest.h>

#include <cmath>
#include <memory>

#include "mexp/errors.hpp"
#include "mexp/expansiveness.hpp"
#include "mexp/measures.hpp"
#include "mexp/registry.hpp"
#include "mexp/survival.hpp"
#include "mexp/systems.hpp"
#include "oracles.hpp"

using namespace mexp;

namespace {

const double kGolden = 0.6180339887498949;

std::vector<Ball> circle_cover(double radius, double spacing) {
    std::vector<Ball> cover;
    const int k = static_cast<int>(std::lround(1.0 / spacing));
    for (int i = 0; i < k; ++i) cover.emplace_back(Space::circle().point({i * spacing}), radius, false);
    return cover;
}

double series_se(const DecaySeries& s, std::size_t i) {
    const double p = static_cast<double>(s.survivors[i]) / static_cast<double>(s.sample_count);
    return s.ball_mass * oracle::binom_se(p, static_cast<double>(s.sample_count));
}

}  // namespace

TEST_CASE("dyn_ball_contains examples") {
    const SystemSpec rot = make_rotation(kGolden);
    oracle::Gen g(1);
    for (int k = 0; k < 200; ++k) {
        const double x = g.unit(), dy = g.range(-0.05, 0.05);
        const DynBallQuery q{rot.space.point({x}), 0.05, g.integer(1, 30), Sided::two_sided};
        REQUIRE(dyn_ball_contains(rot, q, rot.space.point({oracle::frac(x + dy)})));
    }
    const SystemSpec dbl = make_doubling();
    const DynBallQuery q{dbl.space.point({1.0 / 3.0}), 0.05, 2, Sided::one_sided};
    CHECK_FALSE(dyn_ball_contains(dbl, q, dbl.space.point({1.0 / 3.0 + 0.04})));
    CHECK(dyn_ball_contains(dbl, DynBallQuery{q.center, 0.05, 1, Sided::one_sided}, dbl.space.point({1.0 / 3.0 + 0.04})));
    CHECK_THROWS_AS(dyn_ball_contains(dbl, DynBallQuery{q.center, 0.05, 2, Sided::two_sided}, q.center), CapabilityError);
    const SystemSpec id = make_identity();
    CHECK(dyn_ball_contains(id, DynBallQuery{id.space.point({0.2}), 0.001, 1000, Sided::two_sided}, id.space.point({0.2})));
}

TEST_CASE("dyn_ball_contains agrees with pair_survival") {
    oracle::Gen g(4);
    for (const auto& f : make_zoo()) {
        const auto mu = make_lebesgue(f.space);
        for (int k = 0; k < 200; ++k) {
            CounterRng r1(2, 1, static_cast<std::uint64_t>(k)), r2(2, 2, static_cast<std::uint64_t>(k));
            const Point x = mu.draw(r1);
            const Point y = mu.draw_in_ball(Ball(x, 0.1), r2);
            const Sided sided = f.invertible() && k % 2 ? Sided::two_sided : Sided::one_sided;
            const int s = pair_survival(f, x, y, sided, 0.1, 12);
            const int n = g.integer(1, 12);
            CAPTURE(f.name);
            REQUIRE(dyn_ball_contains(f, DynBallQuery{x, 0.1, n, sided}, y) == (s >= n));
        }
    }
}

TEST_CASE("rotation decay is flat at 2 delta") {
    const SystemSpec rot = make_rotation(kGolden);
    const auto leb = make_lebesgue(rot.space);
    for (Sampling mode : {Sampling::localized, Sampling::global}) {
        const auto s = decay_series(rot, leb, rot.space.point({0.3}),
                                    DecaySettings{Sided::two_sided, 0.05, 20, 100000, 7, 1, mode});
        REQUIRE(s.estimates.size() == 20);
        for (std::size_t i = 0; i < 20; ++i) {
            CHECK(s.estimates[i] == s.estimates[0]);
            CHECK(s.ci[i].lo <= 0.1);
            CHECK(s.ci[i].hi >= 0.1);
        }
        CHECK(s.localized == (mode == Sampling::localized));
    }
}

TEST_CASE("identity decay is constant") {
    const SystemSpec id = make_identity();
    const auto s = decay_series(id, make_lebesgue(id.space), id.space.point({0.7}),
                                DecaySettings{Sided::two_sided, 0.05, 15, 1000, 3, 1, Sampling::global});
    for (double e : s.estimates) CHECK(e == s.estimates[0]);
}

TEST_CASE("doubling decay matches brute-force dynamical balls") {
    const SystemSpec dbl = make_doubling();
    const auto leb = make_lebesgue(dbl.space);
    auto f = [](double u) { return oracle::frac(2.0 * u); };
    for (double x : {1.0 / 3.0, 0.1, 0.77}) {
        const auto s = decay_series(dbl, leb, dbl.space.point({x}), DecaySettings{Sided::one_sided, 0.01, 8, 100000, 11});
        for (int n = 1; n <= 8; ++n) {
            const double exact = oracle::one_sided_ball(f, oracle::circ, x, 0.01, n, 1 << 20);
            const std::size_t i = static_cast<std::size_t>(n - 1);
            CAPTURE(x);
            CAPTURE(n);
            REQUIRE(std::fabs(s.estimates[i] - exact) <= 4.0 * series_se(s, i) + 2e-6);
        }
    }
}

TEST_CASE("two-sided decay for x^2 matches brute force") {
    const SystemSpec sq = make_interval_square();
    const auto leb = make_lebesgue(sq.space);
    auto f = [](double u) { return u * u; };
    auto finv = [](double u) { return std::sqrt(u); };
    auto d = [](double a, double b) { return std::fabs(a - b); };
    for (double x : {0.5, 0.9}) {
        const auto s = decay_series(sq, leb, sq.space.point({x}), DecaySettings{Sided::two_sided, 0.05, 6, 100000, 5});
        for (int n = 1; n <= 6; ++n) {
            const double exact = oracle::two_sided_ball(f, finv, d, x, 0.05, n, 1 << 18);
            const std::size_t i = static_cast<std::size_t>(n - 1);
            CAPTURE(x);
            CAPTURE(n);
            REQUIRE(std::fabs(s.estimates[i] - exact) <= 4.0 * series_se(s, i) + 1e-5);
        }
    }
}

TEST_CASE("decay series invariants across the zoo") {
    for (const auto& f : make_zoo()) {
        const auto mu = f.denjoy ? make_denjoy_minimal(f.denjoy) : make_lebesgue(f.space);
        CounterRng rng(1, 1, 0);
        const Point x = mu.draw(rng);
        for (Sided sided : {Sided::one_sided, Sided::two_sided}) {
            if (sided == Sided::two_sided && !f.invertible()) {
                CHECK_THROWS_AS(decay_series(f, mu, x, DecaySettings{sided, 0.05, 10, 5000}), CapabilityError);
                continue;
            }
            const auto s = decay_series(f, mu, x, DecaySettings{sided, 0.05, 10, 5000});
            CAPTURE(f.name);
            for (std::size_t i = 0; i < s.estimates.size(); ++i) {
                REQUIRE(s.estimates[i] >= 0.0);
                REQUIRE(s.estimates[i] <= 1.0);
                REQUIRE(s.ci[i].lo <= s.estimates[i]);
                REQUIRE(s.ci[i].hi >= s.estimates[i]);
                if (i > 0) REQUIRE(s.estimates[i] <= s.estimates[i - 1]);
            }
        }
    }
}

TEST_CASE("global estimates are monotone in delta") {
    const SystemSpec cat = make_cat();
    const auto leb = make_lebesgue(cat.space);
    const Point x = cat.space.point({0.2, 0.6});
    std::vector<double> prev;
    for (double delta : {0.05, 0.1, 0.2, 0.4}) {
        const auto s = decay_series(cat, leb, x, DecaySettings{Sided::two_sided, delta, 8, 20000, 3, 1, Sampling::global});
        if (!prev.empty())
            for (std::size_t i = 0; i < prev.size(); ++i) REQUIRE(s.estimates[i] >= prev[i]);
        prev = s.estimates;
    }
}

TEST_CASE("decay series is worker independent") {
    const SystemSpec f = make_cat();
    const auto leb = make_lebesgue(f.space);
    DecaySettings s{Sided::two_sided, 0.1, 12, 30000, 9, 1};
    const auto a = decay_series(f, leb, f.space.point({0.1, 0.2}), s);
    s.workers = 5;
    const auto b = decay_series(f, leb, f.space.point({0.1, 0.2}), s);
    CHECK(a.survivors == b.survivors);
    CHECK(a.estimates == b.estimates);
}

TEST_CASE("decay series argument errors") {
    const SystemSpec f = make_doubling();
    const auto leb = make_lebesgue(f.space);
    const Point x = f.space.point({0.1});
    CHECK_THROWS_AS(decay_series(f, leb, x, DecaySettings{Sided::one_sided, 0.05, 0, 1000}), DomainError);
    CHECK_THROWS_AS(decay_series(f, leb, x, DecaySettings{Sided::one_sided, 0.05, 5, 99}), DomainError);
    CHECK_THROWS_AS(decay_series(f, leb, x, DecaySettings{Sided::one_sided, 0.0, 5, 1000}), DomainError);
    CHECK_THROWS_AS(decay_series(f, leb, Space::torus2().point({0.1, 0.1}), DecaySettings{}), DomainError);
    const auto sine = make_measure("pushforward-sine", make_interval_square());
    CHECK_THROWS_AS(decay_series(make_interval_square(), sine, Space::interval().point({0.5}),
                                 DecaySettings{Sided::one_sided, 0.05, 5, 1000, 7, 1, Sampling::localized}),
                    CapabilityError);
}

TEST_CASE("verdict examples") {
    VerdictSettings vs;
    vs.samples = 20000;
    const SystemSpec rot = make_rotation(kGolden);
    const auto r = expansiveness_verdict(rot, make_lebesgue(rot.space), vs);
    CHECK(r.verdict == Verdict::evidence_not_expansive);
    CHECK(r.sided == Sided::two_sided);
    REQUIRE(r.witness.has_value());
    CHECK(r.probes.size() == 20);
    for (double t : r.terminal_estimates) CHECK(std::fabs(t - 0.1) <= 0.01);

    vs.delta = 0.01;
    const SystemSpec dbl = make_doubling();
    const auto d = expansiveness_verdict(dbl, make_lebesgue(dbl.space), vs);
    CHECK(d.verdict == Verdict::evidence_expansive);
    CHECK(d.sided == Sided::one_sided);
    CHECK(d.worst_upper_bound <= vs.threshold);

    const SystemSpec sq = make_interval_square();
    for (double delta : {0.2, 0.1, 0.05}) {
        vs.delta = delta;
        CHECK(expansiveness_verdict(sq, make_lebesgue(sq.space), vs).verdict == Verdict::evidence_not_expansive);
    }

    vs.x_probes = 19;
    CHECK_THROWS_AS(expansiveness_verdict(dbl, make_lebesgue(dbl.space), vs), DomainError);
    vs.x_probes = 20;
    vs.threshold = 0.0;
    CHECK_THROWS_AS(expansiveness_verdict(dbl, make_lebesgue(dbl.space), vs), DomainError);
}

TEST_CASE("atomic measures are never expansive") {
    VerdictSettings vs;
    vs.samples = 1000;
    for (const auto& f : make_zoo()) {
        const Point atom = f.space.dim() == 1 ? f.space.point({0.0}) : f.space.point({0.0, 0.0});
        const auto v = expansiveness_verdict(f, make_dirac(atom), vs);
        CAPTURE(f.name);
        CHECK(v.verdict == Verdict::evidence_not_expansive);
        CHECK(v.best_lower_bound >= vs.threshold);
    }
}

TEST_CASE("verdict bounds are ordered and consistent with the verdict") {
    VerdictSettings vs;
    vs.samples = 5000;
    vs.n_max = 12;
    for (const auto& f : make_zoo()) {
        const auto mu = f.denjoy ? make_denjoy_minimal(f.denjoy) : make_lebesgue(f.space);
        const auto v = expansiveness_verdict(f, mu, vs);
        CAPTURE(f.name);
        CHECK(v.best_lower_bound <= v.worst_upper_bound);
        if (v.verdict == Verdict::evidence_expansive) CHECK(v.worst_upper_bound <= vs.threshold);
        if (v.verdict == Verdict::evidence_not_expansive) CHECK(v.best_lower_bound >= vs.threshold);
        if (v.verdict == Verdict::inconclusive) {
            CHECK(v.worst_upper_bound > vs.threshold);
            CHECK(v.best_lower_bound < vs.threshold);
        }
    }
}

TEST_CASE("power consistency examples") {
    VerdictSettings vs;
    vs.samples = 10000;
    const std::vector<double> grid{0.05, 0.02, 0.01};
    const SystemSpec dbl = make_doubling();
    const auto d = power_consistency_check(dbl, make_lebesgue(dbl.space), 2, grid, vs);
    CHECK(d.consistent);
    CHECK_FALSE(d.contradiction);
    for (Verdict v : d.powered) CHECK(v == Verdict::evidence_expansive);
    const SystemSpec rot = make_rotation(kGolden);
    const auto r = power_consistency_check(rot, make_lebesgue(rot.space), 2, grid, vs);
    CHECK(r.consistent);
    for (Verdict v : r.base) CHECK(v == Verdict::evidence_not_expansive);
    const SystemSpec id = make_identity();
    CHECK(power_consistency_check(id, make_lebesgue(id.space), 3, grid, vs).consistent);
    CHECK_THROWS_AS(power_consistency_check(id, make_lebesgue(id.space), 1, grid, vs), DomainError);
}

TEST_CASE("product diagonal examples") {
    const SystemSpec rot = make_rotation(kGolden);
    const auto r = product_diagonal_test(rot, make_lebesgue(rot.space), DecaySettings{Sided::two_sided, 0.05, 20, 100000});
    for (std::size_t i = 0; i < r.estimates.size(); ++i) {
        CHECK(r.estimates[i] == r.estimates[0]);
        CHECK(std::fabs(r.estimates[i] - 0.1) <= 4.0 * oracle::binom_se(0.1, 1e5));
    }
    const SystemSpec cat = make_cat();
    const auto c = product_diagonal_test(cat, make_lebesgue(cat.space), DecaySettings{Sided::two_sided, 0.05, 12, 100000});
    CHECK(c.terminal() < 0.01);
    for (const auto& f : make_zoo()) {
        const auto mu = f.denjoy ? make_denjoy_minimal(f.denjoy) : make_lebesgue(f.space);
        const auto all = product_diagonal_test(f, mu, DecaySettings{Sided::one_sided, f.space.diameter(), 10, 1000});
        CAPTURE(f.name);
        for (double e : all.estimates) CHECK(e == 1.0);
    }
}

TEST_CASE("fubini cross check agrees") {
    DecaySettings s{Sided::one_sided, 0.05, 10, 20000};
    for (const SystemSpec& f : {make_doubling(), make_rotation(kGolden), make_cat()}) {
        const auto rep = fubini_cross_check(f, make_lebesgue(f.space), s, 20);
        CAPTURE(f.name);
        CHECK(rep.agree);
        CHECK(rep.probes == 20);
    }
    CHECK_THROWS_AS(fubini_cross_check(make_doubling(), make_lebesgue(Space::circle()), s, 1), DomainError);
}

TEST_CASE("generator examples") {
    GeneratorSettings gs;
    gs.mc_samples = 20000;
    gs.sequence_samples = 20;
    const auto cover = circle_cover(0.1, 0.05);
    const SystemSpec dbl = make_doubling();
    const auto d = generator_check(dbl, make_lebesgue(dbl.space), cover, gs);
    CHECK(d.is_generator_evidence);
    CHECK(d.max_intersection_estimate <= gs.threshold);
    CHECK(d.sequences_tested == 40);
    CHECK(d.lebesgue_number > 0.0);

    const SystemSpec id = make_identity();
    const auto i = generator_check(id, make_lebesgue(id.space), cover, gs);
    CHECK_FALSE(i.is_generator_evidence);
    CHECK(i.max_ci.hi >= 0.2);

    const std::vector<Ball> whole{Ball(Space::circle().point({0.0}), 0.6)};
    const auto w = generator_check(dbl, make_lebesgue(dbl.space), whole, gs);
    CHECK_FALSE(w.is_generator_evidence);
    CHECK(w.max_intersection_estimate == 1.0);

    const std::vector<Ball> partial{Ball(Space::circle().point({0.0}), 0.1)};
    CHECK_THROWS_AS(generator_check(dbl, make_lebesgue(dbl.space), partial, gs), CoverError);
    CHECK_THROWS_AS(generator_check(dbl, make_lebesgue(dbl.space), {}, gs), CoverError);
}

TEST_CASE("semi-orbit and periodic fraction examples") {
    SemiOrbitSettings so;
    so.samples = 20000;
    const SystemSpec sq = make_interval_square();
    CHECK(converging_semiorbit_fraction(sq, make_lebesgue(sq.space), so).fraction >= 0.99);
    const SystemSpec rot = make_rotation(kGolden);
    CHECK(converging_semiorbit_fraction(rot, make_lebesgue(rot.space), so).hits == 0);
    const SystemSpec id = make_identity();
    CHECK(converging_semiorbit_fraction(id, make_lebesgue(id.space), so).fraction == 1.0);
    CHECK_THROWS_AS(converging_semiorbit_fraction(make_doubling(), make_lebesgue(Space::circle()), so), CapabilityError);

    const SystemSpec cat = make_cat();
    CHECK(periodic_fraction(cat, make_lebesgue(cat.space), 6, 1e-4, 100000, 7).fraction <= 1e-3);
    CHECK(periodic_fraction(id, make_lebesgue(id.space), 1, 1e-12, 1000, 7).fraction == 1.0);
    const SystemSpec third = make_rotation(1.0 / 3.0);
    CHECK(periodic_fraction(third, make_lebesgue(third.space), 3, 1e-9, 1000, 7).fraction == 1.0);
    CHECK(periodic_fraction(rot, make_lebesgue(rot.space), 6, 1e-4, 10000, 7).fraction == 0.0);
    CHECK_THROWS_AS(periodic_fraction(id, make_lebesgue(id.space), 0, 1e-3, 10, 7), DomainError);
    const auto a = periodic_fraction(cat, make_lebesgue(cat.space), 4, 0.05, 20000, 3, 1);
    const auto b = periodic_fraction(cat, make_lebesgue(cat.space), 4, 0.05, 20000, 3, 4);
    CHECK(a.hits == b.hits);
}

TEST_CASE("sampling mode names") {
    CHECK(to_string(Sampling::automatic) == "automatic");
    CHECK(to_string(Sampling::global) == "global");
    CHECK(to_string(Sampling::localized) == "localized");
}
