#include <doctest.h>

#include <cmath>

#include "mexp/entropy.hpp"
#include "mexp/errors.hpp"
#include "mexp/registry.hpp"
#include "oracles.hpp"

using namespace mexp;

namespace {

DecaySeries synthetic(double rate, int n_max, std::uint64_t total, double q0 = 0.02) {
    DecaySeries s;
    s.sample_count = total;
    s.delta = 0.01;
    for (int n = 1; n <= n_max; ++n) {
        s.n_values.push_back(n);
        const double q = q0 * std::exp(-rate * (n - 1));
        s.survivors.push_back(static_cast<std::uint64_t>(std::llround(q * static_cast<double>(total))));
        s.estimates.push_back(q);
    }
    return s;
}

EntropySettings quick() {
    EntropySettings s;
    s.samples = 30000;
    s.x_probes = 20;
    s.n_max = 12;
    return s;
}

}  // namespace

TEST_CASE("fit_decay recovers a synthetic rate") {
    for (double rate : {0.1, 0.5, 0.693, 1.2}) {
        const auto fit = fit_decay(synthetic(rate, 12, 1000000000ULL));
        CAPTURE(rate);
        CHECK(fit.slope == doctest::Approx(rate).epsilon(1e-3));
        CHECK(fit.se >= 0.0);
        CHECK(fit.n_last >= fit.n_first);
    }
    const auto flat = fit_decay(synthetic(0.0, 10, 100000));
    CHECK(flat.slope == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_FALSE(flat.censored);
}

TEST_CASE("fit_decay censoring and errors") {
    const auto s = synthetic(0.693, 20, 100000);
    const auto fit = fit_decay(s, 10);
    CHECK(fit.censored);
    CHECK(fit.n_last < 20);
    CHECK(s.survivors[static_cast<std::size_t>(fit.n_last)] < 10);
    CHECK(fit.slope == doctest::Approx(0.693).epsilon(0.05));

    auto dead = synthetic(0.693, 10, 100000);
    for (std::size_t i = 1; i < dead.survivors.size(); ++i) dead.survivors[i] = 0;
    CHECK_THROWS_AS(fit_decay(dead), InsufficientSamplesError);
    CHECK_THROWS_AS(fit_decay(synthetic(0.5, 1, 100000)), DomainError);
}

TEST_CASE("local decay rates") {
    const SystemSpec dbl = make_doubling();
    EntropySettings s = quick();
    s.delta_grid = {0.01};
    s.samples = 100000;
    const auto le = local_entropy(dbl, make_lebesgue(dbl.space), dbl.space.point({1.0 / 3.0}), s);
    REQUIRE(le.fits.size() == 1);
    CHECK(std::fabs(le.fits[0].slope - std::log(2.0)) <= 0.05);

    const SystemSpec rot = make_rotation(0.6180339887498949);
    const auto lr = local_entropy(rot, make_lebesgue(rot.space), rot.space.point({0.2}), s);
    CHECK(lr.fits[0].slope == 0.0);
}

TEST_CASE("bk entropy benchmarks at reduced budget") {
    const EntropySettings s = quick();
    const SystemSpec dbl = make_doubling();
    const auto d = bk_entropy(dbl, make_lebesgue(dbl.space), s);
    CHECK(d.extrapolated_e >= 0.6);
    CHECK(d.extrapolated_e <= std::log(2.0) + 0.05);
    CHECK(d.delta_grid == std::vector<double>{0.02, 0.01, 0.005});
    CHECK(d.per_x_rates.size() == 20);
    for (std::size_t i = 0; i < d.delta_grid.size(); ++i) {
        double lo = 1e300;
        for (const auto& r : d.per_x_rates) lo = std::min(lo, r[i].slope);
        CHECK(d.e_of_delta[i] == lo);
        CHECK(d.ci[i].lo <= d.e_of_delta[i]);
    }

    const SystemSpec id = make_identity();
    const auto e0 = bk_entropy(id, make_lebesgue(id.space), s);
    CHECK(e0.extrapolated_e == 0.0);
    CHECK(e0.converged);

    const SystemSpec rot = make_rotation(0.6180339887498949);
    CHECK(bk_entropy(rot, make_lebesgue(rot.space), s).extrapolated_e == 0.0);

    EntropySettings bad = s;
    bad.x_probes = 10;
    CHECK_THROWS_AS(bk_entropy(dbl, make_lebesgue(dbl.space), bad), DomainError);
    bad = s;
    bad.delta_grid = {};
    CHECK_THROWS_AS(bk_entropy(dbl, make_lebesgue(dbl.space), bad), DomainError);
}

TEST_CASE("bk entropy is reproducible and worker independent") {
    EntropySettings s = quick();
    s.delta_grid = {0.05, 0.02};
    const SystemSpec cat = make_cat();
    const auto a = bk_entropy(cat, make_lebesgue(cat.space), s);
    s.workers = 3;
    const auto b = bk_entropy(cat, make_lebesgue(cat.space), s);
    CHECK(a.e_of_delta == b.e_of_delta);
    CHECK(a.se_of_delta == b.se_of_delta);
    CHECK(a.extrapolated_e == b.extrapolated_e);
    s.seed = 8;
    const auto c = bk_entropy(cat, make_lebesgue(cat.space), s);
    CHECK(std::fabs(c.extrapolated_e - a.extrapolated_e) <= 0.1);
}

TEST_CASE("entropy of a power scales") {
    EntropySettings s = quick();
    s.n_max = 8;
    const SystemSpec dbl = make_doubling();
    const auto r = power_law_check(dbl, make_lebesgue(dbl.space), 2, s);
    CHECK(r.outcome == CheckOutcome::pass);
    CHECK(std::fabs(r.difference) <= r.tolerance);
    CHECK_THROWS_AS(power_law_check(dbl, make_lebesgue(dbl.space), 4, s), DomainError);

    const SystemSpec rot = make_rotation(0.6180339887498949);
    const auto rr = power_law_check(rot, make_lebesgue(rot.space), 3, s);
    CHECK(rr.outcome == CheckOutcome::pass);
    CHECK(rr.powered.extrapolated_e == 0.0);
}

TEST_CASE("entropy implies expansive") {
    EntropySettings es = quick();
    VerdictSettings vs;
    vs.samples = 20000;
    const SystemSpec dbl = make_doubling();
    const auto d = entropy_implies_expansive_check(dbl, make_lebesgue(dbl.space), es, vs);
    CHECK(d.outcome == CheckOutcome::pass);
    for (const auto& p : d.pairs) {
        if (p.e_ci.lo > 0.0) {
            REQUIRE(p.verdict.has_value());
            CHECK(*p.verdict != Verdict::evidence_not_expansive);
        } else {
            CHECK_FALSE(p.verdict.has_value());
        }
    }
    const SystemSpec rot = make_rotation(0.6180339887498949);
    CHECK(entropy_implies_expansive_check(rot, make_lebesgue(rot.space), es, vs).outcome == CheckOutcome::vacuous);
}

TEST_CASE("volume expansion") {
    const auto d = volume_expanding_check(make_doubling(), 20, 50);
    CHECK(d.detected);
    CHECK(d.lambda == doctest::Approx(2.0));
    const auto t = volume_expanding_check(make_tent(), 20, 50);
    CHECK(t.detected);
    CHECK(t.lambda == doctest::Approx(2.0));
    const auto r = volume_expanding_check(make_rotation(0.3), 20, 50);
    CHECK_FALSE(r.detected);
    CHECK(r.lambda == doctest::Approx(1.0));
    const auto c = volume_expanding_check(make_cat(), 10, 10);
    CHECK_FALSE(c.detected);
    SystemSpec bare = make_doubling();
    bare.jacobian = nullptr;
    CHECK_THROWS_AS(volume_expanding_check(bare, 5, 5), CapabilityError);
    CHECK_THROWS_AS(volume_expanding_check(make_doubling(), 0, 5), DomainError);
}

TEST_CASE("check outcome names") {
    CHECK(to_string(CheckOutcome::pass) == "pass");
    CHECK(to_string(CheckOutcome::fail) == "fail");
    CHECK(to_string(CheckOutcome::vacuous) == "vacuous");
    CHECK(to_string(CheckOutcome::inconclusive) == "inconclusive");
}
