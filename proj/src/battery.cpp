#include "mexp/battery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "mexp/errors.hpp"
#include "mexp/expansiveness.hpp"
#include "mexp/format.hpp"
#include "mexp/registry.hpp"
#include "mexp/rng.hpp"

namespace mexp {

namespace {

using Evidence = std::vector<std::pair<std::string, std::string>>;

const double kLog2 = std::numbers::ln2;
const double kCatEntropy = std::log((3.0 + std::sqrt(5.0)) / 2.0);

struct Context {
    std::uint64_t seed = 0;
    int workers = 1;
    std::map<std::string, EntropyEstimate> entropy_memo;
    std::map<std::string, SystemSpec> systems;

    const SystemSpec& system(const std::string& name) {
        auto it = systems.find(name);
        if (it == systems.end()) it = systems.emplace(name, make_system(name)).first;
        return it->second;
    }

    EntropySettings entropy_settings(std::uint64_t samples = 100000) const {
        EntropySettings s;
        s.seed = derive_seed(seed, hash_label("entropy"));
        s.workers = workers;
        s.samples = samples;
        return s;
    }

    const EntropyEstimate& entropy(const std::string& name) {
        auto it = entropy_memo.find(name);
        if (it != entropy_memo.end()) return it->second;
        const SystemSpec& f = system(name);
        return entropy_memo.emplace(name, bk_entropy(f, make_lebesgue(f.space), entropy_settings())).first->second;
    }

    VerdictSettings verdict_settings(const std::string& id, double delta, int n_max, std::uint64_t samples) const {
        VerdictSettings v;
        v.delta = delta;
        v.n_max = n_max;
        v.samples = samples;
        v.seed = derive_seed(seed, hash_label(id));
        v.workers = workers;
        return v;
    }
};

std::string short_verdict(Verdict v) {
    switch (v) {
        case Verdict::evidence_expansive: return "E";
        case Verdict::evidence_not_expansive: return "N";
        case Verdict::inconclusive: return "?";
    }
    return "?";
}

std::string verdict_list(const std::vector<Verdict>& vs) {
    std::string s;
    for (Verdict v : vs) s += short_verdict(v);
    return s;
}

CheckOutcome all_of(bool ok) { return ok ? CheckOutcome::pass : CheckOutcome::fail; }

std::vector<Ball> circle_cover(double radius, double spacing) {
    std::vector<Ball> cover;
    const Space c = Space::circle();
    const int count = static_cast<int>(std::lround(1.0 / spacing));
    for (int k = 0; k < count; ++k) cover.emplace_back(c.point({k * spacing}), radius, false);
    return cover;
}

// --- cases -----------------------------------------------------------------

CheckOutcome case_isometry(Context& cx, Evidence& ev) {
    const SystemSpec& rot = cx.system("rotation");
    const MeasureSpec leb = make_lebesgue(rot.space);
    DecaySettings ds{Sided::two_sided, 0.05, 20, 100000, derive_seed(cx.seed, hash_label("isometry")), cx.workers};
    const DecaySeries series = decay_series(rot, leb, rot.space.point({0.3}), ds);
    const auto [lo, hi] = std::minmax_element(series.estimates.begin(), series.estimates.end());
    ev.emplace_back("rotation decay range", num(*lo) + " .. " + num(*hi));
    const auto vr = expansiveness_verdict(rot, leb, cx.verdict_settings("isometry", 0.05, 20, 100000));
    const auto vi =
        expansiveness_verdict(cx.system("identity"), leb, cx.verdict_settings("isometry", 0.05, 20, 100000));
    ev.emplace_back("rotation verdict", to_string(vr.verdict));
    ev.emplace_back("identity verdict", to_string(vi.verdict));
    return all_of(*lo >= 0.09 && *hi <= 0.11 && vr.verdict == Verdict::evidence_not_expansive &&
                  vi.verdict == Verdict::evidence_not_expansive);
}

CheckOutcome case_doubling_decay(Context& cx, Evidence& ev) {
    const SystemSpec& f = cx.system("doubling");
    const MeasureSpec leb = make_lebesgue(f.space);
    bool ok = true;
    for (double x0 : {1.0 / 3.0, 0.1}) {
        DecaySettings ds{Sided::one_sided, 0.01, 8, 100000, derive_seed(cx.seed, hash_label("doubling-decay")),
                         cx.workers};
        const DecaySeries s = decay_series(f, leb, f.space.point({x0}), ds);
        double worst = 0.0;
        for (std::size_t i = 0; i < s.estimates.size(); ++i) {
            const double exact = 0.02 * std::ldexp(1.0, -(s.n_values[i] - 1));
            const double hw = std::max(s.ci[i].half_width(), 1e-300);
            worst = std::max(worst, std::fabs(s.estimates[i] - exact) / hw);
        }
        ev.emplace_back("x=" + fixed(x0, 4) + " max |error|/half-width", fixed(worst, 3));
        ok = ok && worst <= 3.0;
    }
    return all_of(ok);
}

CheckOutcome case_bk_entropy(Context& cx, Evidence& ev) {
    const double d = cx.entropy("doubling").extrapolated_e;
    const double c = cx.entropy("cat").extrapolated_e;
    const double i = cx.entropy("identity").extrapolated_e;
    ev.emplace_back("e(doubling)", fixed(d, 4));
    ev.emplace_back("e(cat)", fixed(c, 4));
    ev.emplace_back("e(identity)", num(i));
    return all_of(d >= 0.64 && d <= 0.75 && c >= 0.86 && c <= 1.06 && i == 0.0);
}

CheckOutcome case_variational(Context& cx, Evidence& ev) {
    const double d = cx.entropy("doubling").extrapolated_e;
    const double c = cx.entropy("cat").extrapolated_e;
    ev.emplace_back("e(doubling) vs log 2 + 0.05", fixed(d, 4) + " <= " + fixed(kLog2 + 0.05, 4));
    ev.emplace_back("e(cat) vs h(cat) + 0.1", fixed(c, 4) + " <= " + fixed(kCatEntropy + 0.1, 4));
    return all_of(d <= kLog2 + 0.05 && c <= kCatEntropy + 0.1);
}

CheckOutcome case_power_law(Context& cx, Evidence& ev) {
    bool ok = true, conclusive = true;
    for (const char* name : {"doubling", "identity", "rotation"}) {
        const SystemSpec& f = cx.system(name);
        const PowerLawReport r = power_law_check(f, make_lebesgue(f.space), 2, cx.entropy_settings());
        ev.emplace_back(std::string(name) + " |e(f^2) - 2e(f)| vs tolerance",
                        fixed(std::fabs(r.difference), 4) + " <= " + fixed(r.tolerance, 4) + " (" +
                            to_string(r.outcome) + ")");
        ok = ok && r.outcome != CheckOutcome::fail;
        conclusive = conclusive && r.outcome == CheckOutcome::pass;
    }
    if (!ok) return CheckOutcome::fail;
    return conclusive ? CheckOutcome::pass : CheckOutcome::inconclusive;
}

CheckOutcome case_pp2(Context& cx, Evidence& ev) {
    bool ok = true;
    const std::vector<double> grid{0.05, 0.02, 0.01};
    for (const std::string& name : system_names()) {
        const SystemSpec& f = cx.system(name);
        std::vector<double> g = grid;
        std::string measure = "lebesgue";
        if (name == "denjoy") {
            const double l = f.denjoy->smallest_gap();
            g = {2.0 * l, l, 0.5 * l};
            measure = "denjoy-minimal";
        }
        const auto r =
            power_consistency_check(f, make_measure(measure, f), 2, g, cx.verdict_settings("pp2", g[0], 20, 20000));
        ev.emplace_back(name + " f | f^2", verdict_list(r.base) + " | " + verdict_list(r.powered) +
                                               (r.consistent ? "" : " (inconsistent)"));
        ok = ok && r.consistent;
    }
    return all_of(ok);
}

CheckOutcome case_thd(Context& cx, Evidence& ev) {
    const SystemSpec& f = cx.system("interval-square");
    bool ok = true;
    for (const char* m : {"lebesgue", "pushforward-square", "pushforward-sine"}) {
        const MeasureSpec mu = make_measure(m, f);
        std::vector<Verdict> vs;
        for (double d : {0.2, 0.1, 0.05}) vs.push_back(expansiveness_verdict(f, mu, cx.verdict_settings("thD", d, 20, 100000)).verdict);
        ev.emplace_back(std::string(m) + " at delta 0.2, 0.1, 0.05", verdict_list(vs));
        ok = ok && std::all_of(vs.begin(), vs.end(), [](Verdict v) { return v == Verdict::evidence_not_expansive; });
    }
    return all_of(ok);
}

CheckOutcome case_circle1(Context& cx, Evidence& ev) {
    const SystemSpec& d = cx.system("denjoy");
    const MeasureSpec nu = make_measure("denjoy-minimal", d);
    const double delta = 0.5 * d.denjoy->smallest_gap();
    const auto vd = expansiveness_verdict(d, nu, cx.verdict_settings("circle1", delta, 30, 20000));
    const double worst = *std::max_element(vd.terminal_estimates.begin(), vd.terminal_estimates.end());
    ev.emplace_back("denjoy delta", num(delta));
    ev.emplace_back("denjoy max terminal estimate (n=30)", num(worst));
    ev.emplace_back("denjoy verdict", to_string(vd.verdict));
    const SystemSpec& rot = cx.system("rotation");
    bool rot_ok = true;
    for (const char* m : {"lebesgue", "denjoy-minimal"}) {
        const auto vr = expansiveness_verdict(rot, make_measure(m, rot), cx.verdict_settings("circle1", 0.05, 30, 20000));
        ev.emplace_back(std::string("rotation with ") + m, to_string(vr.verdict));
        rot_ok = rot_ok && vr.verdict == Verdict::evidence_not_expansive;
    }
    return all_of(worst < 0.05 && vd.verdict == Verdict::evidence_expansive && rot_ok);
}

CheckOutcome case_diagonal(Context& cx, Evidence& ev) {
    struct Run {
        const char* name;
        Sided sided;
        double delta;
        int n;
        std::uint64_t pairs;
    };
    bool ok = true;
    const std::uint64_t seed = derive_seed(cx.seed, hash_label("diagonal"));
    for (const Run& r : {Run{"doubling", Sided::one_sided, 0.05, 6, 200000}, Run{"rotation", Sided::two_sided, 0.05, 20, 200000},
                         Run{"cat", Sided::two_sided, 0.1, 2, 1000000}}) {
        const SystemSpec& f = cx.system(r.name);
        const FubiniReport fr =
            fubini_cross_check(f, make_lebesgue(f.space), DecaySettings{r.sided, r.delta, r.n, r.pairs, seed, cx.workers}, 50);
        ev.emplace_back(std::string(r.name) + " diagonal vs probe mean",
                        fixed(fr.diagonal.terminal(), 5) + " vs " + fixed(fr.probe_mean, 5) + (fr.agree ? "" : " (disagree)"));
        ok = ok && fr.agree;
    }
    // isolation of the diagonal matches the verdicts
    const DecaySeries dd = product_diagonal_test(cx.system("doubling"), make_lebesgue(Space::circle()),
                                                 DecaySettings{Sided::one_sided, 0.05, 12, 100000, seed, cx.workers});
    const DecaySeries dc = product_diagonal_test(cx.system("cat"), make_lebesgue(Space::torus2()),
                                                 DecaySettings{Sided::two_sided, 0.05, 12, 100000, seed, cx.workers});
    const DecaySeries dr = product_diagonal_test(cx.system("rotation"), make_lebesgue(Space::circle()),
                                                 DecaySettings{Sided::two_sided, 0.05, 12, 100000, seed, cx.workers});
    ev.emplace_back("tube upper CI at n=12: doubling, cat", num(dd.terminal_ci().hi) + ", " + num(dc.terminal_ci().hi));
    ev.emplace_back("tube lower CI at n=12: rotation", num(dr.terminal_ci().lo));
    return all_of(ok && dd.terminal_ci().hi <= 0.01 && dc.terminal_ci().hi <= 0.01 && dr.terminal_ci().lo >= 0.01);
}

CheckOutcome case_pp0(Context& cx, Evidence& ev) {
    const auto cover = circle_cover(0.1, 0.05);
    GeneratorSettings gs;
    gs.seed = derive_seed(cx.seed, hash_label("pp0"));
    gs.workers = cx.workers;
    const SystemSpec& dbl = cx.system("doubling");
    const GeneratorReport rd = generator_check(dbl, make_lebesgue(dbl.space), cover, gs);
    const SystemSpec& id = cx.system("identity");
    const GeneratorReport ri = generator_check(id, make_lebesgue(id.space), cover, gs);
    ev.emplace_back("lebesgue number of the cover", fixed(rd.lebesgue_number, 4));
    ev.emplace_back("doubling max intersection (upper CI)", num(rd.max_ci.hi));
    ev.emplace_back("identity max intersection", fixed(ri.max_intersection_estimate, 4) + " (" + ri.worst_kind + ")");
    const bool id_blocked = ri.max_intersection_estimate >= 0.2 - ri.max_ci.half_width();
    return all_of(rd.is_generator_evidence && !ri.is_generator_evidence && id_blocked);
}

CheckOutcome case_tha(Context& cx, Evidence& ev) {
    const std::uint64_t seed = derive_seed(cx.seed, hash_label("thA"));
    const auto fc = periodic_fraction(cx.system("cat"), make_lebesgue(Space::torus2()), 6, 1e-4, 100000, seed, cx.workers);
    const auto fi =
        periodic_fraction(cx.system("identity"), make_lebesgue(Space::circle()), 6, 1e-4, 100000, seed, cx.workers);
    ev.emplace_back("cat fraction (P=6, eps=1e-4)", num(fc.fraction) + " [" + num(fc.ci.lo) + ", " + num(fc.ci.hi) + "]");
    ev.emplace_back("identity fraction", num(fi.fraction));
    return all_of(fc.fraction <= 1e-3 && fi.fraction == 1.0);
}

CheckOutcome case_reddy(Context& cx, Evidence& ev) {
    SemiOrbitSettings s;
    s.seed = derive_seed(cx.seed, hash_label("reddy"));
    s.workers = cx.workers;
    const SystemSpec& sq = cx.system("interval-square");
    const auto fsq = converging_semiorbit_fraction(sq, make_lebesgue(sq.space), s);
    const SystemSpec& rot = cx.system("rotation");
    const auto frot = converging_semiorbit_fraction(rot, make_lebesgue(rot.space), s);
    ev.emplace_back("interval-square fraction", num(fsq.fraction));
    ev.emplace_back("rotation fraction", num(frot.fraction));
    bool consistent = true;
    for (const char* name : {"cat", "denjoy"}) {
        const SystemSpec& f = cx.system(name);
        const bool denjoy = f.denjoy != nullptr;
        const MeasureSpec mu = make_measure(denjoy ? "denjoy-minimal" : "lebesgue", f);
        const double delta = denjoy ? 0.5 * f.denjoy->smallest_gap() : 0.05;
        const auto v = expansiveness_verdict(f, mu, cx.verdict_settings("reddy", delta, 20, 20000));
        SemiOrbitSettings so = s;
        so.samples = 20000;
        const auto fr = converging_semiorbit_fraction(f, mu, so);
        ev.emplace_back(std::string(name) + " verdict, fraction", to_string(v.verdict) + ", " + num(fr.fraction));
        if (v.verdict == Verdict::evidence_expansive && fr.ci.lo > 0.01) consistent = false;
    }
    return all_of(fsq.fraction >= 0.99 && frot.hits == 0 && consistent);
}

CheckOutcome case_entropy_expansive(Context& cx, Evidence& ev) {
    bool any = false, broken = false;
    for (const std::string& name : system_names()) {
        const SystemSpec& f = cx.system(name);
        const bool denjoy = f.denjoy != nullptr;
        EntropySettings es = cx.entropy_settings(denjoy ? 20000 : 100000);
        if (denjoy) {
            const double l = f.denjoy->smallest_gap();
            es.delta_grid = {2.0 * l, l, 0.5 * l};
        }
        const auto r = entropy_implies_expansive_check(f, make_measure(denjoy ? "denjoy-minimal" : "lebesgue", f), es,
                                                       cx.verdict_settings("entropy-expansive", 0.0, 20, 20000));
        std::string detail = to_string(r.outcome) + ", e=" + fixed(r.entropy.extrapolated_e, 4);
        for (const auto& p : r.pairs)
            if (p.verdict) detail += ", " + short_verdict(*p.verdict) + "@" + num(p.delta);
        ev.emplace_back(name, detail);
        any = any || r.outcome == CheckOutcome::pass;
        broken = broken || r.outcome == CheckOutcome::fail;
    }
    if (broken) return CheckOutcome::fail;
    return any ? CheckOutcome::pass : CheckOutcome::vacuous;
}

CheckOutcome case_exxx1(Context& cx, Evidence& ev) {
    const std::uint64_t seed = derive_seed(cx.seed, hash_label("exxx1"));
    bool ok = true;
    for (const char* name : {"doubling", "tent", "rotation"}) {
        const SystemSpec& f = cx.system(name);
        const VolumeExpansion v = volume_expanding_check(f, 20, 200, seed);
        std::string detail = std::string(v.detected ? "detected" : "not detected") + ", lambda=" + fixed(v.lambda, 4);
        if (v.detected) {
            VerdictSettings vs = cx.verdict_settings("exxx1", 0.05, 20, 100000);
            vs.sided = Sided::one_sided;
            const auto verdict = expansiveness_verdict(f, make_lebesgue(f.space), vs).verdict;
            detail += ", one-sided verdict " + to_string(verdict);
            ok = ok && verdict != Verdict::evidence_not_expansive && v.lambda >= 1.9;
        } else {
            ok = ok && std::string(name) == "rotation";
        }
        ev.emplace_back(name, detail);
    }
    return all_of(ok);
}

CheckOutcome case_atomic(Context& cx, Evidence& ev) {
    bool ok = true;
    for (const char* name : {"rotation", "doubling", "cat"}) {
        const SystemSpec& f = cx.system(name);
        const MeasureSpec mu = make_measure("dirac:0.5", f);
        std::vector<Verdict> vs;
        for (double d : {0.2, 0.05, 0.01})
            vs.push_back(expansiveness_verdict(f, mu, cx.verdict_settings("atomic", d, 20, 1000)).verdict);
        ev.emplace_back(std::string(name) + " with dirac:0.5", verdict_list(vs));
        ok = ok && std::all_of(vs.begin(), vs.end(), [](Verdict v) { return v == Verdict::evidence_not_expansive; });
    }
    return all_of(ok);
}

using CaseFn = std::function<CheckOutcome(Context&, Evidence&)>;

struct Registered {
    TheoremCase info;
    CaseFn run;
};

const std::vector<Registered>& registry() {
    static const std::vector<Registered> cases = {
        {{"isometry", "isometries", "An isometry is never mu-expansive for a nonatomic mu.",
          "Rotation by the golden angle with Lebesgue at delta=0.05: every decay estimate for n <= 20 lies in "
          "[0.09, 0.11] and the verdict is evidence_not_expansive. The identity gives the same verdict.",
          "1e5 samples, n <= 20, 20 probes, threshold 0.01", {"rotation", "identity"}, {"lebesgue"}},
         case_isometry},
        {{"doubling-decay", "decay of one-sided dynamical balls",
          "Positive mu-expansiveness means mu(B_f[x,delta,n]) tends to zero for every x.",
          "Doubling with Lebesgue, one-sided, delta=0.01, x in {1/3, 0.1}: the estimate for n <= 8 stays within three "
          "CI half-widths of 0.02 * 2^-(n-1).",
          "1e5 samples, n <= 8", {"doubling"}, {"lebesgue"}},
         case_doubling_decay},
        {{"bk-entropy", "metric BK-entropy",
          "The identity has zero BK-entropy; uniformly expanding examples have positive BK-entropy.",
          "Extrapolated entropy: doubling in [0.64, 0.75], cat in [0.86, 1.06], identity exactly 0.",
          "delta grid {0.02, 0.01, 0.005}, n <= 14, 30 probes, 1e5 samples", {"doubling", "cat", "identity"}, {"lebesgue"}},
         case_bk_entropy},
        {{"variational", "entropy bound",
          "The BK-entropy of any invariant measure is bounded by the topological entropy.",
          "e(doubling) <= log 2 + 0.05 and e(cat) <= log((3+sqrt5)/2) + 0.1.", "as bk-entropy", {"doubling", "cat"},
          {"lebesgue"}},
         case_variational},
        {{"power-law", "entropy of powers", "e_mu(f^k) = k e_mu(f) for every k.",
          "For doubling, identity and rotation: |e(f^2) - 2 e(f)| <= 2 (SE_2 + SE_1) + 0.05, with equal seeds and budgets.",
          "as bk-entropy", {"doubling", "identity", "rotation"}, {"lebesgue"}},
         case_power_law},
        {{"pp2", "powers", "f is mu-expansive exactly when f^k is, two-sided and one-sided alike.",
          "For every zoo system, verdicts for f and f^2 on the grid {0.05, 0.02, 0.01} (Denjoy: {2l, l, l/2} with l the "
          "smallest gap) show no contradiction and every definite verdict is matched.",
          "2e4 samples, n <= 20, 20 probes", system_names(), {"lebesgue", "denjoy-minimal"}},
         case_pp2},
        {{"thD", "interval homeomorphisms",
          "No homeomorphism of a compact interval is mu-expansive for a Borel probability mu.",
          "x -> x^2 with Lebesgue, with the x^2 pushforward and with the sin^2 pushforward: evidence_not_expansive at "
          "every delta in {0.2, 0.1, 0.05}.",
          "1e5 samples, n <= 20, 20 probes", {"interval-square"}, {"lebesgue", "pushforward-square", "pushforward-sine"}},
         case_thd},
        {{"circle1", "circle homeomorphisms",
          "A circle homeomorphism is mu-expansive for some mu exactly when it is a Denjoy map.",
          "Denjoy map (N=64) with its Cantor measure at delta = half the smallest gap: terminal estimate < 0.05 at "
          "n=30 and evidence_expansive. Rotation with Lebesgue and with the Cantor measure: evidence_not_expansive.",
          "2e4 samples, n <= 30, 20 probes", {"denjoy", "rotation"}, {"denjoy-minimal", "lebesgue"}},
         case_circle1},
        {{"diagonal", "product diagonal", "f is mu-expansive exactly when the diagonal is mu^2-isolated for f x f.",
          "Tube estimate over mu x mu pairs agrees with the mean of decay terminals over 50 probes for doubling, "
          "rotation and cat; the tube empties (upper CI <= 0.01 at n=12) for doubling and cat but not for rotation.",
          "2e5 pairs (cat 1e6), 50 probes", {"doubling", "rotation", "cat"}, {"lebesgue"}},
         case_diagonal},
        {{"pp0", "generators", "f is (positively) mu-expansive exactly when it has a (positive) mu-generator.",
          "Cover of the circle by open balls of radius 0.1 centred on a 0.05 grid: for doubling every tested itinerary "
          "has intersection upper CI <= 0.01; for the identity some itinerary keeps the full ball mass.",
          "n <= 12 one-sided, 40 adversarial + 40 random itineraries, 1e5 samples each", {"doubling", "identity"},
          {"lebesgue"}},
         case_pp0},
        {{"thA", "periodic points", "A mu-expansive homeomorphism gives measure zero to its periodic points.",
          "Cat map with Lebesgue: fraction of points within 1e-4 of returning in at most 6 steps is <= 1e-3. The "
          "identity gives 1.",
          "1e5 samples", {"cat", "identity"}, {"lebesgue"}},
         case_tha},
        {{"reddy", "converging semi-orbits",
          "For a mu-expansive homeomorphism the points with converging semi-orbits form a mu-null set.",
          "x -> x^2: fraction >= 0.99; rotation: fraction 0; cat and Denjoy are evidence_expansive and their "
          "fraction has lower CI <= 0.01.",
          "n=40, window 4, tol 1e-6, 1e5 samples (2e4 for cat and Denjoy)", {"interval-square", "rotation", "cat", "denjoy"},
          {"lebesgue", "denjoy-minimal"}},
         case_reddy},
        {{"entropy-expansive", "positive entropy", "A continuous map with e_mu(f) > 0 is positively mu-expansive.",
          "For every zoo system and every delta where the entropy lower CI is positive, the one-sided verdict is not "
          "evidence_not_expansive.",
          "entropy as bk-entropy (Denjoy: 2e4 samples, gap-scale grid); verdicts 2e4 samples, n <= 20", system_names(),
          {"lebesgue", "denjoy-minimal"}},
         case_entropy_expansive},
        {{"exxx1", "volume expansion", "A volume expanding map of a closed manifold is positively Lebesgue-expansive.",
          "|det Df^n|^(1/n) over 200 probes and n <= 20: doubling and tent detected with lambda >= 1.9 and their "
          "one-sided Lebesgue verdict is not evidence_not_expansive; rotation not detected.",
          "horizon 20, 200 probes, verdicts 1e5 samples", {"doubling", "tent", "rotation"}, {"lebesgue"}},
         case_exxx1},
        {{"atomic", "atoms", "A mu-expansive map forces mu to be nonatomic.",
          "With a Dirac measure every verdict is evidence_not_expansive, at delta in {0.2, 0.05, 0.01}.",
          "1e3 samples, 20 probes", {"rotation", "doubling", "cat"}, {"dirac:0.5"}},
         case_atomic},
    };
    return cases;
}

nlohmann::ordered_json verdict_json(Verdict v) { return to_string(v); }

}  // namespace

const std::vector<TheoremCase>& battery_cases() {
    static const std::vector<TheoremCase> infos = [] {
        std::vector<TheoremCase> out;
        for (const auto& r : registry()) out.push_back(r.info);
        return out;
    }();
    return infos;
}

const TheoremCase& find_case(const std::string& id) {
    for (const auto& c : battery_cases())
        if (c.id == id) return c;
    throw UsageError("unknown case id '" + id + "'");
}

std::vector<ConsistencyRow> consistency_matrix(std::uint64_t seed, int workers) {
    std::vector<ConsistencyRow> rows;
    const auto cover = circle_cover(0.1, 0.05);
    const std::uint64_t s = derive_seed(seed, hash_label("consistency"));
    for (const char* name : {"doubling", "identity", "rotation"}) {
        const SystemSpec f = make_system(name);
        const MeasureSpec leb = make_lebesgue(f.space);
        ConsistencyRow row;
        row.system = name;
        VerdictSettings vs;
        vs.delta = 0.05;
        vs.n_max = 12;
        vs.samples = 20000;
        vs.seed = s;
        vs.workers = workers;
        vs.sided = Sided::one_sided;
        row.decay = expansiveness_verdict(f, leb, vs).verdict;

        const DecaySeries tube = product_diagonal_test(f, leb, DecaySettings{Sided::one_sided, 0.05, 12, 100000, s, workers});
        row.diagonal = tube.terminal_ci().hi <= 0.01   ? Verdict::evidence_expansive
                       : tube.terminal_ci().lo >= 0.01 ? Verdict::evidence_not_expansive
                                                       : Verdict::inconclusive;
        GeneratorSettings gs;
        gs.seed = s;
        gs.workers = workers;
        gs.sequence_samples = 20;
        gs.mc_samples = 20000;
        const GeneratorReport g = generator_check(f, leb, cover, gs);
        row.generator = g.is_generator_evidence    ? Verdict::evidence_expansive
                        : g.max_ci.lo >= 0.01      ? Verdict::evidence_not_expansive
                                                   : Verdict::inconclusive;
        row.agree = row.decay == row.diagonal && row.diagonal == row.generator;
        rows.push_back(row);
    }
    return rows;
}

bool BatteryReport::ok() const {
    return std::all_of(cases.begin(), cases.end(), [](const CaseOutcome& c) {
        return c.outcome == CheckOutcome::pass || c.outcome == CheckOutcome::vacuous;
    });
}

std::vector<std::string> BatteryReport::failing() const {
    std::vector<std::string> ids;
    for (const auto& c : cases)
        if (c.outcome != CheckOutcome::pass && c.outcome != CheckOutcome::vacuous) ids.push_back(c.info.id);
    return ids;
}

BatteryReport run_battery(const std::vector<std::string>& filter, std::uint64_t seed, int workers) {
    for (const auto& id : filter) find_case(id);
    BatteryReport report;
    report.seed = seed;
    Context cx;
    cx.seed = seed;
    cx.workers = workers;
    for (const auto& r : registry()) {
        if (!filter.empty() && std::find(filter.begin(), filter.end(), r.info.id) == filter.end()) continue;
        CaseOutcome out;
        out.info = r.info;
        try {
            out.outcome = r.run(cx, out.evidence);
        } catch (const std::exception& e) {
            out.outcome = CheckOutcome::inconclusive;
            out.error = e.what();
        }
        report.cases.push_back(std::move(out));
    }
    if (filter.empty()) report.consistency = consistency_matrix(seed, workers);
    return report;
}

std::string battery_json(const BatteryReport& report) {
    nlohmann::ordered_json j;
    j["version"] = MEXP_VERSION;
    j["seed"] = report.seed;
    if (!report.config.empty()) j["config"] = report.config;
    std::map<std::string, int> tally;
    for (const auto& c : report.cases) ++tally[to_string(c.outcome)];
    j["summary"] = nlohmann::ordered_json::object();
    for (const char* k : {"pass", "fail", "vacuous", "inconclusive"}) j["summary"][k] = tally[k];
    j["ok"] = report.ok();
    j["cases"] = nlohmann::ordered_json::array();
    for (const auto& c : report.cases) {
        nlohmann::ordered_json cj;
        cj["id"] = c.info.id;
        cj["anchor"] = c.info.anchor;
        cj["claim"] = c.info.claim;
        cj["outcome"] = to_string(c.outcome);
        cj["evidence"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : c.evidence) cj["evidence"][k] = v;
        if (!c.error.empty()) cj["error"] = c.error;
        j["cases"].push_back(cj);
    }
    j["consistency"] = nlohmann::ordered_json::array();
    for (const auto& r : report.consistency) {
        j["consistency"].push_back({{"system", r.system},
                                    {"decay", verdict_json(r.decay)},
                                    {"diagonal", verdict_json(r.diagonal)},
                                    {"generator", verdict_json(r.generator)},
                                    {"agree", r.agree}});
    }
    return j.dump(2) + "\n";
}

std::string battery_markdown(const BatteryReport& report) {
    std::ostringstream md;
    md << "# Theorem battery\n\n";
    md << "version " << MEXP_VERSION << ", seed " << report.seed << "\n\n";
    if (!report.config.empty()) md << "```\n" << report.config << "```\n\n";
    md << "| case | statement | outcome |\n|---|---|---|\n";
    for (const auto& c : report.cases) md << "| " << c.info.id << " | " << c.info.anchor << " | " << to_string(c.outcome) << " |\n";
    for (const auto& c : report.cases) {
        md << "\n## " << c.info.id << " (" << c.info.anchor << ")\n\n";
        md << c.info.claim << "\n\n" << c.info.restatement << "\n\n";
        for (const auto& [k, v] : c.evidence) md << "- " << k << ": " << v << "\n";
        if (!c.error.empty()) md << "- error: " << c.error << "\n";
    }
    if (!report.consistency.empty()) {
        md << "\n## Estimator consistency (one-sided, delta 0.05)\n\n";
        md << "| system | decay | diagonal | generator | agree |\n|---|---|---|---|---|\n";
        for (const auto& r : report.consistency)
            md << "| " << r.system << " | " << to_string(r.decay) << " | " << to_string(r.diagonal) << " | "
               << to_string(r.generator) << " | " << (r.agree ? "yes" : "no") << " |\n";
    }
    return md.str();
}

std::string explain(const std::string& id) {
    const TheoremCase& c = find_case(id);
    std::ostringstream out;
    out << c.id << ": " << c.anchor << "\n\n";
    out << "statement:   " << c.claim << "\n";
    out << "executed as: " << c.restatement << "\n";
    out << "budgets:     " << c.budgets << "\n";
    out << "systems:     ";
    for (std::size_t i = 0; i < c.systems.size(); ++i) out << (i ? ", " : "") << c.systems[i];
    out << "\nmeasures:    ";
    for (std::size_t i = 0; i < c.measures.size(); ++i) out << (i ? ", " : "") << c.measures[i];
    out << "\n";
    return out.str();
}

}  // namespace mexp
