#include "mexp/expansiveness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "mexp/errors.hpp"
#include "mexp/parallel.hpp"
#include "mexp/rng.hpp"
#include "mexp/survival.hpp"

namespace mexp {

namespace {

constexpr std::uint64_t kChunk = 4096;
constexpr std::uint64_t kLocalStream = hash_label("local");
constexpr std::uint64_t kProbeStream = hash_label("probes");
constexpr std::uint64_t kPairX = hash_label("pair-x");
constexpr std::uint64_t kPairY = hash_label("pair-y");
constexpr std::uint64_t kItinerary = hash_label("itinerary");
constexpr std::uint64_t kRandomItinerary = hash_label("random-itinerary");
constexpr std::uint64_t kOrbitStream = hash_label("orbit");

/// Number of i in [0,count) with pred(i), summed per fixed chunk.
template <class Pred>
std::uint64_t count_hits(std::uint64_t count, int workers, Pred&& pred) {
    const std::uint64_t chunks = (count + kChunk - 1) / kChunk;
    std::vector<std::uint64_t> partial(chunks, 0);
    parallel_for(chunks, workers, [&](std::size_t c) {
        const std::uint64_t end = std::min(count, (c + 1) * kChunk);
        std::uint64_t hits = 0;
        for (std::uint64_t i = c * kChunk; i < end; ++i)
            if (pred(i)) ++hits;
        partial[c] = hits;
    });
    std::uint64_t total = 0;
    for (auto h : partial) total += h;
    return total;
}

bool use_localized(const MeasureSpec& mu, Sampling s) {
    switch (s) {
        case Sampling::global: return false;
        case Sampling::localized:
            if (!mu.has_oracle()) throw CapabilityError(mu.name + " has no ball oracle; localized sampling unavailable");
            return true;
        case Sampling::automatic: return mu.has_oracle();
    }
    return false;
}

void require_two_sided(const SystemSpec& f, Sided sided) {
    if (sided == Sided::two_sided && !f.invertible())
        throw CapabilityError(f.name + " is not invertible; two-sided dynamical balls need f^-1");
}

void fill_series(DecaySeries& s, const std::vector<std::uint64_t>& hist, std::uint64_t n_samples, double mass) {
    s.survivors = survivors_from_histogram(hist);
    const std::size_t n_max = s.survivors.size();
    s.n_values.resize(n_max);
    s.estimates.resize(n_max);
    s.ci.resize(n_max);
    for (std::size_t i = 0; i < n_max; ++i) {
        s.n_values[i] = static_cast<int>(i + 1);
        const Interval w = wilson(s.survivors[i], n_samples);
        s.estimates[i] = mass * static_cast<double>(s.survivors[i]) / static_cast<double>(n_samples);
        s.ci[i] = Interval{mass * w.lo, mass * w.hi};
    }
}

FractionEstimate fraction(std::uint64_t hits, std::uint64_t n) {
    return FractionEstimate{hits, n, static_cast<double>(hits) / static_cast<double>(n), wilson(hits, n)};
}

Point probe(const MeasureSpec& mu, std::uint64_t seed, std::uint64_t j) {
    CounterRng rng(seed, kProbeStream, j);
    return mu.draw(rng);
}

Verdict classify(const std::vector<Verdict>& v, Verdict target) {
    return std::all_of(v.begin(), v.end(), [&](Verdict x) { return x == target; }) ? target : Verdict::inconclusive;
}

bool matched(const std::vector<Verdict>& from, const std::vector<Verdict>& to) {
    for (Verdict v : from) {
        if (v == Verdict::inconclusive) continue;
        if (std::find(to.begin(), to.end(), v) == to.end()) return false;
    }
    return true;
}

}  // namespace

std::string to_string(Sampling s) {
    switch (s) {
        case Sampling::automatic: return "automatic";
        case Sampling::global: return "global";
        case Sampling::localized: return "localized";
    }
    return "?";
}

bool dyn_ball_contains(const SystemSpec& f, const DynBallQuery& q, const Point& y) {
    if (!f.space.tags(q.center) || !f.space.tags(y)) throw DomainError("point does not belong to " + f.space.name());
    if (q.n < 1) throw DomainError("window length n must be at least 1");
    return pair_survival(f, q.center, y, q.sided, q.delta, q.n) >= q.n;
}

DecaySeries decay_series(const SystemSpec& f, const MeasureSpec& mu, const Point& x, const DecaySettings& s) {
    if (s.n_max < 1) throw DomainError("n_max must be at least 1");
    if (s.samples < 100) throw DomainError("decay_series needs at least 100 samples");
    if (!(s.delta > 0.0)) throw DomainError("delta must be positive");
    if (!f.space.tags(x)) throw DomainError("center does not belong to " + f.space.name());
    require_two_sided(f, s.sided);

    DecaySeries out;
    out.center = x;
    out.delta = s.delta;
    out.sided = s.sided;
    out.sample_count = s.samples;
    out.seed = s.seed;
    out.localized = use_localized(mu, s.sampling);

    SurvivalSettings ss{s.sided, s.delta, s.n_max, s.workers};
    std::vector<std::uint64_t> hist;
    if (out.localized) {
        const Ball ball(x, s.delta);
        out.ball_mass = mu.ball_mass(ball);
        if (out.ball_mass <= 0.0) {
            hist.assign(static_cast<std::size_t>(s.n_max) + 1, 0);
            hist[0] = s.samples;
        } else {
            auto draw = mu.draw_in_ball;
            hist = survival_histogram(
                f, s.samples,
                [&](std::uint64_t i) {
                    CounterRng rng(s.seed, kLocalStream, i);
                    return std::pair{x, draw(ball, rng)};
                },
                ss);
        }
    } else {
        auto draw = mu.draw;
        hist = survival_histogram(
            f, s.samples,
            [&](std::uint64_t i) {
                CounterRng rng(s.seed, kSampleStream, i);
                return std::pair{x, draw(rng)};
            },
            ss);
    }
    fill_series(out, hist, s.samples, out.ball_mass);
    return out;
}

ExpansivenessVerdict expansiveness_verdict(const SystemSpec& f, const MeasureSpec& mu, const VerdictSettings& s) {
    if (!(s.threshold > 0.0)) throw DomainError("threshold must be positive");
    if (s.x_probes < 20) throw DomainError("expansiveness_verdict needs at least 20 probes");
    const Sided sided = s.sided.value_or(f.invertible() ? Sided::two_sided : Sided::one_sided);
    require_two_sided(f, sided);

    ExpansivenessVerdict v;
    v.delta = s.delta;
    v.sided = sided;
    v.x_probe_count = s.x_probes;
    v.n_max = s.n_max;
    v.samples = s.samples;
    v.threshold = s.threshold;
    v.best_lower_bound = -1.0;

    const std::uint64_t probe_seed = derive_seed(s.seed, kProbeStream);
    for (int j = 0; j < s.x_probes; ++j) {
        const Point x = probe(mu, probe_seed, static_cast<std::uint64_t>(j));
        DecaySettings ds{sided, s.delta, s.n_max, s.samples, derive_seed(s.seed, static_cast<std::uint64_t>(j)), s.workers,
                         s.sampling};
        const DecaySeries series = decay_series(f, mu, x, ds);
        v.probes.push_back(x);
        v.terminal_estimates.push_back(series.terminal());
        v.worst_upper_bound = std::max(v.worst_upper_bound, series.terminal_ci().hi);
        if (series.terminal_ci().lo > v.best_lower_bound) {
            v.best_lower_bound = series.terminal_ci().lo;
            if (v.best_lower_bound >= s.threshold) v.witness = x;
        }
    }
    if (v.worst_upper_bound <= s.threshold)
        v.verdict = Verdict::evidence_expansive;
    else if (v.best_lower_bound >= s.threshold)
        v.verdict = Verdict::evidence_not_expansive;
    else
        v.verdict = Verdict::inconclusive;
    if (v.verdict != Verdict::evidence_not_expansive) v.witness.reset();
    return v;
}

PowerConsistencyReport power_consistency_check(const SystemSpec& f, const MeasureSpec& mu, int k,
                                               const std::vector<double>& delta_grid, const VerdictSettings& settings) {
    if (k < 2) throw DomainError("power_consistency_check needs k >= 2");
    if (delta_grid.empty()) throw DomainError("empty delta grid");
    const SystemSpec fk = power(f, k);
    PowerConsistencyReport r;
    r.k = k;
    r.delta_grid = delta_grid;
    for (double d : delta_grid) {
        VerdictSettings s = settings;
        s.delta = d;
        r.base.push_back(expansiveness_verdict(f, mu, s).verdict);
        r.powered.push_back(expansiveness_verdict(fk, mu, s).verdict);
    }
    const Verdict a = classify(r.base, Verdict::evidence_expansive), b = classify(r.powered, Verdict::evidence_expansive);
    const Verdict an = classify(r.base, Verdict::evidence_not_expansive),
                  bn = classify(r.powered, Verdict::evidence_not_expansive);
    r.contradiction = (a == Verdict::evidence_expansive && bn == Verdict::evidence_not_expansive) ||
                      (b == Verdict::evidence_expansive && an == Verdict::evidence_not_expansive);
    r.consistent = !r.contradiction && matched(r.base, r.powered) && matched(r.powered, r.base);
    return r;
}

DecaySeries product_diagonal_test(const SystemSpec& f, const MeasureSpec& mu, const DecaySettings& s) {
    if (s.n_max < 1) throw DomainError("n_max must be at least 1");
    if (s.samples < 100) throw DomainError("product_diagonal_test needs at least 100 pairs");
    require_two_sided(f, s.sided);
    DecaySeries out;
    out.delta = s.delta;
    out.sided = s.sided;
    out.sample_count = s.samples;
    out.seed = s.seed;
    auto draw = mu.draw;
    const auto hist = survival_histogram(
        f, s.samples,
        [&](std::uint64_t i) {
            CounterRng rx(s.seed, kPairX, i), ry(s.seed, kPairY, i);
            Point x = draw(rx);
            return std::pair{x, draw(ry)};
        },
        SurvivalSettings{s.sided, s.delta, s.n_max, s.workers});
    fill_series(out, hist, s.samples, 1.0);
    return out;
}

FubiniReport fubini_cross_check(const SystemSpec& f, const MeasureSpec& mu, const DecaySettings& s, int probes) {
    if (probes < 2) throw DomainError("fubini_cross_check needs at least 2 probes");
    FubiniReport r;
    r.diagonal = product_diagonal_test(f, mu, s);
    r.probes = probes;
    const std::uint64_t probe_seed = derive_seed(s.seed, kProbeStream);
    double sum = 0.0, sum_sq = 0.0, hw = 0.0;
    for (int j = 0; j < probes; ++j) {
        DecaySettings ds = s;
        ds.seed = derive_seed(s.seed, static_cast<std::uint64_t>(j));
        const DecaySeries series = decay_series(f, mu, probe(mu, probe_seed, static_cast<std::uint64_t>(j)), ds);
        sum += series.terminal();
        sum_sq += series.terminal() * series.terminal();
        hw += series.terminal_ci().half_width();
    }
    const double m = probes;
    r.probe_mean = sum / m;
    const double var = std::max(0.0, (sum_sq - m * r.probe_mean * r.probe_mean) / (m - 1.0));
    const double half = std::max(kZ95 * std::sqrt(var / m), hw / m / std::sqrt(m));
    r.probe_mean_ci = Interval{r.probe_mean - half, r.probe_mean + half};
    r.agree = r.probe_mean_ci.overlaps(r.diagonal.terminal_ci());
    return r;
}

GeneratorReport generator_check(const SystemSpec& f, const MeasureSpec& mu, const std::vector<Ball>& cover,
                                const GeneratorSettings& s) {
    if (cover.empty()) throw CoverError("empty cover");
    if (s.n_max < 0) throw DomainError("n_max must be nonnegative");
    if (s.mc_samples < 100) throw DomainError("generator_check needs at least 100 samples per sequence");
    require_two_sided(f, s.sided);

    GeneratorReport r;
    r.cover = cover;
    r.lebesgue_number = lebesgue_number(cover, f.space);
    const bool two = s.sided == Sided::two_sided;
    const bool localized = use_localized(mu, s.sampling);
    const int n = s.n_max;

    // itinerary[i + n] for i in [-n, n] when two-sided, itinerary[i] for i in [0, n] otherwise
    auto deepest = [&](const Point& p) {
        std::size_t best = 0;
        double slack = -std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < cover.size(); ++b) {
            const double sl = cover[b].radius - metric(cover[b].center, p);
            if (sl > slack) {
                slack = sl;
                best = b;
            }
        }
        return best;
    };
    auto estimate = [&](const std::vector<std::size_t>& itin, std::uint64_t seed) {
        const std::size_t zero = two ? static_cast<std::size_t>(n) : 0;
        const Ball& first = cover[itin[zero]];
        const Ball start(first.center, first.radius, true);
        const double mass = localized ? mu.ball_mass(start) : 1.0;
        if (mass <= 0.0) return std::pair{0.0, Interval{0.0, 0.0}};
        const std::uint64_t hits = count_hits(s.mc_samples, s.workers, [&](std::uint64_t i) {
            CounterRng rng(seed, kSampleStream, i);
            const Point y0 = localized ? mu.draw_in_ball(start, rng) : mu.draw(rng);
            Point y = y0;
            for (int k = 0; k <= n; ++k) {
                if (k > 0) y = f.forward(y);
                if (!(metric(cover[itin[zero + k]].center, y) <= cover[itin[zero + k]].radius)) return false;
            }
            if (two) {
                y = y0;
                for (int k = 1; k <= n; ++k) {
                    y = f.inverse(y);
                    if (!(metric(cover[itin[zero - k]].center, y) <= cover[itin[zero - k]].radius)) return false;
                }
            }
            return true;
        });
        const Interval w = wilson(hits, s.mc_samples);
        return std::pair{mass * static_cast<double>(hits) / static_cast<double>(s.mc_samples),
                         Interval{mass * w.lo, mass * w.hi}};
    };

    const std::size_t len = two ? static_cast<std::size_t>(2 * n + 1) : static_cast<std::size_t>(n + 1);
    double worst_upper = -1.0;
    auto consider = [&](const std::vector<std::size_t>& itin, std::uint64_t seed, const char* kind) {
        const auto [point, ci] = estimate(itin, seed);
        ++r.sequences_tested;
        if (ci.hi > worst_upper) {
            worst_upper = ci.hi;
            r.max_ci = ci;
            r.worst_kind = kind;
        }
        r.max_intersection_estimate = std::max(r.max_intersection_estimate, point);
    };

    for (int q = 0; q < s.sequence_samples; ++q) {
        const auto uq = static_cast<std::uint64_t>(q);
        CounterRng rng(s.seed, kItinerary, uq);
        const Point x = mu.draw(rng);
        std::vector<std::size_t> itin(len);
        const std::size_t zero = two ? static_cast<std::size_t>(n) : 0;
        Point p = x;
        for (int k = 0; k <= n; ++k) {
            if (k > 0) p = f.forward(p);
            itin[zero + k] = deepest(p);
        }
        if (two) {
            p = x;
            for (int k = 1; k <= n; ++k) {
                p = f.inverse(p);
                itin[zero - k] = deepest(p);
            }
        }
        consider(itin, derive_seed(s.seed, kItinerary + uq), "adversarial");
    }
    for (int q = 0; q < s.sequence_samples; ++q) {
        const auto uq = static_cast<std::uint64_t>(q);
        CounterRng rng(s.seed, kRandomItinerary, uq);
        std::vector<std::size_t> itin(len);
        for (auto& a : itin) a = static_cast<std::size_t>(rng() % cover.size());
        consider(itin, derive_seed(s.seed, kRandomItinerary + uq), "random");
    }
    r.is_generator_evidence = worst_upper <= s.threshold;
    return r;
}

FractionEstimate converging_semiorbit_fraction(const SystemSpec& f, const MeasureSpec& mu, const SemiOrbitSettings& s) {
    if (!f.invertible()) throw CapabilityError(f.name + " is not invertible; alpha-limits need f^-1");
    if (s.window < 2) throw DomainError("window must be at least 2");
    if (s.n_max < s.window) throw DomainError("n_max must be at least the window");
    if (!(s.tol > 0.0)) throw DomainError("tol must be positive");
    if (s.samples == 0) throw DomainError("sample count must be positive");

    auto cauchy = [&](Point z, const PointMap& step) {
        std::vector<Point> tail;
        tail.reserve(static_cast<std::size_t>(s.window) + 1);
        for (int k = 1; k <= s.n_max; ++k) {
            z = step(z);
            if (k >= s.n_max - s.window) tail.push_back(z);
        }
        for (std::size_t a = 0; a < tail.size(); ++a)
            for (std::size_t b = a + 1; b < tail.size(); ++b)
                if (!(metric(tail[a], tail[b]) <= s.tol)) return false;
        return true;
    };
    const std::uint64_t hits = count_hits(s.samples, s.workers, [&](std::uint64_t i) {
        CounterRng rng(s.seed, kOrbitStream, i);
        const Point z = mu.draw(rng);
        return cauchy(z, f.forward) && cauchy(z, f.inverse);
    });
    return fraction(hits, s.samples);
}

FractionEstimate periodic_fraction(const SystemSpec& f, const MeasureSpec& mu, int max_period, double eps,
                                   std::uint64_t samples, std::uint64_t seed, int workers) {
    if (max_period < 1) throw DomainError("max_period must be at least 1");
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    if (samples == 0) throw DomainError("sample count must be positive");
    const std::uint64_t hits = count_hits(samples, workers, [&](std::uint64_t i) {
        CounterRng rng(seed, kOrbitStream, i);
        const Point z = mu.draw(rng);
        Point y = z;
        for (int p = 1; p <= max_period; ++p) {
            y = f.forward(y);
            if (metric(y, z) <= eps) return true;
        }
        return false;
    });
    return fraction(hits, samples);
}

}  // namespace mexp
