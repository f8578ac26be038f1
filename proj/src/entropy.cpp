#include "mexp/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mexp/errors.hpp"
#include "mexp/rng.hpp"

namespace mexp {

namespace {

constexpr std::uint64_t kProbeStream = hash_label("probes");
constexpr std::uint64_t kVolumeStream = hash_label("volume");

std::vector<double> sorted_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw DomainError("empty delta grid");
    std::vector<double> g = grid;
    for (double d : g)
        if (!(d > 0.0)) throw DomainError("delta grid entries must be positive");
    std::sort(g.begin(), g.end(), std::greater<>());
    return g;
}

std::vector<Point> entropy_probes(const SystemSpec& f, const MeasureSpec& mu, const EntropySettings& s) {
    std::vector<Point> probes;
    if (s.grid_probes) {
        auto grid = probe_grid(f.space, static_cast<std::size_t>(s.x_probes)).first;
        probes.assign(grid.begin(), grid.end());
        return probes;
    }
    const std::uint64_t probe_seed = derive_seed(s.seed, kProbeStream);
    for (int j = 0; j < s.x_probes; ++j) {
        CounterRng rng(probe_seed, kProbeStream, static_cast<std::uint64_t>(j));
        probes.push_back(mu.draw(rng));
    }
    return probes;
}

std::vector<SlopeFit> fits_at(const SystemSpec& f, const MeasureSpec& mu, const Point& x, const std::vector<double>& grid,
                              const EntropySettings& s, std::uint64_t seed) {
    std::vector<SlopeFit> fits;
    for (double d : grid) {
        DecaySettings ds{Sided::one_sided, d, s.n_max, s.samples, seed, s.workers, s.sampling};
        fits.push_back(fit_decay(decay_series(f, mu, x, ds), s.min_count));
    }
    return fits;
}

}  // namespace

std::string to_string(CheckOutcome o) {
    switch (o) {
        case CheckOutcome::pass: return "pass";
        case CheckOutcome::fail: return "fail";
        case CheckOutcome::vacuous: return "vacuous";
        case CheckOutcome::inconclusive: return "inconclusive";
    }
    return "?";
}

SlopeFit fit_decay(const DecaySeries& series, std::uint64_t min_count) {
    const std::size_t n_max = series.survivors.size();
    if (n_max < 2) throw DomainError("a decay slope needs n_max >= 2");
    std::size_t valid = 0;
    while (valid < n_max && series.survivors[valid] >= min_count) ++valid;
    if (valid < 2)
        throw InsufficientSamplesError("fewer than two resolvable cells at delta=" + std::to_string(series.delta) +
                                       "; raise the sample budget or delta");

    const std::size_t first = std::min(valid / 3, valid - 2);
    const double total = static_cast<double>(series.sample_count);
    const double log_q0 = std::log(static_cast<double>(series.survivors[first]) / total);
    std::vector<double> xs, ys, ws;
    for (std::size_t i = first; i < valid; ++i) {
        const double c = static_cast<double>(series.survivors[i]);
        const double q = c / total;
        xs.push_back(static_cast<double>(series.n_values[i]));
        ys.push_back(log_q0 - std::log(q));
        ws.push_back(c / std::max(1.0 - q, 1e-3));
    }
    const LineFit lf = weighted_line_fit(xs, ys, ws);
    SlopeFit fit;
    fit.slope = lf.slope;
    fit.se = lf.slope_se;
    fit.n_first = series.n_values[first];
    fit.n_last = series.n_values[valid - 1];
    fit.points = static_cast<int>(lf.points);
    fit.residual_rms = lf.residual_rms;
    fit.censored = valid < n_max;
    return fit;
}

LocalEntropy local_entropy(const SystemSpec& f, const MeasureSpec& mu, const Point& x, const EntropySettings& s) {
    LocalEntropy out;
    out.x = x;
    out.delta_grid = sorted_grid(s.delta_grid);
    out.fits = fits_at(f, mu, x, out.delta_grid, s, s.seed);
    return out;
}

EntropyEstimate bk_entropy(const SystemSpec& f, const MeasureSpec& mu, const EntropySettings& s) {
    if (s.x_probes < 20) throw DomainError("bk_entropy needs at least 20 probes");
    EntropyEstimate e;
    e.delta_grid = sorted_grid(s.delta_grid);
    e.probes = entropy_probes(f, mu, s);
    for (std::size_t j = 0; j < e.probes.size(); ++j)
        e.per_x_rates.push_back(fits_at(f, mu, e.probes[j], e.delta_grid, s, derive_seed(s.seed, j)));

    const std::size_t g = e.delta_grid.size();
    for (std::size_t d = 0; d < g; ++d) {
        double best = std::numeric_limits<double>::infinity(), se = 0.0;
        for (const auto& rates : e.per_x_rates) {
            if (rates[d].slope < best) {
                best = rates[d].slope;
                se = rates[d].se;
            }
        }
        e.e_of_delta.push_back(best);
        e.se_of_delta.push_back(se);
        e.ci.push_back(Interval{best - kZ95 * se, best + kZ95 * se});
    }

    e.plateau_index = g - 1;
    for (std::size_t i = g - 1; i > 0; --i) {
        if (e.ci[i].overlaps(e.ci[i - 1])) {
            e.plateau_index = i;
            e.converged = true;
            break;
        }
    }
    e.extrapolated_e = std::max(0.0, e.e_of_delta[e.plateau_index]);
    e.extrapolated_se = e.se_of_delta[e.plateau_index];
    return e;
}

PowerLawReport power_law_check(const SystemSpec& f, const MeasureSpec& mu, int k, const EntropySettings& s) {
    if (k < 2 || k > 3) throw DomainError("power_law_check supports k in {2,3}");
    PowerLawReport r;
    r.k = k;
    r.base = bk_entropy(f, mu, s);
    r.powered = bk_entropy(power(f, k), mu, s);
    r.difference = r.powered.extrapolated_e - k * r.base.extrapolated_e;
    r.tolerance = 2.0 * (r.powered.extrapolated_se + r.base.extrapolated_se) + 0.05;
    if (!r.base.converged || !r.powered.converged)
        r.outcome = CheckOutcome::inconclusive;
    else
        r.outcome = std::fabs(r.difference) <= r.tolerance ? CheckOutcome::pass : CheckOutcome::fail;
    return r;
}

EntropyImpliesReport entropy_implies_expansive_check(const SystemSpec& f, const MeasureSpec& mu,
                                                     const EntropySettings& entropy, const VerdictSettings& verdict) {
    EntropyImpliesReport r;
    r.entropy = bk_entropy(f, mu, entropy);
    bool any = false, broken = false;
    for (std::size_t d = 0; d < r.entropy.delta_grid.size(); ++d) {
        EntropyVerdictPair p;
        p.delta = r.entropy.delta_grid[d];
        p.e_ci = r.entropy.ci[d];
        if (p.e_ci.lo > 0.0) {
            VerdictSettings vs = verdict;
            vs.delta = p.delta;
            vs.sided = Sided::one_sided;
            p.verdict = expansiveness_verdict(f, mu, vs).verdict;
            any = true;
            broken = broken || *p.verdict == Verdict::evidence_not_expansive;
        }
        r.pairs.push_back(p);
    }
    r.outcome = !any ? CheckOutcome::vacuous : broken ? CheckOutcome::fail : CheckOutcome::pass;
    return r;
}

VolumeExpansion volume_expanding_check(const SystemSpec& f, int horizon, int probes, std::uint64_t seed) {
    if (!f.jacobian) throw CapabilityError(f.name + " carries no Jacobian");
    if (horizon < 1 || probes < 1) throw DomainError("horizon and probes must be positive");
    VolumeExpansion v;
    v.horizon = horizon;
    v.probes = probes;
    v.lambda = std::numeric_limits<double>::infinity();
    const MeasureSpec leb = make_lebesgue(f.space);
    for (int j = 0; j < probes; ++j) {
        CounterRng rng(seed, kVolumeStream, static_cast<std::uint64_t>(j));
        Point x = leb.draw(rng);
        double log_det = 0.0;
        for (int n = 1; n <= horizon; ++n) {
            log_det += std::log(std::fabs(f.jacobian(x).determinant()));
            x = f.forward(x);
            v.lambda = std::min(v.lambda, std::exp(log_det / n));
        }
    }
    v.detected = v.lambda > 1.0;
    v.k = v.detected ? 1.0 : 0.0;
    return v;
}

}  // namespace mexp
