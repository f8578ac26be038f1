#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mexp/geometry.hpp"
#include "mexp/measures.hpp"
#include "mexp/stats.hpp"
#include "mexp/systems.hpp"
#include "mexp/verdict.hpp"

namespace mexp {

/// How dynamical-ball samples are drawn.
///   global:    y ~ mu, estimate = fraction of survivors.
///   localized: y ~ mu conditioned on B[x,delta], estimate = mu(B[x,delta]) * fraction.
///   automatic: localized when the measure has a ball oracle.
enum class Sampling { automatic, global, localized };

std::string to_string(Sampling s);

struct DynBallQuery {
    Point center;
    double delta = 0.0;
    int n = 1;
    Sided sided = Sided::one_sided;
};

/// y ∈ V_f[x,δ,n] (two-sided, -n <= i < n) or B_f[x,δ,n] (one-sided, 0 <= i < n).
bool dyn_ball_contains(const SystemSpec& f, const DynBallQuery& q, const Point& y);

struct DecaySettings {
    Sided sided = Sided::one_sided;
    double delta = 0.05;
    int n_max = 20;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 7;
    int workers = 1;
    Sampling sampling = Sampling::automatic;
};

struct DecaySeries {
    Point center;
    double delta = 0.0;
    Sided sided = Sided::one_sided;
    std::vector<int> n_values;            // 1..n_max
    std::vector<double> estimates;        // p̂_n
    std::vector<Interval> ci;             // 95% Wilson, scaled by ball_mass
    std::vector<std::uint64_t> survivors; // raw counts behind p̂_n
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;
    bool localized = false;
    double ball_mass = 1.0;  // mu(B[x,delta]) when localized, else 1

    double terminal() const { return estimates.back(); }
    const Interval& terminal_ci() const { return ci.back(); }
};

/// Estimates of mu(V_f[x,δ,n]) or mu(B_f[x,δ,n]) for n = 1..n_max from one batch,
/// so the series is exactly nonincreasing.
DecaySeries decay_series(const SystemSpec& f, const MeasureSpec& mu, const Point& x, const DecaySettings& settings);

struct VerdictSettings {
    double delta = 0.05;
    int n_max = 20;
    std::uint64_t samples = 100000;
    int x_probes = 20;
    double threshold = 0.01;
    std::uint64_t seed = 7;
    int workers = 1;
    /// Two-sided for invertible systems unless set.
    std::optional<Sided> sided;
    Sampling sampling = Sampling::automatic;
};

struct ExpansivenessVerdict {
    double delta = 0.0;
    Verdict verdict = Verdict::inconclusive;
    Sided sided = Sided::one_sided;
    int x_probe_count = 0;
    int n_max = 0;
    std::uint64_t samples = 0;
    double threshold = 0.0;
    double worst_upper_bound = 0.0;  // max over probes of the terminal upper CI
    double best_lower_bound = 0.0;   // max over probes of the terminal lower CI
    std::optional<Point> witness;
    std::vector<Point> probes;
    std::vector<double> terminal_estimates;
};

/// Probes x_j ~ mu; evidence_expansive iff every terminal upper CI <= threshold,
/// evidence_not_expansive iff some terminal lower CI >= threshold.
ExpansivenessVerdict expansiveness_verdict(const SystemSpec& f, const MeasureSpec& mu, const VerdictSettings& settings);

struct PowerConsistencyReport {
    int k = 2;
    std::vector<double> delta_grid;
    std::vector<Verdict> base;
    std::vector<Verdict> powered;
    bool contradiction = false;  // one side all-expansive, the other all-not-expansive
    bool consistent = false;     // every definite verdict is matched somewhere on the grid
};

PowerConsistencyReport power_consistency_check(const SystemSpec& f, const MeasureSpec& mu, int k,
                                               const std::vector<double>& delta_grid, const VerdictSettings& settings);

/// mu²{(x,y) : d(f^i x, f^i y) <= δ over the window}, (x,y) ~ mu × mu.
/// The returned series has no meaningful center.
DecaySeries product_diagonal_test(const SystemSpec& f, const MeasureSpec& mu, const DecaySettings& settings);

struct FubiniReport {
    DecaySeries diagonal;
    int probes = 0;
    double probe_mean = 0.0;
    Interval probe_mean_ci;
    bool agree = false;  // the two 95% intervals overlap
};

/// Product-diagonal terminal estimate against the mean of decay terminals over
/// `probes` centers x ~ mu.
FubiniReport fubini_cross_check(const SystemSpec& f, const MeasureSpec& mu, const DecaySettings& settings, int probes);

struct GeneratorSettings {
    Sided sided = Sided::one_sided;
    int n_max = 12;
    int sequence_samples = 40;  // per kind (adversarial and random)
    std::uint64_t mc_samples = 100000;
    double threshold = 0.01;
    std::uint64_t seed = 7;
    int workers = 1;
    Sampling sampling = Sampling::automatic;
};

struct GeneratorReport {
    std::vector<Ball> cover;
    double lebesgue_number = 0.0;
    int sequences_tested = 0;
    double max_intersection_estimate = 0.0;
    Interval max_ci;
    std::string worst_kind;  // "adversarial" or "random"
    bool is_generator_evidence = false;
};

/// Estimates mu(∩_i f^-i(Cl A_i)) for itineraries A_i over the window
/// (0 <= i <= n_max, or |i| <= n_max two-sided). Throws CoverError when the
/// balls do not cover the space.
GeneratorReport generator_check(const SystemSpec& f, const MeasureSpec& mu, const std::vector<Ball>& cover,
                                const GeneratorSettings& settings);

struct FractionEstimate {
    std::uint64_t hits = 0;
    std::uint64_t samples = 0;
    double fraction = 0.0;
    Interval ci;
};

struct SemiOrbitSettings {
    int n_max = 40;
    int window = 4;
    double tol = 1e-6;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 7;
    int workers = 1;
};

/// Fraction of z ~ mu whose last `window` forward and backward iterates up to
/// n_max have spread <= tol. Over-counts points with converging semi-orbits.
FractionEstimate converging_semiorbit_fraction(const SystemSpec& f, const MeasureSpec& mu, const SemiOrbitSettings& settings);

/// Fraction of z ~ mu with min_{1<=p<=P} d(f^p z, z) <= eps.
FractionEstimate periodic_fraction(const SystemSpec& f, const MeasureSpec& mu, int max_period, double eps,
                                   std::uint64_t samples, std::uint64_t seed, int workers = 1);

}  // namespace mexp
