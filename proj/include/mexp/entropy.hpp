#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mexp/expansiveness.hpp"
#include "mexp/measures.hpp"
#include "mexp/stats.hpp"
#include "mexp/systems.hpp"

namespace mexp {

struct EntropySettings {
    std::vector<double> delta_grid{0.02, 0.01, 0.005};
    int n_max = 14;
    int x_probes = 30;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 7;
    int workers = 1;
    /// Cells with fewer survivors are censored.
    std::uint64_t min_count = 10;
    Sampling sampling = Sampling::automatic;
    /// Probes on a uniform grid of the space instead of mu-samples.
    bool grid_probes = false;
};

/// Slope of -log p̂_n against n over the tail window of resolvable cells.
struct SlopeFit {
    double slope = 0.0;
    double se = 0.0;
    int n_first = 0;
    int n_last = 0;
    int points = 0;
    double residual_rms = 0.0;
    /// Some later cell fell below min_count: the decay continues past what
    /// the budget resolves, so the slope is only a lower bound there.
    bool censored = false;
};

/// Fit one decay series. Throws InsufficientSamplesError when the first cell is
/// already unresolvable.
SlopeFit fit_decay(const DecaySeries& series, std::uint64_t min_count = 10);

struct LocalEntropy {
    Point x;
    std::vector<double> delta_grid;
    std::vector<SlopeFit> fits;
};

LocalEntropy local_entropy(const SystemSpec& f, const MeasureSpec& mu, const Point& x, const EntropySettings& settings);

struct EntropyEstimate {
    std::vector<double> delta_grid;  // decreasing
    std::vector<double> e_of_delta;  // min over probes
    std::vector<double> se_of_delta;
    std::vector<Interval> ci;
    std::vector<Point> probes;
    std::vector<std::vector<SlopeFit>> per_x_rates;  // [probe][delta]
    double extrapolated_e = 0.0;
    double extrapolated_se = 0.0;
    bool converged = false;
    std::size_t plateau_index = 0;  // index into delta_grid of the reported value
};

/// Metric BK-entropy: e(δ) = min over probes of the one-sided decay slope,
/// extrapolated to δ -> 0 by CI-overlap plateau detection.
EntropyEstimate bk_entropy(const SystemSpec& f, const MeasureSpec& mu, const EntropySettings& settings);

enum class CheckOutcome { pass, fail, vacuous, inconclusive };

std::string to_string(CheckOutcome o);

struct PowerLawReport {
    int k = 2;
    EntropyEstimate base;
    EntropyEstimate powered;
    double difference = 0.0;  // e(f^k) - k e(f)
    double tolerance = 0.0;
    CheckOutcome outcome = CheckOutcome::inconclusive;
};

/// |e(f^k) - k e(f)| <= 2 (SE_k + SE_1) + 0.05 with identical seeds and budgets.
PowerLawReport power_law_check(const SystemSpec& f, const MeasureSpec& mu, int k, const EntropySettings& settings);

struct EntropyVerdictPair {
    double delta = 0.0;
    Interval e_ci;
    std::optional<Verdict> verdict;  // evaluated only when e_ci.lo > 0
};

struct EntropyImpliesReport {
    EntropyEstimate entropy;
    std::vector<EntropyVerdictPair> pairs;
    CheckOutcome outcome = CheckOutcome::vacuous;
};

/// Wherever the entropy lower CI is positive, the one-sided verdict must not be
/// evidence_not_expansive.
EntropyImpliesReport entropy_implies_expansive_check(const SystemSpec& f, const MeasureSpec& mu,
                                                     const EntropySettings& entropy, const VerdictSettings& verdict);

struct VolumeExpansion {
    bool detected = false;
    double lambda = 0.0;  // min over probes and 1 <= n <= horizon of |det Df^n(x)|^(1/n)
    double k = 0.0;       // |det Df^n| >= k lambda^n on the probes
    int horizon = 0;
    int probes = 0;
};

/// Throws CapabilityError when f carries no Jacobian.
VolumeExpansion volume_expanding_check(const SystemSpec& f, int horizon, int probes, std::uint64_t seed = 7);

}  // namespace mexp
