#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "mexp/geometry.hpp"
#include "mexp/systems.hpp"
#include "mexp/verdict.hpp"

namespace mexp {

struct SurvivalSettings {
    Sided sided = Sided::one_sided;
    double delta = 0.0;
    int n_max = 1;
    int workers = 1;
    /// Use the closed-form kernel when the system has one.
    bool use_kernel = true;
};

/// Pair source: the (center, sample) pair for a global index.
using PairAt = std::function<std::pair<Point, Point>(std::uint64_t)>;

/// Survival of a pair: the largest n <= n_max such that d(f^i x, f^i y) <= delta
/// for every i in the window, where the window is 0 <= i < n (one-sided) or
/// -n <= i < n (two-sided). Returns hist[s] = number of pairs with survival s.
/// Integer counts over fixed-size chunks make the result independent of
/// `workers`.
std::vector<std::uint64_t> survival_histogram(const SystemSpec& f, std::uint64_t count, const PairAt& pair_at,
                                              const SurvivalSettings& settings);

/// Survival of a single pair through the generic (std::function) path.
int pair_survival(const SystemSpec& f, const Point& x, const Point& y, Sided sided, double delta, int n_max);

/// survivors[n-1] = number of pairs alive through window n, n = 1..n_max.
std::vector<std::uint64_t> survivors_from_histogram(const std::vector<std::uint64_t>& hist);

}  // namespace mexp
