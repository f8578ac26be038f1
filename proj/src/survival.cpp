#include "mexp/survival.hpp"

#include <algorithm>

#include "mexp/errors.hpp"
#include "mexp/kernels.hpp"
#include "mexp/parallel.hpp"

namespace mexp {

namespace {

constexpr std::uint64_t kChunk = 4096;

int generic_pass(const SystemSpec& f, Point x, Point y, bool backward, double delta, int n_max) {
    int count = 0;
    for (int i = 0; i < n_max; ++i) {
        if (i > 0 || backward) {
            if (backward) {
                x = f.inverse(x);
                y = f.inverse(y);
            } else {
                x = f.forward(x);
                y = f.forward(y);
            }
        }
        if (!(metric(x, y) <= delta)) break;
        ++count;
    }
    return count;
}

struct ChunkBuffers {
    std::vector<double> x0, x1, y0, y1;
    std::vector<double> ox0, ox1, oy0, oy1;
    std::vector<std::int32_t> fwd, bwd;
    std::vector<std::size_t> live;

    void resize(std::size_t n, bool two_d) {
        for (auto* v : {&x0, &y0, &ox0, &oy0}) v->resize(n);
        for (auto* v : {&x1, &y1, &ox1, &oy1}) v->resize(two_d ? n : 0);
        fwd.resize(n);
        bwd.resize(n);
    }
};

void kernel_chunk(const kernels::Spec& spec, const SurvivalSettings& s, const std::vector<std::pair<Point, Point>>& pairs,
                  ChunkBuffers& b, std::vector<std::uint64_t>& hist) {
    const std::size_t n = pairs.size();
    const bool two_d = kernels::dimension(spec.kind) == 2;
    b.resize(n, two_d);
    for (std::size_t j = 0; j < n; ++j) {
        b.ox0[j] = pairs[j].first.x[0];
        b.oy0[j] = pairs[j].second.x[0];
        if (two_d) {
            b.ox1[j] = pairs[j].first.x[1];
            b.oy1[j] = pairs[j].second.x[1];
        }
    }
    b.x0 = b.ox0;
    b.y0 = b.oy0;
    b.x1 = b.ox1;
    b.y1 = b.oy1;
    kernels::survive(spec, kernels::Pass{false, false, s.delta, s.n_max}, kernels::Block{b.x0, b.x1},
                     kernels::Block{b.y0, b.y1}, b.fwd);

    if (s.sided == Sided::two_sided) {
        b.live.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (b.fwd[j] > 0) b.live.push_back(j);
        const std::size_t m = b.live.size();
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t j = b.live[k];
            b.x0[k] = b.ox0[j];
            b.y0[k] = b.oy0[j];
            if (two_d) {
                b.x1[k] = b.ox1[j];
                b.y1[k] = b.oy1[j];
            }
        }
        auto head = [m](std::vector<double>& v) { return std::span<double>(v.data(), v.empty() ? 0 : m); };
        kernels::survive(spec, kernels::Pass{true, true, s.delta, s.n_max}, kernels::Block{head(b.x0), head(b.x1)},
                         kernels::Block{head(b.y0), head(b.y1)}, std::span<std::int32_t>(b.bwd.data(), m));
        for (std::size_t k = 0; k < m; ++k) b.fwd[b.live[k]] = std::min(b.fwd[b.live[k]], b.bwd[k]);
        for (std::size_t j = 0; j < n; ++j) ++hist[static_cast<std::size_t>(b.fwd[j])];
        return;
    }
    for (std::size_t j = 0; j < n; ++j) ++hist[static_cast<std::size_t>(b.fwd[j])];
}

}  // namespace

int pair_survival(const SystemSpec& f, const Point& x, const Point& y, Sided sided, double delta, int n_max) {
    if (sided == Sided::two_sided && !f.invertible())
        throw CapabilityError(f.name + " is not invertible; two-sided dynamical balls need f^-1");
    const int fwd = generic_pass(f, x, y, false, delta, n_max);
    if (sided == Sided::one_sided || fwd == 0) return fwd;
    return std::min(fwd, generic_pass(f, x, y, true, delta, n_max));
}

std::vector<std::uint64_t> survival_histogram(const SystemSpec& f, std::uint64_t count, const PairAt& pair_at,
                                              const SurvivalSettings& s) {
    if (s.n_max < 1) throw DomainError("n_max must be at least 1");
    if (!(s.delta > 0.0)) throw DomainError("delta must be positive");
    if (s.sided == Sided::two_sided && !f.invertible())
        throw CapabilityError(f.name + " is not invertible; two-sided dynamical balls need f^-1");

    const std::size_t bins = static_cast<std::size_t>(s.n_max) + 1;
    const std::uint64_t chunks = (count + kChunk - 1) / kChunk;
    std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(bins, 0));
    const bool kernel = s.use_kernel && f.kernel.has_value();

    parallel_for(chunks, s.workers, [&](std::size_t c) {
        const std::uint64_t begin = c * kChunk, end = std::min(count, begin + kChunk);
        std::vector<std::pair<Point, Point>> pairs;
        pairs.reserve(end - begin);
        for (std::uint64_t i = begin; i < end; ++i) pairs.push_back(pair_at(i));
        auto& hist = partial[c];
        if (kernel) {
            ChunkBuffers buffers;
            kernel_chunk(*f.kernel, s, pairs, buffers, hist);
        } else {
            for (const auto& [x, y] : pairs) ++hist[static_cast<std::size_t>(pair_survival(f, x, y, s.sided, s.delta, s.n_max))];
        }
    });

    std::vector<std::uint64_t> hist(bins, 0);
    for (const auto& p : partial)
        for (std::size_t i = 0; i < bins; ++i) hist[i] += p[i];
    return hist;
}

std::vector<std::uint64_t> survivors_from_histogram(const std::vector<std::uint64_t>& hist) {
    const std::size_t n_max = hist.size() - 1;
    std::vector<std::uint64_t> out(n_max, 0);
    std::uint64_t acc = 0;
    for (std::size_t n = n_max; n >= 1; --n) {
        acc += hist[n];
        out[n - 1] = acc;
    }
    return out;
}

}  // namespace mexp
