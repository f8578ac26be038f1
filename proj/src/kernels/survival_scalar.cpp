#include <cmath>

#include "mexp/kernels.hpp"

namespace mexp::kernels {

namespace {

inline double wrap(double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? r - 1.0 : r;
}

inline double circle_dist(double a, double b) {
    double d = std::fabs(a - b);
    double e = 1.0 - d;
    return e < d ? e : d;
}

template <Kind K>
inline void step(double& u, double& v, double alpha, bool inverse) {
    if constexpr (K == Kind::rotation) {
        if (!inverse) {
            u = u + alpha;
            u = u >= 1.0 ? u - 1.0 : u;
        } else {
            u = u - alpha;
            u = u < 0.0 ? u + 1.0 : u;
        }
    } else if constexpr (K == Kind::doubling) {
        u = u + u;
        u = u - std::floor(u);
    } else if constexpr (K == Kind::tent) {
        u = 1.0 - std::fabs((u + u) - 1.0);
    } else if constexpr (K == Kind::square) {
        u = inverse ? std::sqrt(u) : u * u;
    } else if constexpr (K == Kind::cat) {
        double nu, nv;
        if (!inverse) {
            nu = (u + u) + v;
            nv = u + v;
        } else {
            nu = u - v;
            nv = (v + v) - u;
        }
        u = wrap(nu);
        v = wrap(nv);
    }
}

template <Kind K>
inline double dist(double cu, double cv, double yu, double yv) {
    if constexpr (K == Kind::cat) {
        return circle_dist(cu, yu) + circle_dist(cv, yv);
    } else if constexpr (K == Kind::tent || K == Kind::square) {
        (void)cv, (void)yv;
        return std::fabs(cu - yu);
    } else {
        (void)cv, (void)yv;
        return circle_dist(cu, yu);
    }
}

template <Kind K>
void run(const Spec& spec, const Pass& pass, Block centers, Block samples, std::span<std::int32_t> out) {
    const std::size_t n = samples.size();
    const bool two_d = K == Kind::cat;
    for (std::size_t j = 0; j < n; ++j) {
        double cu = centers.c0[j], cv = two_d ? centers.c1[j] : 0.0;
        double yu = samples.c0[j], yv = two_d ? samples.c1[j] : 0.0;
        std::int32_t count = 0;
        for (int i = 0; i < pass.max_steps; ++i) {
            if (i > 0 || pass.step_first) {
                for (int p = 0; p < spec.power; ++p) {
                    step<K>(cu, cv, spec.alpha, pass.inverse);
                    step<K>(yu, yv, spec.alpha, pass.inverse);
                }
            }
            if (!(dist<K>(cu, cv, yu, yv) <= pass.delta)) break;
            ++count;
        }
        out[j] = count;
        centers.c0[j] = cu;
        samples.c0[j] = yu;
        if (two_d) {
            centers.c1[j] = cv;
            samples.c1[j] = yv;
        }
    }
}

}  // namespace

void survive_scalar(const Spec& spec, const Pass& pass, Block centers, Block samples, std::span<std::int32_t> out) {
    switch (spec.kind) {
        case Kind::identity: return run<Kind::identity>(spec, pass, centers, samples, out);
        case Kind::rotation: return run<Kind::rotation>(spec, pass, centers, samples, out);
        case Kind::doubling: return run<Kind::doubling>(spec, pass, centers, samples, out);
        case Kind::tent: return run<Kind::tent>(spec, pass, centers, samples, out);
        case Kind::square: return run<Kind::square>(spec, pass, centers, samples, out);
        case Kind::cat: return run<Kind::cat>(spec, pass, centers, samples, out);
    }
}

}  // namespace mexp::kernels
