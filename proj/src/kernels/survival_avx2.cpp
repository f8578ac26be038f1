// Compiled with -mavx2. Mirrors survival_scalar.cpp operation for operation.

#include "mexp/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace mexp::kernels {

namespace {

constexpr std::size_t kLanes = 4;

inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

inline __m256d vwrap(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d r = _mm256_sub_pd(x, _mm256_floor_pd(x));
    __m256d ge = _mm256_cmp_pd(r, one, _CMP_GE_OQ);
    return _mm256_blendv_pd(r, _mm256_sub_pd(r, one), ge);
}

inline __m256d vcircle_dist(__m256d a, __m256d b) {
    __m256d d = vabs(_mm256_sub_pd(a, b));
    __m256d e = _mm256_sub_pd(_mm256_set1_pd(1.0), d);
    return _mm256_min_pd(e, d);  // (e < d) ? e : d
}

template <Kind K>
inline void vstep(__m256d& u, __m256d& v, __m256d alpha, bool inverse) {
    const __m256d one = _mm256_set1_pd(1.0);
    if constexpr (K == Kind::rotation) {
        if (!inverse) {
            u = _mm256_add_pd(u, alpha);
            __m256d ge = _mm256_cmp_pd(u, one, _CMP_GE_OQ);
            u = _mm256_blendv_pd(u, _mm256_sub_pd(u, one), ge);
        } else {
            u = _mm256_sub_pd(u, alpha);
            __m256d lt = _mm256_cmp_pd(u, _mm256_setzero_pd(), _CMP_LT_OQ);
            u = _mm256_blendv_pd(u, _mm256_add_pd(u, one), lt);
        }
    } else if constexpr (K == Kind::doubling) {
        u = _mm256_add_pd(u, u);
        u = _mm256_sub_pd(u, _mm256_floor_pd(u));
    } else if constexpr (K == Kind::tent) {
        u = _mm256_sub_pd(one, vabs(_mm256_sub_pd(_mm256_add_pd(u, u), one)));
    } else if constexpr (K == Kind::square) {
        u = inverse ? _mm256_sqrt_pd(u) : _mm256_mul_pd(u, u);
    } else if constexpr (K == Kind::cat) {
        __m256d nu, nv;
        if (!inverse) {
            nu = _mm256_add_pd(_mm256_add_pd(u, u), v);
            nv = _mm256_add_pd(u, v);
        } else {
            nu = _mm256_sub_pd(u, v);
            nv = _mm256_sub_pd(_mm256_add_pd(v, v), u);
        }
        u = vwrap(nu);
        v = vwrap(nv);
    } else {
        (void)one, (void)alpha, (void)inverse;
    }
}

template <Kind K>
inline __m256d vdist(__m256d cu, __m256d cv, __m256d yu, __m256d yv) {
    if constexpr (K == Kind::cat) {
        return _mm256_add_pd(vcircle_dist(cu, yu), vcircle_dist(cv, yv));
    } else if constexpr (K == Kind::tent || K == Kind::square) {
        (void)cv, (void)yv;
        return vabs(_mm256_sub_pd(cu, yu));
    } else {
        (void)cv, (void)yv;
        return vcircle_dist(cu, yu);
    }
}

template <Kind K>
void run(const Spec& spec, const Pass& pass, Block centers, Block samples, std::span<std::int32_t> out) {
    const std::size_t n = samples.size();
    const std::size_t full = n - n % kLanes;
    constexpr bool two_d = K == Kind::cat;
    const __m256d alpha = _mm256_set1_pd(spec.alpha);
    const __m256d delta = _mm256_set1_pd(pass.delta);
    const __m256d one = _mm256_set1_pd(1.0);

    for (std::size_t j = 0; j < full; j += kLanes) {
        __m256d cu = _mm256_loadu_pd(&centers.c0[j]);
        __m256d yu = _mm256_loadu_pd(&samples.c0[j]);
        __m256d cv = two_d ? _mm256_loadu_pd(&centers.c1[j]) : _mm256_setzero_pd();
        __m256d yv = two_d ? _mm256_loadu_pd(&samples.c1[j]) : _mm256_setzero_pd();
        __m256d alive = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
        __m256d count = _mm256_setzero_pd();
        for (int i = 0; i < pass.max_steps; ++i) {
            if (i > 0 || pass.step_first) {
                for (int p = 0; p < spec.power; ++p) {
                    vstep<K>(cu, cv, alpha, pass.inverse);
                    vstep<K>(yu, yv, alpha, pass.inverse);
                }
            }
            __m256d ok = _mm256_cmp_pd(vdist<K>(cu, cv, yu, yv), delta, _CMP_LE_OQ);
            alive = _mm256_and_pd(alive, ok);
            count = _mm256_add_pd(count, _mm256_and_pd(alive, one));
            if (_mm256_movemask_pd(alive) == 0) break;
        }
        _mm_storeu_si128(reinterpret_cast<__m128i*>(&out[j]), _mm256_cvtpd_epi32(count));
        _mm256_storeu_pd(&centers.c0[j], cu);
        _mm256_storeu_pd(&samples.c0[j], yu);
        if constexpr (two_d) {
            _mm256_storeu_pd(&centers.c1[j], cv);
            _mm256_storeu_pd(&samples.c1[j], yv);
        }
    }

    if (full < n) {
        auto tail = [&](std::span<double> s) { return s.empty() ? s : s.subspan(full); };
        survive_scalar(spec, pass, Block{tail(centers.c0), tail(centers.c1)}, Block{tail(samples.c0), tail(samples.c1)},
                       out.subspan(full));
    }
}

}  // namespace

void survive_avx2(const Spec& spec, const Pass& pass, Block centers, Block samples, std::span<std::int32_t> out) {
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

#endif
