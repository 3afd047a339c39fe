#if defined(__x86_64__) || defined(_M_X64)

#include "pointwave/simd/kernels.hpp"
#include "pointwave/simd/kernel_core.hpp"

#include <immintrin.h>

namespace pointwave::simd {
namespace {

inline double hmax_pd(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_max_pd(lo, hi);
    m = _mm_max_sd(m, _mm_unpackhi_pd(m, m));
    return _mm_cvtsd_f64(m);
}

void bump_values_avx2(std::size_t n, const double* xs, const double* ys,
                      const double* zs, double cx, double cy, double cz,
                      double inv_r2, double* out) {
    const __m256d vcx = _mm256_set1_pd(cx);
    const __m256d vcy = _mm256_set1_pd(cy);
    const __m256d vcz = _mm256_set1_pd(cz);
    const __m256d vinv = _mm256_set1_pd(inv_r2);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vcx);
        __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vcy);
        __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(zs + i), vcz);
        __m256d d2 = _mm256_fmadd_pd(dx, dx, _mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dz, dz)));
        __m256d base = _mm256_max_pd(zero, _mm256_fnmadd_pd(d2, vinv, one));
        __m256d b2 = _mm256_mul_pd(base, base);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(b2, b2));
    }
    for (; i < n; ++i)
        out[i] = core::bump_value(xs[i], ys[i], zs[i], cx, cy, cz, inv_r2);
}

void sphere_band_means_avx2(std::size_t n, const double* rho, double t,
                            double radius, const double* gl_nodes,
                            const double* gl_weights, int order,
                            double* out_val, double* out_grad) {
    const double r2 = radius * radius;
    const __m256d vr2 = _mm256_set1_pd(r2);
    const __m256d vinv = _mm256_set1_pd(1.0 / r2);
    const __m256d vt = _mm256_set1_pd(t);
    const __m256d vt2 = _mm256_set1_pd(t * t);
    const __m256d v2t = _mm256_set1_pd(2.0 * t);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d mone = _mm256_set1_pd(-1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d tiny = _mm256_set1_pd(1e-300);
    const __m256d m8inv = _mm256_set1_pd(-8.0 / r2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vrho = _mm256_loadu_pd(rho + i);
        const __m256d q = _mm256_fmadd_pd(vrho, vrho, vt2);
        const __m256d tr2 = _mm256_max_pd(_mm256_mul_pd(v2t, vrho), tiny);
        const __m256d mu0 = _mm256_div_pd(_mm256_sub_pd(q, vr2), tr2);
        const __m256d lo = _mm256_max_pd(mu0, mone);
        const __m256d halfw =
            _mm256_max_pd(zero, _mm256_mul_pd(half, _mm256_sub_pd(one, lo)));
        const __m256d mid = _mm256_mul_pd(half, _mm256_add_pd(one, lo));
        __m256d acc_p = zero, acc_g = zero;
        for (int k = 0; k < order; ++k) {
            const __m256d gx = _mm256_set1_pd(gl_nodes[k]);
            const __m256d gw = _mm256_set1_pd(gl_weights[k]);
            const __m256d mu = _mm256_fmadd_pd(halfw, gx, mid);
            const __m256d s2 = _mm256_fnmadd_pd(tr2, mu, q);
            const __m256d base =
                _mm256_max_pd(zero, _mm256_fnmadd_pd(s2, vinv, one));
            const __m256d b2 = _mm256_mul_pd(base, base);
            acc_p = _mm256_fmadd_pd(gw, _mm256_mul_pd(b2, b2), acc_p);
            const __m256d tmr = _mm256_fnmadd_pd(vrho, mu, vt);
            const __m256d qd = _mm256_mul_pd(m8inv, _mm256_mul_pd(base, b2));
            acc_g = _mm256_fmadd_pd(gw, _mm256_mul_pd(tmr, qd), acc_g);
        }
        const __m256d scale = _mm256_mul_pd(half, halfw);
        _mm256_storeu_pd(out_val + i, _mm256_mul_pd(scale, acc_p));
        _mm256_storeu_pd(out_grad + i, _mm256_mul_pd(scale, acc_g));
    }
    for (; i < n; ++i)
        core::sphere_band_mean(rho[i], t, radius, gl_nodes, gl_weights, order,
                               out_val[i], out_grad[i]);
}

double max_pairwise_dist2_avx2(std::size_t n, const double* xs,
                               const double* ys, const double* zs) {
    __m256d best = _mm256_setzero_pd();
    double best_tail = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const __m256d xi = _mm256_set1_pd(xs[i]);
        const __m256d yi = _mm256_set1_pd(ys[i]);
        const __m256d zi = _mm256_set1_pd(zs[i]);
        std::size_t j = i + 1;
        for (; j + 4 <= n; j += 4) {
            __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + j), xi);
            __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + j), yi);
            __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(zs + j), zi);
            __m256d d2 = _mm256_fmadd_pd(
                dx, dx, _mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dz, dz)));
            best = _mm256_max_pd(best, d2);
        }
        for (; j < n; ++j) {
            const double dx = xs[j] - xs[i], dy = ys[j] - ys[i],
                         dz = zs[j] - zs[i];
            const double d2 = dx * dx + dy * dy + dz * dz;
            if (d2 > best_tail) best_tail = d2;
        }
    }
    return std::max(hmax_pd(best), best_tail);
}

} // namespace

const KernelTable* avx2_kernels_if_supported() {
    if (!(__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")))
        return nullptr;
    static const KernelTable table{"avx2", bump_values_avx2,
                                   sphere_band_means_avx2,
                                   max_pairwise_dist2_avx2};
    return &table;
}

} // namespace pointwave::simd

#endif // x86-64
