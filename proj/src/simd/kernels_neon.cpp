#if defined(__aarch64__)

#include "pointwave/simd/kernels.hpp"
#include "pointwave/simd/kernel_core.hpp"

#include <arm_neon.h>

namespace pointwave::simd {
namespace {

void bump_values_neon(std::size_t n, const double* xs, const double* ys,
                      const double* zs, double cx, double cy, double cz,
                      double inv_r2, double* out) {
    const float64x2_t vcx = vdupq_n_f64(cx);
    const float64x2_t vcy = vdupq_n_f64(cy);
    const float64x2_t vcz = vdupq_n_f64(cz);
    const float64x2_t vinv = vdupq_n_f64(inv_r2);
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), vcx);
        float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), vcy);
        float64x2_t dz = vsubq_f64(vld1q_f64(zs + i), vcz);
        float64x2_t d2 = vfmaq_f64(vfmaq_f64(vmulq_f64(dz, dz), dy, dy), dx, dx);
        float64x2_t base = vmaxq_f64(zero, vfmsq_f64(one, d2, vinv));
        float64x2_t b2 = vmulq_f64(base, base);
        vst1q_f64(out + i, vmulq_f64(b2, b2));
    }
    for (; i < n; ++i)
        out[i] = core::bump_value(xs[i], ys[i], zs[i], cx, cy, cz, inv_r2);
}

void sphere_band_means_neon(std::size_t n, const double* rho, double t,
                            double radius, const double* gl_nodes,
                            const double* gl_weights, int order,
                            double* out_val, double* out_grad) {
    const double r2 = radius * radius;
    const float64x2_t vr2 = vdupq_n_f64(r2);
    const float64x2_t vinv = vdupq_n_f64(1.0 / r2);
    const float64x2_t vt = vdupq_n_f64(t);
    const float64x2_t vt2 = vdupq_n_f64(t * t);
    const float64x2_t v2t = vdupq_n_f64(2.0 * t);
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t mone = vdupq_n_f64(-1.0);
    const float64x2_t half = vdupq_n_f64(0.5);
    const float64x2_t zero = vdupq_n_f64(0.0);
    const float64x2_t tiny = vdupq_n_f64(1e-300);
    const float64x2_t m8inv = vdupq_n_f64(-8.0 / r2);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t vrho = vld1q_f64(rho + i);
        const float64x2_t q = vfmaq_f64(vt2, vrho, vrho);
        const float64x2_t tr2 = vmaxq_f64(vmulq_f64(v2t, vrho), tiny);
        const float64x2_t mu0 = vdivq_f64(vsubq_f64(q, vr2), tr2);
        const float64x2_t lo = vmaxq_f64(mu0, mone);
        const float64x2_t halfw =
            vmaxq_f64(zero, vmulq_f64(half, vsubq_f64(one, lo)));
        const float64x2_t mid = vmulq_f64(half, vaddq_f64(one, lo));
        float64x2_t acc_p = zero, acc_g = zero;
        for (int k = 0; k < order; ++k) {
            const float64x2_t gx = vdupq_n_f64(gl_nodes[k]);
            const float64x2_t gw = vdupq_n_f64(gl_weights[k]);
            const float64x2_t mu = vfmaq_f64(mid, halfw, gx);
            const float64x2_t s2 = vfmsq_f64(q, tr2, mu);
            const float64x2_t base = vmaxq_f64(zero, vfmsq_f64(one, s2, vinv));
            const float64x2_t b2 = vmulq_f64(base, base);
            acc_p = vfmaq_f64(acc_p, gw, vmulq_f64(b2, b2));
            const float64x2_t tmr = vfmsq_f64(vt, vrho, mu);
            const float64x2_t qd = vmulq_f64(m8inv, vmulq_f64(base, b2));
            acc_g = vfmaq_f64(acc_g, gw, vmulq_f64(tmr, qd));
        }
        const float64x2_t scale = vmulq_f64(half, halfw);
        vst1q_f64(out_val + i, vmulq_f64(scale, acc_p));
        vst1q_f64(out_grad + i, vmulq_f64(scale, acc_g));
    }
    for (; i < n; ++i)
        core::sphere_band_mean(rho[i], t, radius, gl_nodes, gl_weights, order,
                               out_val[i], out_grad[i]);
}

double max_pairwise_dist2_neon(std::size_t n, const double* xs,
                               const double* ys, const double* zs) {
    float64x2_t best = vdupq_n_f64(0.0);
    double best_tail = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const float64x2_t xi = vdupq_n_f64(xs[i]);
        const float64x2_t yi = vdupq_n_f64(ys[i]);
        const float64x2_t zi = vdupq_n_f64(zs[i]);
        std::size_t j = i + 1;
        for (; j + 2 <= n; j += 2) {
            float64x2_t dx = vsubq_f64(vld1q_f64(xs + j), xi);
            float64x2_t dy = vsubq_f64(vld1q_f64(ys + j), yi);
            float64x2_t dz = vsubq_f64(vld1q_f64(zs + j), zi);
            float64x2_t d2 =
                vfmaq_f64(vfmaq_f64(vmulq_f64(dz, dz), dy, dy), dx, dx);
            best = vmaxq_f64(best, d2);
        }
        for (; j < n; ++j) {
            const double dx = xs[j] - xs[i], dy = ys[j] - ys[i],
                         dz = zs[j] - zs[i];
            const double d2 = dx * dx + dy * dy + dz * dz;
            if (d2 > best_tail) best_tail = d2;
        }
    }
    return std::max(vmaxvq_f64(best), best_tail);
}

} // namespace

const KernelTable* neon_kernels_if_supported() {
    static const KernelTable table{"neon", bump_values_neon,
                                   sphere_band_means_neon,
                                   max_pairwise_dist2_neon};
    return &table;
}

} // namespace pointwave::simd

#endif // aarch64
