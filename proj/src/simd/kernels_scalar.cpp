#include "pointwave/simd/kernels.hpp"
#include "pointwave/simd/kernel_core.hpp"

namespace pointwave::simd {
namespace {

void bump_values_scalar(std::size_t n, const double* xs, const double* ys,
                        const double* zs, double cx, double cy, double cz,
                        double inv_r2, double* out) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = core::bump_value(xs[i], ys[i], zs[i], cx, cy, cz, inv_r2);
}

void sphere_band_means_scalar(std::size_t n, const double* rho, double t,
                              double radius, const double* gl_nodes,
                              const double* gl_weights, int order,
                              double* out_val, double* out_grad) {
    for (std::size_t i = 0; i < n; ++i)
        core::sphere_band_mean(rho[i], t, radius, gl_nodes, gl_weights, order,
                               out_val[i], out_grad[i]);
}

double max_pairwise_dist2_scalar(std::size_t n, const double* xs,
                                 const double* ys, const double* zs) {
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double xi = xs[i], yi = ys[i], zi = zs[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = xs[j] - xi, dy = ys[j] - yi, dz = zs[j] - zi;
            const double d2 = dx * dx + dy * dy + dz * dz;
            if (d2 > best) best = d2;
        }
    }
    return best;
}

} // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{"scalar", bump_values_scalar,
                                   sphere_band_means_scalar,
                                   max_pairwise_dist2_scalar};
    return table;
}

} // namespace pointwave::simd
