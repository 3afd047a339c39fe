#pragma once

#include <cstddef>
#include <string_view>

namespace pointwave::simd {

/// Batched inner-loop kernels. Scalar reference implementations always exist;
/// vector variants (AVX2 on x86-64, NEON on aarch64) are selected at runtime
/// and are equivalence-tested against the scalar ones.
struct KernelTable {
    const char* name;

    /// out[i] = bump profile value at point i for a bump at (cx,cy,cz) with
    /// 1/R^2 = inv_r2.
    void (*bump_values)(std::size_t n, const double* xs, const double* ys,
                        const double* zs, double cx, double cy, double cz,
                        double inv_r2, double* out);

    /// Spherical means of one bump over spheres of radius t centered at the
    /// sample points; rho[i] is the distance from sample i to the bump center.
    /// See simd::core::sphere_band_mean for the two outputs.
    void (*sphere_band_means)(std::size_t n, const double* rho, double t,
                              double radius, const double* gl_nodes,
                              const double* gl_weights, int order,
                              double* out_val, double* out_grad);

    /// Maximum squared pairwise distance over a point set; 0 for n < 2.
    double (*max_pairwise_dist2)(std::size_t n, const double* xs,
                                 const double* ys, const double* zs);
};

const KernelTable& scalar_kernels();

/// Kernel table picked from CPU features, overridable with the
/// POINTWAVE_SIMD environment variable (scalar|avx2|neon|auto).
const KernelTable& active_kernels();

/// Lookup by name; nullptr if that variant is not compiled in or the CPU
/// cannot run it. Used by the equivalence tests.
const KernelTable* kernels_by_name(std::string_view name);

} // namespace pointwave::simd
