#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

// Scalar per-element cores shared by the scalar kernels, the vector-kernel
// tail loops and the single-point evaluation API. Keeping them in one place
// guarantees every lane computes the same formula.

namespace pointwave::simd::core {

/// Polynomial bump profile (1 - |p-c|^2/R^2)^4, zero outside the ball.
inline double bump_value(double px, double py, double pz,
                         double cx, double cy, double cz, double inv_r2) {
    const double dx = px - cx, dy = py - cy, dz = pz - cz;
    const double u = (dx * dx + dy * dy + dz * dz) * inv_r2;
    const double base = std::max(0.0, 1.0 - u);
    const double b2 = base * base;
    return b2 * b2;
}

/// Mean over the sphere of radius t centered at distance rho from the bump
/// center, of the bump profile and of its radial-gradient pairing.
///
/// With mu the cosine of the polar angle measured from the direction toward
/// the bump center, the squared distance from a sphere point to the center is
/// s^2 = t^2 + rho^2 - 2 t rho mu, linear in mu, so the profile restricted to
/// the sphere is a degree-4 polynomial in mu supported on the band s <= R.
/// Gauss-Legendre nodes mapped onto that band therefore integrate it exactly
/// for any order >= 3; the azimuthal average is the integrand itself by
/// rotational symmetry about the center axis.
///
/// out_val  <- (1/2) * integral over the band of (1 - s^2/R^2)^4 dmu
/// out_grad <- (1/2) * integral of (t - rho*mu) * p'(s)/s dmu
///             with p'(s)/s = -(8/R^2) (1 - s^2/R^2)^3
inline void sphere_band_mean(double rho, double t, double radius,
                             const double* gl_nodes, const double* gl_weights,
                             int order, double& out_val, double& out_grad) {
    const double r2 = radius * radius;
    const double inv_r2 = 1.0 / r2;
    const double q = t * t + rho * rho;
    const double tr2 = std::max(2.0 * t * rho, 1e-300);
    const double mu0 = (q - r2) / tr2;
    const double lo = std::max(mu0, -1.0);
    const double halfw = std::max(0.0, 0.5 * (1.0 - lo));
    if (halfw == 0.0) {
        out_val = 0.0;
        out_grad = 0.0;
        return;
    }
    const double mid = 0.5 * (1.0 + lo);
    double acc_p = 0.0, acc_g = 0.0;
    for (int k = 0; k < order; ++k) {
        const double mu = mid + halfw * gl_nodes[k];
        const double s2 = q - tr2 * mu;
        const double base = std::max(0.0, 1.0 - s2 * inv_r2);
        const double b2 = base * base;
        const double w = gl_weights[k];
        acc_p += w * (b2 * b2);
        acc_g += w * ((t - rho * mu) * (-8.0 * inv_r2) * (base * b2));
    }
    out_val = 0.5 * halfw * acc_p;
    out_grad = 0.5 * halfw * acc_g;
}

} // namespace pointwave::simd::core
