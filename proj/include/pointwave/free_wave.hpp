#pragma once

#include "pointwave/bc_algebra.hpp"
#include "pointwave/geometry.hpp"

#include <span>
#include <vector>

namespace pointwave {

/// Compactly supported radial profile a * (1 - |x-c|^2/R^2)^4 on the ball
/// B(center, radius), identically zero outside. C^3 across the boundary
/// sphere, so spherical means of it are C^3 in time and radius.
struct BumpProfile {
    Vec3 center = Vec3::Zero();
    double radius = 1.0;
    Cplx amplitude = 1.0;

    double profile(double s) const;        // radial value at distance s
    double profile_deriv(double s) const;  // d/ds of the radial value
};

struct PointValue {
    Cplx value;
    Eigen::Vector3cd gradient;
};

/// Initial data for the wave problem: position bumps phi(0), velocity bumps
/// phi_dot(0), and the initial charges zeta(0).
struct InitialData {
    std::vector<BumpProfile> position_bumps;
    std::vector<BumpProfile> velocity_bumps;
    CVector charges0;   // may be size 0 meaning all-zero

    /// Diameter of the union of all bump balls (0 when there are none).
    double support_diameter() const;
    /// Distance from x to the union of bump balls (clamped at 0).
    double support_distance(const Vec3& x) const;
    bool empty() const { return position_bumps.empty() && velocity_bumps.empty(); }
};

/// Issues that make the data inadmissible for simulation: nonzero initial
/// charges, a bump ball containing an interaction point, or A*phi0(Y) != 0.
/// Empty result means admissible.
std::vector<std::string> admissibility_issues(const InteractionConfig& config,
                                              const InitialData& data);

/// Pointwise value and gradient of the initial field phi(0, x).
PointValue eval_initial(const InitialData& data, const Vec3& x);

/// Gauss-Legendre rule used for the polar direction of the spherical means.
/// The integrand restricted to the support band of a bump is a polynomial of
/// degree four in the polar cosine, so any order >= 4 integrates it exactly;
/// the order stays configurable for convergence checks.
class SphericalQuadrature {
  public:
    explicit SphericalQuadrature(int order = kDefaultOrder);
    int order() const { return order_; }
    const double* nodes() const { return nodes_.data(); }
    const double* weights() const { return weights_.data(); }
    static constexpr int kDefaultOrder = 24;

  private:
    int order_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Kirchhoff solution of the free wave equation at time t >= 0:
/// the spherical mean over |y - x| = t of
///   phi0(y) + grad phi0(y) . (y - x) + t * phi_dot0(y).
/// Exactly phi0(x) at t = 0 and exactly zero whenever the sphere misses the
/// support of the data.
Cplx kirchhoff_eval(const InitialData& data, double t, const Vec3& x,
                    const SphericalQuadrature& quad);

/// Batched variant over sample points given as coordinate arrays; used by the
/// snapshot evaluator through the SIMD kernels. Accumulates into out.
void kirchhoff_accumulate(const InitialData& data, double t,
                          std::span<const double> xs, std::span<const double> ys,
                          std::span<const double> zs, std::span<Cplx> out,
                          const SphericalQuadrature& quad);

enum class InitialKind { Position, Velocity };

/// Closed-form/quadrature reference for a single radial bump centered at the
/// origin, evaluated at distance r from the origin. Independent of the
/// Kirchhoff evaluation path; serves as its oracle.
///   Position data: [(r+t) p(r+t) + (r-t) p(|r-t|)] / (2r),
///   Velocity data: (1/2r) * integral of s q(s) over [|r-t|, r+t],
/// with the r -> 0 limits p(t) + t p'(t) and t q(t).
Cplx radial_oracle(const BumpProfile& profile, InitialKind kind, double t, double r);

/// Dense table of the free wave traced at the interaction points,
/// f_j(t_i) = phi_f(t_i, y_j) on the uniform grid t_i = i*h, with a cubic
/// interpolation accessor for off-node queries.
class ForcingTrace {
  public:
    /// Evaluates the Kirchhoff solution at every node and point.
    static ForcingTrace build(const InitialData& data, const InteractionConfig& config,
                              double horizon, double step, const SphericalQuadrature& quad);
    /// Wraps externally supplied samples (n_points columns per node).
    static ForcingTrace from_samples(double step, int n_points,
                                     std::vector<Cplx> samples);

    double step() const { return step_; }
    int node_count() const { return nodes_; }
    int point_count() const { return n_; }
    double horizon() const { return step_ * (nodes_ - 1); }

    Cplx at_node(int node, int j) const { return samples_[static_cast<std::size_t>(node) * n_ + j]; }
    /// Piecewise-cubic interpolation through the exact nodes.
    Cplx operator()(double t, int j) const;

  private:
    ForcingTrace() = default;
    double step_ = 0.0;
    int n_ = 0;
    int nodes_ = 0;
    std::vector<Cplx> samples_;
};

} // namespace pointwave
