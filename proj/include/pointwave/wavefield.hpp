#pragma once

#include "pointwave/charge_dynamics.hpp"
#include "pointwave/free_wave.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pointwave {

/// Sampling grid for field snapshots: a Cartesian box lattice enclosing the
/// initial support and the interaction points with a margin, augmented with
/// small radial shells around each interaction point so newborn spherical
/// waves register before they reach lattice spacing size. Samples closer to
/// an interaction point than the exclusion radius are tagged singular and
/// left out of support statistics: the 1/|x-y_j| factor dominates there.
struct GridSpec {
    double spacing = 0.25;
    double margin = -1.0;                      // < 0: use the time horizon
    bool has_explicit_box = false;
    Vec3 box_min = Vec3::Zero();
    Vec3 box_max = Vec3::Zero();
    std::vector<double> shell_radii = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    int shell_directions = 96;
    double exclusion_radius = 0.1;
};

struct FieldSnapshot {
    double time = 0.0;
    std::vector<double> xs, ys, zs;            // sample coordinates, SoA
    std::vector<Cplx> values;
    std::vector<std::uint8_t> excluded;        // singular-tagged samples
    // Box lattice layout: samples [0, box_count) are lattice points with
    // index i = (ix*ny + iy)*nz + iz; shell samples follow.
    std::size_t box_count = 0;
    std::size_t nx = 0, ny = 0, nz = 0;
    double spacing = 0.0;

    std::size_t size() const { return xs.size(); }
    double max_abs() const;                    // over non-excluded samples
    std::size_t count_above(double eps) const;
};

/// Full solution of the wave problem at one spacetime point: the Kirchhoff
/// free wave plus the retarded spherical waves
///   sum_j theta(t - d_j(x)) zeta_j(t - d_j(x)) / (4 pi d_j(x)).
/// x must stay away from the interaction points (hard guard 1e-9); with no
/// active charge term the Kirchhoff value is returned untouched.
Cplx eval_solution(const InteractionConfig& config, const InitialData& data,
                   const ChargeHistory& history, double t, const Vec3& x,
                   const SphericalQuadrature& quad);

/// Boundary values along the trajectory:
///   phi^s_j = zeta_j(t),
///   phi^r_j = phi_f(t, y_j) + sum_k theta(t - d_jk) G_jk zeta_k(t - d_jk)
///             - zeta_j'(t) / (4 pi).
BoundaryVector boundary_values(const InteractionConfig& config, const InitialData& data,
                               const ChargeHistory& history, double t,
                               const SphericalQuadrature& quad);

/// Samples the full field on the grid at time t (batched through the SIMD
/// kernels). Excluded samples hold value zero.
FieldSnapshot sample_field(const InteractionConfig& config, const InitialData& data,
                           const ChargeHistory& history, double t, const GridSpec& grid,
                           double horizon, const SphericalQuadrature& quad);

/// Maximum pairwise distance between non-excluded samples with |value| > eps;
/// 0 when fewer than two qualify. Exact: on the box lattice only the
/// per-column extreme samples can realize the diameter (any sample strictly
/// between two others on its lattice line is a convex combination of them),
/// so the pair search runs on that reduced candidate set plus the shell hits.
double support_diameter(const FieldSnapshot& snapshot, double eps);

struct SnapshotStat {
    double time = 0.0;
    double diameter = 0.0;
    double bound = 0.0;        // 2 t + diam(S0)
    bool within = true;        // diameter <= bound + slack
    std::size_t active_count = 0;
    double max_abs = 0.0;
};

struct PropagationReport {
    std::string scenario_name;
    bool bound_respected = true;
    double violation_time = 0.0;       // first violation when !bound_respected
    double violation_diameter = 0.0;
    double violation_bound = 0.0;
    std::vector<SnapshotStat> snapshots;
    std::vector<double> activation;    // tau_k, +inf if silent
    double diam_s0 = 0.0;
    double slack = 0.0;                // grid spacing + 2 h
    double support_threshold = 0.0;
    double activation_threshold = 0.0;
    std::string classification;        // Local | NonLocal | Invalid
    double horizon = 0.0;
    double step = 0.0;
    std::string to_json() const;
};

struct ExperimentConfig {
    std::string name;
    InteractionConfig config;
    InitialData data;
    double horizon = 1.0;
    double step = -1.0;                   // < 0: default_step
    GridSpec grid;
    std::vector<double> snapshot_times;   // empty: {0, tau1+0.5, tau1+1.5, +1.0 ...}
    double support_rel = 1e-6;
    double activation_rel = 1e-7;
    double activation_floor = 1e-12;
    int quad_order = SphericalQuadrature::kDefaultOrder;
};

/// Runs the finite-speed-of-propagation experiment: integrates the charges,
/// samples snapshots, and checks diam(supp phi(t)) <= 2t + diam(S0) + slack.
/// Requires admissible data and, for n >= 1, a strictly unique nearest
/// interaction point (dist(y_k, S0) < dist(Y \ {y_k}, S0)).
/// on_snapshot, when set, receives every sampled snapshot (for CSV output).
PropagationReport propagation_experiment(
    const ExperimentConfig& ec,
    const std::function<void(const FieldSnapshot&, double eps)>& on_snapshot = {});

/// snapshot CSV: header x,y,z,re_phi,im_phi; one row per non-excluded sample
/// with |value| > eps, 12 significant digits, deterministic order.
void write_snapshot_csv(const FieldSnapshot& snapshot, double eps, const std::string& path);

} // namespace pointwave
