#pragma once

#include "pointwave/bc_algebra.hpp"
#include "pointwave/free_wave.hpp"

#include <vector>

namespace pointwave {

/// Dense record of the charge trajectories zeta(t) and their derivatives on
/// the uniform grid t_i = i*h, with a piecewise cubic Hermite accessor.
/// Queries for t < 0 return zero: no waves have been emitted yet, the
/// prehistory is empty.
class ChargeHistory {
  public:
    ChargeHistory(int n_points, double step, int node_count);

    int point_count() const { return n_; }
    double step() const { return step_; }
    int node_count() const { return nodes_; }
    double horizon() const { return step_ * (nodes_ - 1); }
    int filled() const { return filled_; }

    /// Appends one node worth of values and derivatives.
    void push_node(const CVector& value, const CVector& derivative);

    Cplx value_at_node(int node, int j) const { return values_[idx(node, j)]; }
    Cplx deriv_at_node(int node, int j) const { return derivs_[idx(node, j)]; }

    /// C^1 dense output; exact at nodes, identically zero for s < 0.
    Cplx value(double s, int j) const;
    Cplx derivative(double s, int j) const;

    double max_abs_value() const;

  private:
    std::size_t idx(int node, int j) const {
        return static_cast<std::size_t>(node) * n_ + j;
    }
    struct Bracket {
        int node;     // -1 for prehistory, -2 for snap-to-node hit
        double u;
    };
    Bracket locate(double s) const;

    int n_;
    double step_;
    int nodes_;
    int filled_ = 0;
    std::vector<Cplx> values_;
    std::vector<Cplx> derivs_;
};

/// Integrates the retarded charge system
///   zeta'(t) = 4*pi * ( f(t) + g(t) - H zeta(t) ),   H = A^{-1} B,
///   g_j(t)   = sum_k theta(t - d_jk) G_jk zeta_k(t - d_jk),
/// by classical RK4 in method-of-steps form: delayed values are read from the
/// already-computed dense history, which is valid because the step never
/// exceeds the smallest delay. theta(0) = 1.
///
/// Requires a validated pair, invertible A, zero initial charges and
/// h <= min positive delay. The horizon is rounded up to a whole number of
/// steps; the forcing trace must use the same step and cover the horizon.
ChargeHistory solve_charges(const InteractionConfig& config, const ForcingTrace& forcing,
                            double horizon, double step);

/// First grid time at which |zeta_k| exceeds delta, +inf if never.
std::vector<double> activation_times(const ChargeHistory& history, double delta);

/// Detection threshold used by the propagation experiments:
/// 1e-7 times the largest node amplitude, floored at 1e-12.
double default_activation_threshold(const ChargeHistory& history);

/// Maximum over the dense test grid (nodes and midpoints) of
/// |A r(t) - B zeta(t)|_2 with
///   r_j(t) = f_j(t) + sum_k theta(t - d_jk) G_jk zeta_k(t - d_jk)
///            - zeta_j'(t) / (4*pi).
/// At the nodes the stored derivative satisfies the system by construction,
/// so the midpoints are what measure the dense-output consistency.
double bc_residual(const InteractionConfig& config, const ChargeHistory& history,
                   const ForcingTrace& forcing);

/// Default integration step: min(0.01, min-delay / 4).
double default_step(const InteractionConfig& config);

/// charges.csv writer: header t,re_zeta_1,im_zeta_1,...  one row per node,
/// 12 significant digits.
void write_charges_csv(const ChargeHistory& history, const std::string& path);

} // namespace pointwave
