#include "pointwave/charge_dynamics.hpp"

#include <Eigen/LU>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace pointwave {

ChargeHistory::ChargeHistory(int n_points, double step, int node_count)
    : n_(n_points), step_(step), nodes_(node_count) {
    if (step <= 0.0) throw std::invalid_argument("ChargeHistory: step must be positive");
    if (node_count < 1) throw std::invalid_argument("ChargeHistory: need at least one node");
    values_.resize(static_cast<std::size_t>(nodes_) * n_);
    derivs_.resize(static_cast<std::size_t>(nodes_) * n_);
}

void ChargeHistory::push_node(const CVector& value, const CVector& derivative) {
    if (filled_ >= nodes_) throw std::logic_error("ChargeHistory: history full");
    if (value.size() != n_ || derivative.size() != n_)
        throw std::invalid_argument("ChargeHistory: node size mismatch");
    for (int j = 0; j < n_; ++j) {
        values_[idx(filled_, j)] = value(j);
        derivs_[idx(filled_, j)] = derivative(j);
    }
    ++filled_;
}

ChargeHistory::Bracket ChargeHistory::locate(double s) const {
    if (s < 0.0) return {-1, 0.0};
    const double u = s / step_;
    const long long snap = std::llround(u);
    if (snap >= 0 && snap < filled_ && std::abs(s - snap * step_) <= 1e-9 * step_)
        return {-2, static_cast<double>(snap)};
    const int i = std::min(static_cast<int>(u), filled_ - 2);
    if (i < 0 || i + 1 >= filled_ || s > (filled_ - 1) * step_ + 1e-9 * step_)
        throw std::out_of_range("ChargeHistory: query beyond computed history");
    return {i, u - i};
}

Cplx ChargeHistory::value(double s, int j) const {
    const Bracket b = locate(s);
    if (b.node == -1) return Cplx(0.0);
    if (b.node == -2) return value_at_node(static_cast<int>(b.u), j);
    const double u = b.u;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double h10 = u3 - 2.0 * u2 + u;
    const double h01 = -2.0 * u3 + 3.0 * u2;
    const double h11 = u3 - u2;
    return h00 * value_at_node(b.node, j) + h01 * value_at_node(b.node + 1, j) +
           step_ * (h10 * deriv_at_node(b.node, j) + h11 * deriv_at_node(b.node + 1, j));
}

Cplx ChargeHistory::derivative(double s, int j) const {
    const Bracket b = locate(s);
    if (b.node == -1) return Cplx(0.0);
    if (b.node == -2) return deriv_at_node(static_cast<int>(b.u), j);
    const double u = b.u;
    const double d00 = (6.0 * u * u - 6.0 * u) / step_;
    const double d10 = 3.0 * u * u - 4.0 * u + 1.0;
    const double d01 = -d00;
    const double d11 = 3.0 * u * u - 2.0 * u;
    return d00 * value_at_node(b.node, j) + d01 * value_at_node(b.node + 1, j) +
           d10 * deriv_at_node(b.node, j) + d11 * deriv_at_node(b.node + 1, j);
}

double ChargeHistory::max_abs_value() const {
    double m = 0.0;
    for (int i = 0; i < filled_; ++i)
        for (int j = 0; j < n_; ++j) m = std::max(m, std::abs(value_at_node(i, j)));
    return m;
}

double default_step(const InteractionConfig& config) {
    return std::min(0.01, config.min_delay() / 4.0);
}

namespace {

// Delayed coupling g_j(t) = sum_k theta(t - d_jk) G_jk zeta_k(t - d_jk).
CVector delayed_coupling(const InteractionConfig& config, const ChargeHistory& hist,
                         double t) {
    const int n = config.size();
    CVector g = CVector::Zero(n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;   // G_jj = 0
            const double d = config.distance_matrix(j, k);
            if (t < d) continue;
            g(j) += config.green_matrix(j, k) * hist.value(t - d, k);
        }
    return g;
}

} // namespace

ChargeHistory solve_charges(const InteractionConfig& config, const ForcingTrace& forcing,
                            double horizon, double step) {
    const int n = config.size();
    if (step <= 0.0) throw std::invalid_argument("solve_charges: step must be positive");
    if (horizon < 0.0) throw std::invalid_argument("solve_charges: horizon must be nonnegative");
    const ValidationReport rep = validate_pair(config);
    if (!rep.passed())
        throw std::invalid_argument("solve_charges: boundary pair failed validation (" +
                                    rep.first_failure()->id + ")");
    if (!rep.a_invertible)
        throw std::invalid_argument(
            "solve_charges: A is numerically singular; the retarded system needs "
            "invertible A (the regular-pencil reduction is not supported)");
    const double min_delay = config.min_delay();
    if (n >= 2 && step > min_delay)
        throw std::invalid_argument("solve_charges: step " + format_sig12(step) +
                                    " exceeds the smallest delay " +
                                    format_sig12(min_delay));
    if (forcing.point_count() != n)
        throw std::invalid_argument("solve_charges: forcing trace point count mismatch");
    if (std::abs(forcing.step() - step) > 1e-12 * step)
        throw std::invalid_argument("solve_charges: forcing trace step mismatch");

    const int steps = static_cast<int>(std::ceil(horizon / step - 1e-9));
    if (n > 0 && forcing.node_count() < steps + 1)
        throw std::invalid_argument("solve_charges: forcing trace does not cover the horizon");

    const CMatrix H = (n > 0) ? CMatrix(config.A.fullPivLu().solve(config.B))
                              : CMatrix(0, 0);
    ChargeHistory hist(n, step, steps + 1);

    auto forcing_at = [&](double t) {
        CVector f(n);
        for (int j = 0; j < n; ++j) f(j) = forcing(t, j);
        return f;
    };
    auto rhs = [&](double t, const CVector& z) -> CVector {
        return kFourPi * (forcing_at(t) + delayed_coupling(config, hist, t) - H * z);
    };

    CVector z = CVector::Zero(n);
    hist.push_node(z, rhs(0.0, z));
    for (int i = 0; i < steps; ++i) {
        const double t = i * step;
        const CVector k1 = rhs(t, z);
        const CVector k2 = rhs(t + 0.5 * step, z + (0.5 * step) * k1);
        const CVector k3 = rhs(t + 0.5 * step, z + (0.5 * step) * k2);
        const CVector k4 = rhs(t + step, z + step * k3);
        z += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        hist.push_node(z, rhs((i + 1) * step, z));
    }
    return hist;
}

std::vector<double> activation_times(const ChargeHistory& history, double delta) {
    if (delta <= 0.0) throw std::invalid_argument("activation_times: delta must be positive");
    std::vector<double> tau(history.point_count(),
                            std::numeric_limits<double>::infinity());
    for (int j = 0; j < history.point_count(); ++j)
        for (int i = 0; i < history.filled(); ++i)
            if (std::abs(history.value_at_node(i, j)) > delta) {
                tau[j] = i * history.step();
                break;
            }
    return tau;
}

double default_activation_threshold(const ChargeHistory& history) {
    return std::max(1e-7 * history.max_abs_value(), 1e-12);
}

double bc_residual(const InteractionConfig& config, const ChargeHistory& history,
                   const ForcingTrace& forcing) {
    const int n = config.size();
    if (n == 0) return 0.0;
    double worst = 0.0;
    const double h = history.step();
    const int nodes = history.filled();
    auto residual_at = [&](double t) {
        CVector r(n), z(n);
        for (int j = 0; j < n; ++j) {
            r(j) = forcing(t, j) - history.derivative(t, j) / kFourPi;
            z(j) = history.value(t, j);
        }
        r += delayed_coupling(config, history, t);
        return (config.A * r - config.B * z).norm();
    };
    for (int i = 0; i < nodes; ++i) {
        worst = std::max(worst, residual_at(i * h));
        if (i + 1 < nodes) worst = std::max(worst, residual_at((i + 0.5) * h));
    }
    return worst;
}

void write_charges_csv(const ChargeHistory& history, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t";
    for (int j = 1; j <= history.point_count(); ++j)
        out << ",re_zeta_" << j << ",im_zeta_" << j;
    out << "\n";
    for (int i = 0; i < history.filled(); ++i) {
        out << format_sig12(i * history.step());
        for (int j = 0; j < history.point_count(); ++j) {
            const Cplx z = history.value_at_node(i, j);
            out << "," << format_sig12(z.real()) << "," << format_sig12(z.imag());
        }
        out << "\n";
    }
}

} // namespace pointwave
