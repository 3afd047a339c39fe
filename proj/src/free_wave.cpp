#include "pointwave/free_wave.hpp"

#include "pointwave/simd/kernel_core.hpp"
#include "pointwave/simd/kernels.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace pointwave {

double BumpProfile::profile(double s) const {
    const double u = (s * s) / (radius * radius);
    const double base = std::max(0.0, 1.0 - u);
    const double b2 = base * base;
    return b2 * b2;
}

double BumpProfile::profile_deriv(double s) const {
    const double r2 = radius * radius;
    const double base = std::max(0.0, 1.0 - (s * s) / r2);
    return -8.0 * s / r2 * base * base * base;
}

double InitialData::support_diameter() const {
    double d = 0.0;
    std::vector<const BumpProfile*> all;
    for (const auto& b : position_bumps) all.push_back(&b);
    for (const auto& b : velocity_bumps) all.push_back(&b);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i; j < all.size(); ++j)
            d = std::max(d, (all[i]->center - all[j]->center).norm() +
                                all[i]->radius + all[j]->radius);
    return d;
}

double InitialData::support_distance(const Vec3& x) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& b : position_bumps)
        d = std::min(d, std::max(0.0, (x - b.center).norm() - b.radius));
    for (const auto& b : velocity_bumps)
        d = std::min(d, std::max(0.0, (x - b.center).norm() - b.radius));
    return d;
}

std::vector<std::string> admissibility_issues(const InteractionConfig& config,
                                              const InitialData& data) {
    std::vector<std::string> issues;
    for (int j = 0; j < data.charges0.size(); ++j)
        if (data.charges0(j) != 0.0) {
            issues.push_back("initial charges must vanish (zeta_" +
                             std::to_string(j + 1) + " != 0)");
            break;
        }
    auto check_balls = [&](const std::vector<BumpProfile>& bumps, const char* kind) {
        for (std::size_t b = 0; b < bumps.size(); ++b)
            for (int j = 0; j < config.size(); ++j)
                if ((config.points[j] - bumps[b].center).norm() <= bumps[b].radius)
                    issues.push_back(std::string(kind) + " bump " + std::to_string(b) +
                                     " contains interaction point " + std::to_string(j + 1));
    };
    check_balls(data.position_bumps, "position");
    check_balls(data.velocity_bumps, "velocity");
    if (issues.empty() && config.size() > 0) {
        CVector phi0(config.size());
        for (int j = 0; j < config.size(); ++j)
            phi0(j) = eval_initial(data, config.points[j]).value;
        const double res = (config.A * phi0).norm();
        if (res > 1e-12 * (1.0 + config.A.norm()))
            issues.push_back("A * phi0(Y) must vanish, got norm " + format_sig12(res));
    }
    return issues;
}

PointValue eval_initial(const InitialData& data, const Vec3& x) {
    PointValue out{Cplx(0.0), Eigen::Vector3cd::Zero()};
    for (const auto& b : data.position_bumps) {
        const Vec3 d = x - b.center;
        const double s = d.norm();
        if (s >= b.radius) continue;
        out.value += b.amplitude * b.profile(s);
        if (s > 0.0)
            out.gradient += (b.amplitude * b.profile_deriv(s) / s) * d.cast<Cplx>();
    }
    return out;
}

SphericalQuadrature::SphericalQuadrature(int order) : order_(order) {
    if (order < 4 || order > 4096)
        throw std::invalid_argument("SphericalQuadrature: order must be in [4, 4096]");
    nodes_.resize(order);
    weights_.resize(order);
    // Newton iteration on the Legendre polynomial, symmetric pairs.
    const int m = (order + 1) / 2;
    for (int k = 0; k < m; ++k) {
        double x = std::cos(kPi * (k + 0.75) / (order + 0.5));
        double p_deriv = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= order; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            p_deriv = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / p_deriv;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * p_deriv * p_deriv);
        nodes_[k] = -x;
        nodes_[order - 1 - k] = x;
        weights_[k] = w;
        weights_[order - 1 - k] = w;
    }
}

Cplx kirchhoff_eval(const InitialData& data, double t, const Vec3& x,
                    const SphericalQuadrature& quad) {
    if (t < 0.0)
        throw std::invalid_argument(
            "kirchhoff_eval: t must be nonnegative (reflect data for backward runs)");
    if (t == 0.0) return eval_initial(data, x).value;
    Cplx acc(0.0);
    for (const auto& b : data.position_bumps) {
        const double rho = (x - b.center).norm();
        if (std::abs(rho - t) > b.radius) continue;   // sphere misses the ball
        double v = 0.0, g = 0.0;
        simd::core::sphere_band_mean(rho, t, b.radius, quad.nodes(),
                                     quad.weights(), quad.order(), v, g);
        acc += b.amplitude * (v + t * g);
    }
    for (const auto& b : data.velocity_bumps) {
        const double rho = (x - b.center).norm();
        if (std::abs(rho - t) > b.radius) continue;
        double v = 0.0, g = 0.0;
        simd::core::sphere_band_mean(rho, t, b.radius, quad.nodes(),
                                     quad.weights(), quad.order(), v, g);
        acc += b.amplitude * (t * v);
    }
    return acc;
}

void kirchhoff_accumulate(const InitialData& data, double t,
                          std::span<const double> xs, std::span<const double> ys,
                          std::span<const double> zs, std::span<Cplx> out,
                          const SphericalQuadrature& quad) {
    if (t < 0.0) throw std::invalid_argument("kirchhoff_accumulate: t must be nonnegative");
    const std::size_t n = xs.size();
    const auto& kern = simd::active_kernels();
    std::vector<double> scratch(n);
    if (t == 0.0) {
        for (const auto& b : data.position_bumps) {
            kern.bump_values(n, xs.data(), ys.data(), zs.data(), b.center.x(),
                             b.center.y(), b.center.z(),
                             1.0 / (b.radius * b.radius), scratch.data());
            for (std::size_t i = 0; i < n; ++i)
                out[i] += b.amplitude * scratch[i];
        }
        return;
    }
    std::vector<double> val(n), grad(n);
    auto rho_for = [&](const BumpProfile& b) {
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = xs[i] - b.center.x();
            const double dy = ys[i] - b.center.y();
            const double dz = zs[i] - b.center.z();
            scratch[i] = std::sqrt(dx * dx + dy * dy + dz * dz);
        }
    };
    for (const auto& b : data.position_bumps) {
        rho_for(b);
        kern.sphere_band_means(n, scratch.data(), t, b.radius, quad.nodes(),
                               quad.weights(), quad.order(), val.data(), grad.data());
        for (std::size_t i = 0; i < n; ++i)
            out[i] += b.amplitude * (val[i] + t * grad[i]);
    }
    for (const auto& b : data.velocity_bumps) {
        rho_for(b);
        kern.sphere_band_means(n, scratch.data(), t, b.radius, quad.nodes(),
                               quad.weights(), quad.order(), val.data(), grad.data());
        for (std::size_t i = 0; i < n; ++i)
            out[i] += b.amplitude * (t * val[i]);
    }
}

namespace {

// Adaptive Simpson on [a, b] for the real radial moment integrand.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace

Cplx radial_oracle(const BumpProfile& profile, InitialKind kind, double t, double r) {
    if (t < 0.0) throw std::invalid_argument("radial_oracle: t must be nonnegative");
    if (r < 0.0) throw std::invalid_argument("radial_oracle: r must be nonnegative");
    if (kind == InitialKind::Position) {
        if (r < 1e-8) {
            // d/ds [s p(s)] at s = t
            return profile.amplitude * (profile.profile(t) + t * profile.profile_deriv(t));
        }
        const double lead = (r + t) * profile.profile(r + t);
        const double trail = (r - t) * profile.profile(std::abs(r - t));
        return profile.amplitude * ((lead + trail) / (2.0 * r));
    }
    if (r < 1e-8) return profile.amplitude * (t * profile.profile(t));
    const double a = std::max(std::abs(r - t), 0.0);
    const double b = std::min(r + t, profile.radius);
    const double moment = integrate([&](double s) { return s * profile.profile(s); },
                                    a, b, 1e-13);
    return profile.amplitude * (moment / (2.0 * r));
}

ForcingTrace ForcingTrace::build(const InitialData& data, const InteractionConfig& config,
                                 double horizon, double step,
                                 const SphericalQuadrature& quad) {
    if (step <= 0.0) throw std::invalid_argument("ForcingTrace: step must be positive");
    if (horizon < 0.0) throw std::invalid_argument("ForcingTrace: horizon must be nonnegative");
    ForcingTrace tr;
    tr.step_ = step;
    tr.n_ = config.size();
    const int nodes = static_cast<int>(std::ceil(horizon / step - 1e-9)) + 1;
    tr.nodes_ = nodes;
    tr.samples_.resize(static_cast<std::size_t>(nodes) * tr.n_);
    for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < tr.n_; ++j)
            tr.samples_[static_cast<std::size_t>(i) * tr.n_ + j] =
                kirchhoff_eval(data, i * step, config.points[j], quad);
    return tr;
}

ForcingTrace ForcingTrace::from_samples(double step, int n_points,
                                        std::vector<Cplx> samples) {
    if (step <= 0.0) throw std::invalid_argument("ForcingTrace: step must be positive");
    if (n_points > 0 && samples.size() % n_points != 0)
        throw std::invalid_argument("ForcingTrace: sample count not a multiple of n");
    ForcingTrace tr;
    tr.step_ = step;
    tr.n_ = n_points;
    tr.nodes_ = n_points > 0 ? static_cast<int>(samples.size()) / n_points : 0;
    tr.samples_ = std::move(samples);
    return tr;
}

Cplx ForcingTrace::operator()(double t, int j) const {
    const int nodes = node_count();
    if (nodes == 0) return Cplx(0.0);
    const double u = t / step_;
    const long long snap = std::llround(u);
    if (snap >= 0 && snap < nodes && std::abs(t - snap * step_) <= 1e-9 * step_)
        return at_node(static_cast<int>(snap), j);
    if (t < 0.0 || t > horizon() + 1e-9 * step_)
        throw std::out_of_range("ForcingTrace: query outside [0, horizon]");
    if (nodes == 1) return at_node(0, j);
    int i = std::min(static_cast<int>(u), nodes - 2);
    if (nodes < 4) {
        // Not enough nodes for a cubic; fall back to linear.
        const double w = u - i;
        return (1.0 - w) * at_node(i, j) + w * at_node(i + 1, j);
    }
    int i0 = std::clamp(i - 1, 0, nodes - 4);
    Cplx acc(0.0);
    for (int k = 0; k < 4; ++k) {
        double lk = 1.0;
        for (int l = 0; l < 4; ++l) {
            if (l == k) continue;
            lk *= (u - (i0 + l)) / static_cast<double>(k - l);
        }
        acc += lk * at_node(i0 + k, j);
    }
    return acc;
}

} // namespace pointwave
