#include "pointwave/wavefield.hpp"

#include "pointwave/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace pointwave {

double FieldSnapshot::max_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        if (!excluded[i]) m = std::max(m, std::abs(values[i]));
    return m;
}

std::size_t FieldSnapshot::count_above(double eps) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < size(); ++i)
        if (!excluded[i] && std::abs(values[i]) > eps) ++c;
    return c;
}

Cplx eval_solution(const InteractionConfig& config, const InitialData& data,
                   const ChargeHistory& history, double t, const Vec3& x,
                   const SphericalQuadrature& quad) {
    if (t < 0.0) throw std::invalid_argument("eval_solution: t must be nonnegative");
    const Cplx free_part = kirchhoff_eval(data, t, x, quad);
    Cplx tail(0.0);
    bool any = false;
    for (int j = 0; j < config.size(); ++j) {
        const double d = (x - config.points[j]).norm();
        if (d <= 1e-9)
            throw std::domain_error("eval_solution: sample within 1e-9 of interaction point " +
                                    std::to_string(j + 1));
        if (t < d) continue;
        tail += history.value(t - d, j) / (kFourPi * d);
        any = true;
    }
    return any ? free_part + tail : free_part;
}

BoundaryVector boundary_values(const InteractionConfig& config, const InitialData& data,
                               const ChargeHistory& history, double t,
                               const SphericalQuadrature& quad) {
    const int n = config.size();
    BoundaryVector bv{CVector::Zero(n), CVector::Zero(n)};
    for (int j = 0; j < n; ++j) {
        bv.singular(j) = history.value(t, j);
        Cplx r = kirchhoff_eval(data, t, config.points[j], quad) -
                 history.derivative(t, j) / kFourPi;
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const double d = config.distance_matrix(j, k);
            if (t < d) continue;
            r += config.green_matrix(j, k) * history.value(t - d, k);
        }
        bv.regular(j) = r;
    }
    return bv;
}

namespace {

struct BoxAxis {
    double origin;
    std::size_t count;
};

BoxAxis snapped_axis(double lo, double hi, double spacing) {
    const double a = std::floor(lo / spacing + 1e-9) * spacing;
    const double b = std::ceil(hi / spacing - 1e-9) * spacing;
    return {a, static_cast<std::size_t>(std::llround((b - a) / spacing)) + 1};
}

/// Deterministic, roughly uniform unit directions (Fibonacci sphere).
std::vector<Vec3> fibonacci_directions(int count) {
    std::vector<Vec3> dirs;
    dirs.reserve(count);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return dirs;
}

} // namespace

FieldSnapshot sample_field(const InteractionConfig& config, const InitialData& data,
                           const ChargeHistory& history, double t, const GridSpec& grid,
                           double horizon, const SphericalQuadrature& quad) {
    if (grid.spacing <= 0.0) throw std::invalid_argument("sample_field: spacing must be positive");
    FieldSnapshot snap;
    snap.time = t;
    snap.spacing = grid.spacing;

    Vec3 lo, hi;
    if (grid.has_explicit_box) {
        lo = grid.box_min;
        hi = grid.box_max;
    } else {
        lo = Vec3::Constant(std::numeric_limits<double>::infinity());
        hi = -lo;
        auto extend = [&](const Vec3& p, double r) {
            lo = lo.cwiseMin(p - Vec3::Constant(r));
            hi = hi.cwiseMax(p + Vec3::Constant(r));
        };
        for (const auto& b : data.position_bumps) extend(b.center, b.radius);
        for (const auto& b : data.velocity_bumps) extend(b.center, b.radius);
        for (const auto& p : config.points) extend(p, 0.0);
        if (!lo.allFinite() || !hi.allFinite()) { lo = Vec3::Zero(); hi = Vec3::Zero(); }
        const double margin = grid.margin >= 0.0 ? grid.margin : horizon;
        lo -= Vec3::Constant(margin);
        hi += Vec3::Constant(margin);
    }
    const BoxAxis ax = snapped_axis(lo.x(), hi.x(), grid.spacing);
    const BoxAxis ay = snapped_axis(lo.y(), hi.y(), grid.spacing);
    const BoxAxis az = snapped_axis(lo.z(), hi.z(), grid.spacing);
    snap.nx = ax.count; snap.ny = ay.count; snap.nz = az.count;
    snap.box_count = ax.count * ay.count * az.count;
    if (snap.box_count > std::size_t(300'000'000))
        throw std::invalid_argument("sample_field: grid too large (" +
                                    std::to_string(snap.box_count) + " lattice points)");

    const std::size_t shells =
        static_cast<std::size_t>(config.size()) * grid.shell_radii.size() *
        static_cast<std::size_t>(std::max(0, grid.shell_directions));
    const std::size_t total = snap.box_count + shells;
    snap.xs.resize(total); snap.ys.resize(total); snap.zs.resize(total);
    std::size_t idx = 0;
    for (std::size_t ix = 0; ix < ax.count; ++ix)
        for (std::size_t iy = 0; iy < ay.count; ++iy)
            for (std::size_t iz = 0; iz < az.count; ++iz, ++idx) {
                snap.xs[idx] = ax.origin + ix * grid.spacing;
                snap.ys[idx] = ay.origin + iy * grid.spacing;
                snap.zs[idx] = az.origin + iz * grid.spacing;
            }
    const auto dirs = fibonacci_directions(std::max(0, grid.shell_directions));
    for (int j = 0; j < config.size(); ++j)
        for (double r : grid.shell_radii)
            for (const auto& dir : dirs) {
                const Vec3 p = config.points[j] + r * dir;
                snap.xs[idx] = p.x(); snap.ys[idx] = p.y(); snap.zs[idx] = p.z();
                ++idx;
            }

    snap.excluded.assign(total, 0);
    for (std::size_t i = 0; i < total; ++i)
        for (int j = 0; j < config.size(); ++j) {
            const double dx = snap.xs[i] - config.points[j].x();
            const double dy = snap.ys[i] - config.points[j].y();
            const double dz = snap.zs[i] - config.points[j].z();
            if (dx * dx + dy * dy + dz * dz <=
                grid.exclusion_radius * grid.exclusion_radius) {
                snap.excluded[i] = 1;
                break;
            }
        }

    snap.values.assign(total, Cplx(0.0));
    kirchhoff_accumulate(data, t, snap.xs, snap.ys, snap.zs, snap.values, quad);
    for (int j = 0; j < config.size(); ++j) {
        const Vec3 y = config.points[j];
        for (std::size_t i = 0; i < total; ++i) {
            if (snap.excluded[i]) continue;
            const double dx = snap.xs[i] - y.x();
            const double dy = snap.ys[i] - y.y();
            const double dz = snap.zs[i] - y.z();
            const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
            if (t < d) continue;
            snap.values[i] += history.value(t - d, j) / (kFourPi * d);
        }
    }
    for (std::size_t i = 0; i < total; ++i)
        if (snap.excluded[i]) snap.values[i] = Cplx(0.0);
    return snap;
}

double support_diameter(const FieldSnapshot& snap, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("support_diameter: eps must be positive");
    // Per-column extreme reduction on the box lattice (exact, see header),
    // all active shell samples appended verbatim.
    std::unordered_map<std::size_t, std::pair<std::size_t, std::size_t>> columns;
    std::vector<std::size_t> candidates;
    const std::size_t plane = snap.ny * snap.nz;
    for (std::size_t i = 0; i < snap.size(); ++i) {
        if (snap.excluded[i] || std::abs(snap.values[i]) <= eps) continue;
        if (i < snap.box_count) {
            const std::size_t ix = i / plane;
            const std::size_t col = i % plane;
            auto [it, fresh] = columns.try_emplace(col, i, i);
            if (!fresh) {
                if (ix < it->second.first / plane) it->second.first = i;
                if (ix > it->second.second / plane) it->second.second = i;
            }
        } else {
            candidates.push_back(i);
        }
    }
    for (const auto& [col, mm] : columns) {
        candidates.push_back(mm.first);
        if (mm.second != mm.first) candidates.push_back(mm.second);
    }
    if (candidates.size() < 2) return 0.0;
    std::vector<double> cx(candidates.size()), cy(candidates.size()), cz(candidates.size());
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        cx[k] = snap.xs[candidates[k]];
        cy[k] = snap.ys[candidates[k]];
        cz[k] = snap.zs[candidates[k]];
    }
    const double d2 = simd::active_kernels().max_pairwise_dist2(
        candidates.size(), cx.data(), cy.data(), cz.data());
    return std::sqrt(d2);
}

namespace {

std::string json_number(double v) {
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    if (std::isnan(v)) return "\"nan\"";
    return format_sig12(v);
}

} // namespace

std::string PropagationReport::to_json() const {
    std::ostringstream os;
    os << "{\n";
    os << "  \"scenario\": \"" << scenario_name << "\",\n";
    os << "  \"verdict\": \"" << (bound_respected ? "bound-respected" : "bound-violated")
       << "\",\n";
    if (!bound_respected) {
        os << "  \"first_violation\": {\"t\": " << json_number(violation_time)
           << ", \"diameter\": " << json_number(violation_diameter)
           << ", \"bound\": " << json_number(violation_bound) << "},\n";
    }
    os << "  \"classification\": \"" << classification << "\",\n";
    os << "  \"diam_S0\": " << json_number(diam_s0) << ",\n";
    os << "  \"slack\": " << json_number(slack) << ",\n";
    os << "  \"support_threshold\": " << json_number(support_threshold) << ",\n";
    os << "  \"activation_threshold\": " << json_number(activation_threshold) << ",\n";
    os << "  \"horizon\": " << json_number(horizon) << ",\n";
    os << "  \"step\": " << json_number(step) << ",\n";
    os << "  \"activation_times\": [";
    for (std::size_t k = 0; k < activation.size(); ++k)
        os << (k ? ", " : "") << json_number(activation[k]);
    os << "],\n";
    os << "  \"snapshots\": [\n";
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        const auto& s = snapshots[k];
        os << "    {\"t\": " << json_number(s.time)
           << ", \"diameter\": " << json_number(s.diameter)
           << ", \"bound\": " << json_number(s.bound)
           << ", \"within_bound\": " << (s.within ? "true" : "false")
           << ", \"active_samples\": " << s.active_count
           << ", \"max_abs\": " << json_number(s.max_abs) << "}"
           << (k + 1 < snapshots.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
}

PropagationReport propagation_experiment(
    const ExperimentConfig& ec,
    const std::function<void(const FieldSnapshot&, double eps)>& on_snapshot) {
    const auto issues = admissibility_issues(ec.config, ec.data);
    if (!issues.empty())
        throw std::invalid_argument("propagation_experiment: inadmissible data: " + issues[0]);
    const int n = ec.config.size();
    if (n >= 1) {
        // A strictly nearest interaction point must exist.
        std::vector<double> dist(n);
        for (int j = 0; j < n; ++j)
            dist[j] = ec.data.support_distance(ec.config.points[j]);
        std::vector<int> order(n);
        for (int j = 0; j < n; ++j) order[j] = j;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] < dist[b]; });
        if (n >= 2 && !(dist[order[0]] < dist[order[1]]))
            throw std::invalid_argument(
                "propagation_experiment: no strictly nearest interaction point "
                "(points " + std::to_string(order[0] + 1) + " and " +
                std::to_string(order[1] + 1) + " are equidistant from the support)");
    }

    const SphericalQuadrature quad(ec.quad_order);
    const double h = ec.step > 0.0 ? ec.step : default_step(ec.config);
    const ForcingTrace trace = ForcingTrace::build(ec.data, ec.config, ec.horizon, h, quad);
    const ChargeHistory history = solve_charges(ec.config, trace, ec.horizon, h);

    PropagationReport rep;
    rep.scenario_name = ec.name;
    rep.horizon = ec.horizon;
    rep.step = h;
    rep.diam_s0 = ec.data.support_diameter();
    rep.slack = ec.grid.spacing + 2.0 * h;
    rep.classification = classify_locality(ec.config).verdict_name();
    rep.activation_threshold =
        std::max(ec.activation_rel * history.max_abs_value(), ec.activation_floor);
    rep.activation = activation_times(history, rep.activation_threshold);

    std::vector<double> times = ec.snapshot_times;
    if (times.empty()) {
        times.push_back(0.0);
        double tau1 = std::numeric_limits<double>::infinity();
        for (double tau : rep.activation) tau1 = std::min(tau1, tau);
        double start = std::isfinite(tau1) ? tau1 + 0.5 : 1.0;
        for (double t = start; t <= ec.horizon + 1e-12; t += 1.0) times.push_back(t);
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end(),
                            [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
                times.end());

    // Support threshold comes from the t=0 snapshot amplitude scale.
    const FieldSnapshot snap0 =
        sample_field(ec.config, ec.data, history, 0.0, ec.grid, ec.horizon, quad);
    rep.support_threshold = std::max(ec.support_rel * snap0.max_abs(), 1e-300);

    auto process = [&](const FieldSnapshot& snap) {
        SnapshotStat st;
        st.time = snap.time;
        st.diameter = support_diameter(snap, rep.support_threshold);
        st.bound = 2.0 * snap.time + rep.diam_s0;
        st.within = st.diameter <= st.bound + rep.slack;
        st.active_count = snap.count_above(rep.support_threshold);
        st.max_abs = snap.max_abs();
        rep.snapshots.push_back(st);
        if (!st.within && rep.bound_respected) {
            rep.bound_respected = false;
            rep.violation_time = st.time;
            rep.violation_diameter = st.diameter;
            rep.violation_bound = st.bound;
        }
        if (on_snapshot) on_snapshot(snap, rep.support_threshold);
    };

    for (double t : times) {
        if (t < 0.0 || t > ec.horizon + 1e-12) continue;
        if (t == 0.0) {
            process(snap0);
            continue;
        }
        process(sample_field(ec.config, ec.data, history, t, ec.grid, ec.horizon, quad));
    }
    return rep;
}

void write_snapshot_csv(const FieldSnapshot& snap, double eps, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "x,y,z,re_phi,im_phi\n";
    for (std::size_t i = 0; i < snap.size(); ++i) {
        if (snap.excluded[i] || std::abs(snap.values[i]) <= eps) continue;
        out << format_sig12(snap.xs[i]) << "," << format_sig12(snap.ys[i]) << ","
            << format_sig12(snap.zs[i]) << "," << format_sig12(snap.values[i].real())
            << "," << format_sig12(snap.values[i].imag()) << "\n";
    }
}

} // namespace pointwave
