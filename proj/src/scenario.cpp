#include "pointwave/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace pointwave {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ScenarioError("scenario error at '" + path + "': " + what);
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing required field");
    return *it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

Cplx as_complex(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2)
        fail(path, "expected a complex entry as a [re, im] pair");
    return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
}

Vec3 as_vec3(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) fail(path, "expected a 3-vector");
    return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]"),
            as_number(v[2], path + "[2]")};
}

CMatrix as_matrix(const json& v, int n, const std::string& path) {
    if (!v.is_array()) fail(path, "expected a row-major array of [re, im] pairs");
    if (static_cast<int>(v.size()) != n * n)
        fail(path, "expected " + std::to_string(n * n) + " entries for a " +
                       std::to_string(n) + "x" + std::to_string(n) +
                       " matrix, got " + std::to_string(v.size()));
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = as_complex(v[i * n + j],
                                 path + "[" + std::to_string(i * n + j) + "]");
    return m;
}

std::vector<BumpProfile> as_bumps(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of bumps");
    std::vector<BumpProfile> bumps;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        BumpProfile b;
        b.center = as_vec3(require(v[i], p, "center"), p + ".center");
        b.radius = as_number(require(v[i], p, "radius"), p + ".radius");
        if (b.radius <= 0.0) fail(p + ".radius", "radius must be positive");
        b.amplitude = as_complex(require(v[i], p, "amplitude"), p + ".amplitude");
        bumps.push_back(b);
    }
    return bumps;
}

json complex_json(const Cplx& z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMatrix& m) {
    json out = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.push_back(complex_json(m(i, j)));
    return out;
}

json bumps_json(const std::vector<BumpProfile>& bumps) {
    json out = json::array();
    for (const auto& b : bumps)
        out.push_back({{"center", {b.center.x(), b.center.y(), b.center.z()}},
                       {"radius", b.radius},
                       {"amplitude", complex_json(b.amplitude)}});
    return out;
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario syntax error: ") + e.what());
    }
    if (!root.is_object()) throw ScenarioError("scenario error at '': expected an object");

    Scenario sc;
    sc.name = root.value("name", "unnamed");

    const json& pts = require(root, "", "points");
    if (!pts.is_array()) fail("points", "expected an array of 3-vectors");
    for (std::size_t i = 0; i < pts.size(); ++i)
        sc.points.push_back(as_vec3(pts[i], "points[" + std::to_string(i) + "]"));
    const int n = static_cast<int>(sc.points.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((sc.points[i] - sc.points[j]).norm() == 0.0)
                fail("points[" + std::to_string(j) + "]",
                     "duplicate of points[" + std::to_string(i) + "]");

    const json& bc = require(root, "", "boundary");
    if (n == 0 && !bc.contains("H") && !bc.contains("A") && !bc.contains("B")) {
        sc.A = CMatrix(0, 0);
        sc.B = CMatrix(0, 0);
        sc.from_h_shorthand = true;
    } else if (bc.contains("H")) {
        if (bc.contains("A") || bc.contains("B"))
            fail("boundary", "give either H or the pair (A, B), not both");
        sc.B = as_matrix(bc["H"], n, "boundary.H");
        sc.A = CMatrix::Identity(n, n);
        sc.from_h_shorthand = true;
    } else {
        sc.A = as_matrix(require(bc, "boundary", "A"), n, "boundary.A");
        sc.B = as_matrix(require(bc, "boundary", "B"), n, "boundary.B");
    }

    if (root.contains("initial_data")) {
        const json& id = root["initial_data"];
        if (!id.is_object()) fail("initial_data", "expected an object");
        if (id.contains("position_bumps"))
            sc.data.position_bumps = as_bumps(id["position_bumps"], "initial_data.position_bumps");
        if (id.contains("velocity_bumps"))
            sc.data.velocity_bumps = as_bumps(id["velocity_bumps"], "initial_data.velocity_bumps");
        if (id.contains("charges")) {
            const json& ch = id["charges"];
            if (!ch.is_array() || static_cast<int>(ch.size()) != n)
                fail("initial_data.charges", "expected " + std::to_string(n) + " complex entries");
            sc.data.charges0 = CVector(n);
            for (int j = 0; j < n; ++j)
                sc.data.charges0(j) =
                    as_complex(ch[j], "initial_data.charges[" + std::to_string(j) + "]");
        }
    }
    if (sc.data.charges0.size() == 0) sc.data.charges0 = CVector::Zero(n);

    const json& time = require(root, "", "time");
    sc.horizon = as_number(require(time, "time", "horizon"), "time.horizon");
    if (sc.horizon <= 0.0) fail("time.horizon", "horizon must be positive");
    if (time.contains("step")) {
        sc.step = as_number(time["step"], "time.step");
        if (sc.step <= 0.0) fail("time.step", "step must be positive");
    }
    if (time.contains("direction")) {
        const std::string d = time["direction"].get<std::string>();
        if (d == "forward") sc.direction = TimeDirection::Forward;
        else if (d == "backward") sc.direction = TimeDirection::Backward;
        else fail("time.direction", "expected \"forward\" or \"backward\"");
    }

    if (root.contains("grid")) {
        const json& g = root["grid"];
        if (!g.is_object()) fail("grid", "expected an object");
        if (g.contains("spacing")) {
            sc.grid.spacing = as_number(g["spacing"], "grid.spacing");
            if (sc.grid.spacing <= 0.0) fail("grid.spacing", "spacing must be positive");
        }
        if (g.contains("margin")) sc.grid.margin = as_number(g["margin"], "grid.margin");
        if (g.contains("box")) {
            const json& box = g["box"];
            sc.grid.box_min = as_vec3(require(box, "grid.box", "min"), "grid.box.min");
            sc.grid.box_max = as_vec3(require(box, "grid.box", "max"), "grid.box.max");
            sc.grid.has_explicit_box = true;
        }
        if (g.contains("shell_radii")) {
            const json& sr = g["shell_radii"];
            if (!sr.is_array()) fail("grid.shell_radii", "expected an array of radii");
            sc.grid.shell_radii.clear();
            for (std::size_t i = 0; i < sr.size(); ++i) {
                const double r =
                    as_number(sr[i], "grid.shell_radii[" + std::to_string(i) + "]");
                if (r <= 0.0) fail("grid.shell_radii[" + std::to_string(i) + "]",
                                   "radii must be positive");
                sc.grid.shell_radii.push_back(r);
            }
        }
        if (g.contains("shell_directions"))
            sc.grid.shell_directions =
                static_cast<int>(as_number(g["shell_directions"], "grid.shell_directions"));
        if (g.contains("exclusion_radius")) {
            sc.grid.exclusion_radius =
                as_number(g["exclusion_radius"], "grid.exclusion_radius");
            if (sc.grid.exclusion_radius < 0.0)
                fail("grid.exclusion_radius", "must be nonnegative");
        }
    }

    if (root.contains("snapshot_times")) {
        const json& st = root["snapshot_times"];
        if (!st.is_array()) fail("snapshot_times", "expected an array of times");
        for (std::size_t i = 0; i < st.size(); ++i)
            sc.snapshot_times.push_back(
                as_number(st[i], "snapshot_times[" + std::to_string(i) + "]"));
    }

    if (root.contains("thresholds")) {
        const json& th = root["thresholds"];
        if (th.contains("support_rel"))
            sc.support_rel = as_number(th["support_rel"], "thresholds.support_rel");
        if (th.contains("activation_rel"))
            sc.activation_rel = as_number(th["activation_rel"], "thresholds.activation_rel");
        if (th.contains("activation_floor"))
            sc.activation_floor =
                as_number(th["activation_floor"], "thresholds.activation_floor");
    }
    if (root.contains("quadrature_order")) {
        sc.quad_order = static_cast<int>(as_number(root["quadrature_order"], "quadrature_order"));
        if (sc.quad_order < 4 || sc.quad_order > 4096)
            fail("quadrature_order", "must be in [4, 4096]");
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& sc) {
    json root;
    root["name"] = sc.name;
    json pts = json::array();
    for (const auto& p : sc.points) pts.push_back({p.x(), p.y(), p.z()});
    root["points"] = pts;
    if (sc.from_h_shorthand)
        root["boundary"] = {{"H", matrix_json(sc.B)}};
    else
        root["boundary"] = {{"A", matrix_json(sc.A)}, {"B", matrix_json(sc.B)}};
    json charges = json::array();
    for (int j = 0; j < sc.data.charges0.size(); ++j)
        charges.push_back(complex_json(sc.data.charges0(j)));
    root["initial_data"] = {{"position_bumps", bumps_json(sc.data.position_bumps)},
                            {"velocity_bumps", bumps_json(sc.data.velocity_bumps)},
                            {"charges", charges}};
    root["time"] = {{"horizon", sc.horizon},
                    {"direction", sc.direction == TimeDirection::Forward ? "forward" : "backward"}};
    if (sc.step > 0.0) root["time"]["step"] = sc.step;
    json grid = {{"spacing", sc.grid.spacing},
                 {"shell_radii", sc.grid.shell_radii},
                 {"shell_directions", sc.grid.shell_directions},
                 {"exclusion_radius", sc.grid.exclusion_radius}};
    if (sc.grid.has_explicit_box) {
        grid["box"] = {{"min", {sc.grid.box_min.x(), sc.grid.box_min.y(), sc.grid.box_min.z()}},
                       {"max", {sc.grid.box_max.x(), sc.grid.box_max.y(), sc.grid.box_max.z()}}};
    } else if (sc.grid.margin >= 0.0) {
        grid["margin"] = sc.grid.margin;
    }
    root["grid"] = grid;
    if (!sc.snapshot_times.empty()) root["snapshot_times"] = sc.snapshot_times;
    root["thresholds"] = {{"support_rel", sc.support_rel},
                          {"activation_rel", sc.activation_rel},
                          {"activation_floor", sc.activation_floor}};
    root["quadrature_order"] = sc.quad_order;
    return root.dump(2) + "\n";
}

InitialData Scenario::effective_data() const {
    InitialData d = data;
    if (direction == TimeDirection::Backward)
        for (auto& b : d.velocity_bumps) b.amplitude = -b.amplitude;
    return d;
}

ExperimentConfig Scenario::experiment(const InteractionConfig& config) const {
    ExperimentConfig ec;
    ec.name = name;
    ec.config = config;
    ec.data = effective_data();
    ec.horizon = horizon;
    ec.step = step;
    ec.grid = grid;
    ec.snapshot_times = snapshot_times;
    ec.support_rel = support_rel;
    ec.activation_rel = activation_rel;
    ec.activation_floor = activation_floor;
    ec.quad_order = quad_order;
    return ec;
}

} // namespace pointwave
