#include "pointwave/run_command.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace pointwave {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
}

std::string snapshot_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", t);
    return buf;
}

std::string classification_text(const ExtensionClass& cls) {
    std::ostringstream os;
    os << "verdict: " << cls.verdict_name() << "\n";
    if (cls.verdict == ExtensionClass::Verdict::Invalid)
        os << "  reason: " << cls.invalid_message << "\n";
    if (cls.is_local()) {
        auto list = [&](const CVector& v) {
            std::string s;
            for (int k = 0; k < v.size(); ++k) {
                if (k) s += ", ";
                s += "(" + format_sig12(v(k).real()) + ", " + format_sig12(v(k).imag()) + ")";
            }
            return s;
        };
        os << "  diag_A: [" << list(cls.diag_A) << "]\n";
        os << "  diag_B: [" << list(cls.diag_B) << "]\n";
        os << "  transform M (row-major):";
        for (int i = 0; i < cls.transform.rows(); ++i)
            for (int j = 0; j < cls.transform.cols(); ++j)
                os << " (" << format_sig12(cls.transform(i, j).real()) << ", "
                   << format_sig12(cls.transform(i, j).imag()) << ")";
        os << "\n";
    }
    os << "  A invertible: " << (cls.a_invertible ? "yes" : "no") << "\n";
    if (cls.hermitian_H) {
        const CMatrix& H = *cls.hermitian_H;
        os << "  H = A^-1 B (row-major):";
        for (int i = 0; i < H.rows(); ++i)
            for (int j = 0; j < H.cols(); ++j)
                os << " (" << format_sig12(H(i, j).real()) << ", "
                   << format_sig12(H(i, j).imag()) << ")";
        os << "\n  hermitian deviation: " << format_sig12((H - CMatrix(H.adjoint())).norm())
           << "\n";
    }
    return os.str();
}

} // namespace

int run_command(Command cmd, const Scenario& scenario, const RunOptions& opts,
                std::ostream& log) {
    const InteractionConfig config = scenario.build();
    const bool writing = !opts.out_dir.empty();
    fs::path out(opts.out_dir);
    if (writing) {
        fs::create_directories(out);
        write_file(out / "scenario_echo.json", serialize_scenario(scenario));
    }

    const ValidationReport report = validate_pair(config);
    if (cmd == Command::Validate) {
        const std::string text = report.to_text();
        log << text;
        if (writing) write_file(out / "validation.txt", text);
        return report.passed() ? kExitOk : kExitValidationFailure;
    }

    if (cmd == Command::Classify) {
        const ExtensionClass cls = classify_locality(config);
        const std::string text = classification_text(cls);
        log << text;
        if (writing) write_file(out / "classification.txt", text);
        return cls.verdict == ExtensionClass::Verdict::Invalid ? kExitValidationFailure
                                                               : kExitOk;
    }

    if (!report.passed()) {
        log << report.to_text();
        if (writing) write_file(out / "validation.txt", report.to_text());
        return kExitValidationFailure;
    }

    const double step = opts.step_override > 0.0 ? opts.step_override
                        : scenario.step > 0.0   ? scenario.step
                                                : default_step(config);
    const int quad_order =
        opts.quad_order_override > 0 ? opts.quad_order_override : scenario.quad_order;

    if (cmd == Command::PropagationTest) {
        ExperimentConfig ec = scenario.experiment(config);
        ec.step = step;
        ec.quad_order = quad_order;
        PropagationReport prop;
        try {
            prop = propagation_experiment(ec);
        } catch (const std::invalid_argument& e) {
            log << "scenario rejected: " << e.what() << "\n";
            return kExitValidationFailure;
        }
        if (writing) write_file(out / "report.json", prop.to_json());
        log << "verdict: " << (prop.bound_respected ? "bound-respected" : "bound-violated")
            << "\n";
        if (!prop.bound_respected)
            log << "  first violation at t=" << format_sig12(prop.violation_time)
                << ": diameter " << format_sig12(prop.violation_diameter) << " > bound "
                << format_sig12(prop.violation_bound) << " + slack "
                << format_sig12(prop.slack) << "\n";
        return prop.bound_respected ? kExitOk : kExitBoundViolated;
    }

    // simulate
    const InitialData data = scenario.effective_data();
    const auto issues = admissibility_issues(config, data);
    if (!issues.empty()) {
        for (const auto& s : issues) log << "inadmissible: " << s << "\n";
        return kExitValidationFailure;
    }
    const SphericalQuadrature quad(quad_order);
    const ForcingTrace trace =
        ForcingTrace::build(data, config, scenario.horizon, step, quad);
    std::optional<ChargeHistory> solved;
    try {
        solved.emplace(solve_charges(config, trace, scenario.horizon, step));
    } catch (const std::invalid_argument& e) {
        log << "scenario rejected: " << e.what() << "\n";
        return kExitValidationFailure;
    }
    const ChargeHistory& history = *solved;
    const double residual = bc_residual(config, history, trace);
    const double delta = default_activation_threshold(history);
    const auto taus = activation_times(history, delta);

    if (writing) write_charges_csv(history, (out / "charges.csv").string());

    std::vector<double> times = scenario.snapshot_times;
    if (times.empty()) {
        times.push_back(0.0);
        double tau1 = std::numeric_limits<double>::infinity();
        for (double tau : taus) tau1 = std::min(tau1, tau);
        for (double t = std::isfinite(tau1) ? tau1 + 0.5 : 1.0;
             t <= scenario.horizon + 1e-12; t += 1.0)
            times.push_back(t);
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    std::ostringstream summary;
    summary << "scenario: " << scenario.name << "\n";
    summary << "points: " << config.size() << "\n";
    summary << "step: " << format_sig12(step) << "\n";
    summary << "nodes: " << history.node_count() << "\n";
    summary << "bc_residual: " << format_sig12(residual) << "\n";
    summary << "activation_threshold: " << format_sig12(delta) << "\n";
    summary << "activation_times:";
    for (double tau : taus)
        summary << " " << (std::isfinite(tau) ? format_sig12(tau) : "inf");
    summary << "\n";

    const double eps = [&] {
        const FieldSnapshot snap0 = sample_field(config, data, history, 0.0,
                                                 scenario.grid, scenario.horizon, quad);
        return std::max(scenario.support_rel * snap0.max_abs(), 1e-300);
    }();
    for (double t : times) {
        if (t < 0.0 || t > scenario.horizon + 1e-12) continue;
        const FieldSnapshot snap =
            sample_field(config, data, history, t, scenario.grid, scenario.horizon, quad);
        const double diam = support_diameter(snap, eps);
        summary << "snapshot t=" << format_sig12(t)
                << " active=" << snap.count_above(eps)
                << " diameter=" << format_sig12(diam) << "\n";
        if (writing)
            write_snapshot_csv(snap, eps,
                               (out / ("snapshot_t" + snapshot_tag(t) + ".csv")).string());
    }
    log << summary.str();
    if (writing) write_file(out / "summary.txt", summary.str());
    return kExitOk;
}

} // namespace pointwave
