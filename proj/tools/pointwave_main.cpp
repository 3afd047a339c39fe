#include "pointwave/run_command.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir;
    double step = -1.0;
    int quad_order = -1;
    unsigned seed = 0;   // accepted for interface stability; the engine is deterministic
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool out_required) {
    cmd->add_option("--scenario", opts.scenario_path, "Scenario file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    auto* out = cmd->add_option("--out", opts.out_dir, "Output directory for artifacts");
    if (out_required) out->required();
    cmd->add_option("--step", opts.step, "Override the integration step h");
    cmd->add_option("--quad-order", opts.quad_order, "Override the quadrature order");
    cmd->add_option("--seed", opts.seed, "Unused; kept for script compatibility");
}

int dispatch(pointwave::Command cmd, const CommonOpts& opts) {
    const pointwave::Scenario sc = pointwave::load_scenario(opts.scenario_path);
    pointwave::RunOptions ro;
    ro.out_dir = opts.out_dir;
    ro.step_override = opts.step;
    ro.quad_order_override = opts.quad_order;
    return pointwave::run_command(cmd, sc, ro, std::cout);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wave propagation with point interactions: boundary-pair "
                 "classification, retarded charge dynamics and finite-speed "
                 "experiments"};
    app.require_subcommand(1);

    CommonOpts v_opts, c_opts, s_opts, p_opts;
    auto* validate =
        app.add_subcommand("validate", "Check the boundary matrix pair (A, B)");
    add_common(validate, v_opts, false);
    auto* classify =
        app.add_subcommand("classify", "Classify the boundary conditions as local/nonlocal");
    add_common(classify, c_opts, false);
    auto* simulate =
        app.add_subcommand("simulate", "Integrate the charges and sample field snapshots");
    add_common(simulate, s_opts, true);
    auto* prop = app.add_subcommand("propagation-test",
                                    "Run the finite-speed-of-propagation experiment");
    add_common(prop, p_opts, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return dispatch(pointwave::Command::Validate, v_opts);
        if (classify->parsed()) return dispatch(pointwave::Command::Classify, c_opts);
        if (simulate->parsed()) return dispatch(pointwave::Command::Simulate, s_opts);
        if (prop->parsed()) return dispatch(pointwave::Command::PropagationTest, p_opts);
    } catch (const pointwave::ScenarioError& e) {
        std::cerr << e.what() << "\n";
        return pointwave::kExitValidationFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
