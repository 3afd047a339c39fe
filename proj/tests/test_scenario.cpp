#include <doctest.h>

#include "pointwave/run_command.hpp"
#include "pointwave/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pointwave;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "name": "minimal",
  "points": [[0, 0, 0]],
  "boundary": {"H": [[2, 0]]},
  "initial_data": {
    "position_bumps": [{"center": [2, 0, 0], "radius": 0.5, "amplitude": [1, 0]}]
  },
  "time": {"horizon": 3.0}
})";

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("parse_scenario: shorthand, defaults, complex encoding") {
    const Scenario sc = parse_scenario(kMinimal);
    CHECK(sc.name == "minimal");
    REQUIRE(sc.points.size() == 1);
    CHECK(sc.A(0, 0) == Cplx(1.0));
    CHECK(sc.B(0, 0) == Cplx(2.0));
    CHECK(sc.from_h_shorthand);
    CHECK(sc.step < 0.0);                       // defaulted later
    CHECK(sc.grid.spacing == 0.25);
    CHECK(sc.grid.exclusion_radius == 0.1);
    CHECK(sc.grid.shell_radii.size() == 9);
    CHECK(sc.quad_order == SphericalQuadrature::kDefaultOrder);
    CHECK(sc.direction == TimeDirection::Forward);
    CHECK(sc.data.charges0.size() == 1);
    CHECK(sc.data.charges0(0) == Cplx(0.0));

    const Scenario imag = parse_scenario(R"({
      "points": [[0,0,0]],
      "boundary": {"H": [[0, 1]]},
      "time": {"horizon": 1.0}
    })");
    CHECK(imag.B(0, 0) == Cplx(0.0, 1.0));
}

TEST_CASE("parse_scenario: errors carry field paths") {
    CHECK_THROWS_WITH_AS(parse_scenario(R"({"boundary": {"H": []}, "time": {"horizon": 1}})"),
                         doctest::Contains("points"), ScenarioError);
    CHECK_THROWS_WITH_AS(
        parse_scenario(R"({"points": [[0,0,0],[0,0,0]], "boundary": {"H": [[1,0],[0,0],[0,0],[1,0]]}, "time": {"horizon": 1}})"),
        doctest::Contains("duplicate"), ScenarioError);
    CHECK_THROWS_WITH_AS(
        parse_scenario(R"({"points": [[0,0,0]], "boundary": {"H": [[1,0],[2,0]]}, "time": {"horizon": 1}})"),
        doctest::Contains("boundary.H"), ScenarioError);
    CHECK_THROWS_WITH_AS(
        parse_scenario(R"({"points": [[0,0,0]], "boundary": {"H": [[1,0]]}, "time": {"horizon": -2}})"),
        doctest::Contains("time.horizon"), ScenarioError);
    CHECK_THROWS_WITH_AS(parse_scenario("{nope"), doctest::Contains("syntax"), ScenarioError);
}

TEST_CASE("scenario round-trips through serialize/parse") {
    const Scenario sc = parse_scenario(kMinimal);
    const std::string echoed = serialize_scenario(sc);
    const Scenario again = parse_scenario(echoed);
    CHECK(again.name == sc.name);
    CHECK(again.points.size() == sc.points.size());
    CHECK((again.A - sc.A).norm() == 0.0);
    CHECK((again.B - sc.B).norm() == 0.0);
    CHECK(again.horizon == sc.horizon);
    CHECK(again.grid.spacing == sc.grid.spacing);
    CHECK(again.grid.shell_radii == sc.grid.shell_radii);
    CHECK(again.quad_order == sc.quad_order);
    CHECK(again.support_rel == sc.support_rel);
    CHECK(again.data.position_bumps.size() == 1);
    CHECK(again.data.position_bumps[0].radius == sc.data.position_bumps[0].radius);
    // Defaults are materialized in the echo.
    CHECK(echoed.find("\"spacing\"") != std::string::npos);
    CHECK(echoed.find("\"thresholds\"") != std::string::npos);
}

TEST_CASE("run_command: validate and classify") {
    std::ostringstream log;
    const Scenario sc = parse_scenario(kMinimal);
    CHECK(run_command(Command::Validate, sc, {}, log) == kExitOk);
    CHECK(log.str().find("overall: PASS") != std::string::npos);

    // The disguised-diagonal pair classifies Local with diagonal ratios 2, 3.
    const Scenario pair = parse_scenario(R"({
      "name": "disguised",
      "points": [[0,0,0],[3,0,0]],
      "boundary": {"A": [[1,0],[1,0],[1,0],[-1,0]],
                    "B": [[2,0],[3,0],[2,0],[-3,0]]},
      "time": {"horizon": 1.0}
    })");
    std::ostringstream log2;
    CHECK(run_command(Command::Classify, pair, {}, log2) == kExitOk);
    CHECK(log2.str().find("Local") != std::string::npos);
    CHECK(log2.str().find("(2, 0)") != std::string::npos);
    CHECK(log2.str().find("(3, 0)") != std::string::npos);

    const Scenario invalid = parse_scenario(R"({
      "points": [[0,0,0]],
      "boundary": {"A": [[1,0]], "B": [[0,1]]},
      "time": {"horizon": 1.0}
    })");
    std::ostringstream log3;
    CHECK(run_command(Command::Validate, invalid, {}, log3) == kExitValidationFailure);
    CHECK(run_command(Command::Classify, invalid, {}, log3) == kExitValidationFailure);
}

TEST_CASE("run_command: simulate writes deterministic artifacts") {
    const fs::path out = fs::path("scenario_cmd_out");
    fs::remove_all(out);
    Scenario sc = parse_scenario(R"({
      "name": "quiet",
      "points": [[0,0,0]],
      "boundary": {"H": [[1, 0]]},
      "time": {"horizon": 0.5, "step": 0.01},
      "grid": {"margin": 1.0},
      "snapshot_times": [0.0, 0.5]
    })");
    RunOptions opts;
    opts.out_dir = out.string();
    std::ostringstream log;
    CHECK(run_command(Command::Simulate, sc, opts, log) == kExitOk);
    CHECK(fs::exists(out / "scenario_echo.json"));
    CHECK(fs::exists(out / "summary.txt"));

    // Zero data: every charge row is exactly zero.
    const std::string csv = slurp(out / "charges.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,re_zeta_1,im_zeta_1");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        const auto c1 = line.find(',');
        CHECK(line.substr(c1) == ",0,0");
    }
    CHECK(rows == 51);

    // Determinism: a second run produces byte-identical output.
    const fs::path out2 = fs::path("scenario_cmd_out2");
    fs::remove_all(out2);
    RunOptions opts2;
    opts2.out_dir = out2.string();
    std::ostringstream log2;
    CHECK(run_command(Command::Simulate, sc, opts2, log2) == kExitOk);
    CHECK(slurp(out / "charges.csv") == slurp(out2 / "charges.csv"));
    CHECK(slurp(out / "scenario_echo.json") == slurp(out2 / "scenario_echo.json"));
    fs::remove_all(out);
    fs::remove_all(out2);
}

TEST_CASE("run_command: propagation verdict exit codes") {
    Scenario sc = parse_scenario(R"({
      "name": "nonlocal-small",
      "points": [[0,0,0],[4,0,0]],
      "boundary": {"H": [[0,0],[1,0],[1,0],[0,0]]},
      "initial_data": {
        "position_bumps": [{"center": [-1.5,0,0], "radius": 0.5, "amplitude": [1,0]}]
      },
      "time": {"horizon": 4.0, "step": 0.01},
      "grid": {"margin": 4.0},
      "snapshot_times": [0.0, 2.5]
    })");
    const fs::path out = fs::path("scenario_prop_out");
    fs::remove_all(out);
    RunOptions opts;
    opts.out_dir = out.string();
    std::ostringstream log;
    CHECK(run_command(Command::PropagationTest, sc, opts, log) == kExitBoundViolated);
    CHECK(fs::exists(out / "report.json"));
    const std::string report = slurp(out / "report.json");
    CHECK(report.find("bound-violated") != std::string::npos);
    CHECK(report.find("NonLocal") != std::string::npos);
    fs::remove_all(out);

    // Inadmissible scenario: validation exit code.
    Scenario bad = sc;
    bad.data.position_bumps[0].center = Vec3(0.1, 0, 0);
    std::ostringstream log2;
    CHECK(run_command(Command::PropagationTest, bad, {}, log2) == kExitValidationFailure);
}

TEST_CASE("backward direction reflects the velocity data") {
    Scenario fwd = parse_scenario(R"({
      "points": [],
      "boundary": {},
      "initial_data": {
        "velocity_bumps": [{"center": [0,0,0], "radius": 1.0, "amplitude": [2, -1]}]
      },
      "time": {"horizon": 1.0, "direction": "backward"}
    })");
    const InitialData eff = fwd.effective_data();
    REQUIRE(eff.velocity_bumps.size() == 1);
    CHECK(eff.velocity_bumps[0].amplitude == Cplx(-2.0, 1.0));
    // Parse/serialize keeps the declared direction.
    const Scenario again = parse_scenario(serialize_scenario(fwd));
    CHECK(again.direction == TimeDirection::Backward);
}
