#pragma once

#include "pointwave/wavefield.hpp"

#include <string>

namespace pointwave {

/// Scenario parse/validation failure; the message carries the field path.
class ScenarioError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class TimeDirection { Forward, Backward };

/// User-facing simulation description, read from a JSON scenario file.
/// Complex entries are [re, im] pairs; matrices are flat row-major arrays of
/// such pairs. The boundary pair is given either explicitly as A and B or by
/// the shorthand H, which expands to (I, H).
struct Scenario {
    std::string name;
    std::vector<Vec3> points;
    CMatrix A;
    CMatrix B;
    bool from_h_shorthand = false;
    InitialData data;
    double horizon = 1.0;
    double step = -1.0;                    // < 0: defaulted from the geometry
    TimeDirection direction = TimeDirection::Forward;
    GridSpec grid;
    std::vector<double> snapshot_times;    // empty: default schedule
    double support_rel = 1e-6;
    double activation_rel = 1e-7;
    double activation_floor = 1e-12;
    int quad_order = SphericalQuadrature::kDefaultOrder;

    InteractionConfig build() const { return build_config(points, A, B); }
    /// Initial data with the backward-time reflection applied
    /// (phi(-t; u, v) = phi(t; u, -v)).
    InitialData effective_data() const;
    ExperimentConfig experiment(const InteractionConfig& config) const;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Round-trips with parse_scenario; every defaulted field is materialized.
std::string serialize_scenario(const Scenario& sc);

} // namespace pointwave
