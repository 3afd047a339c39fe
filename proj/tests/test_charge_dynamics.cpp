#include <doctest.h>

#include "oracles.hpp"
#include "pointwave/charge_dynamics.hpp"

#include <cmath>

using namespace pointwave;

namespace {

InteractionConfig scalar_config(double alpha) {
    CMatrix a(1, 1), b(1, 1);
    a << 1.0;
    b << alpha;
    return build_config({Vec3(0, 0, 0)}, a, b);
}

// Bump at distance 1.5 from the single interaction point.
InitialData offset_bump() {
    InitialData d;
    d.position_bumps.push_back({Vec3(2, 0, 0), 0.5, 1.0});
    return d;
}

} // namespace

TEST_CASE("ChargeHistory dense output basics") {
    ChargeHistory hist(1, 0.5, 4);
    CVector v(1), w(1);
    for (int i = 0; i < 4; ++i) {
        v << Cplx(i * i, -1.0 * i);
        w << Cplx(2.0 * i, 1.0);
        hist.push_node(v, w);
    }
    CHECK(hist.value(-3.0, 0) == Cplx(0.0));
    CHECK(hist.derivative(-0.01, 0) == Cplx(0.0));
    for (int i = 0; i < 4; ++i) {
        CHECK(hist.value(i * 0.5, 0) == hist.value_at_node(i, 0));
        CHECK(hist.derivative(i * 0.5, 0) == hist.deriv_at_node(i, 0));
    }
    // Interpolant is C^1: values from adjacent intervals meet at the node.
    const double eps = 1e-6;
    const Cplx below = hist.value(1.0 - eps, 0);
    const Cplx above = hist.value(1.0 + eps, 0);
    CHECK(std::abs(below - above) <= 1e-4);
    CHECK_THROWS_AS(hist.value(2.0, 0), std::out_of_range);   // beyond the last node
}

TEST_CASE("zero forcing keeps the charges identically zero") {
    auto cfg = scalar_config(2.0);
    const SphericalQuadrature quad;
    const auto trace = ForcingTrace::build(InitialData{}, cfg, 2.0, 0.01, quad);
    const auto hist = solve_charges(cfg, trace, 2.0, 0.01);
    for (int i = 0; i < hist.node_count(); ++i) CHECK(hist.value_at_node(i, 0) == Cplx(0.0));
    CHECK(bc_residual(cfg, hist, trace) == 0.0);
    for (double tau : activation_times(hist, 1e-12))
        CHECK(std::isinf(tau));
}

TEST_CASE("scalar charge equation matches the Duhamel oracle") {
    const double h = 0.005, horizon = 4.0;
    const auto data = offset_bump();
    const SphericalQuadrature quad;
    const BumpProfile& bump = data.position_bumps[0];
    auto forcing = [&](double s) {
        return radial_oracle(bump, InitialKind::Position, s, 2.0);
    };
    for (double alpha : {0.0, 1.0}) {
        auto cfg = scalar_config(alpha);
        const auto trace = ForcingTrace::build(data, cfg, horizon, h, quad);
        const auto hist = solve_charges(cfg, trace, horizon, h);
        const auto exact = oracles::duhamel_charge(forcing, alpha, h, hist.node_count());
        double worst = 0.0;
        for (int i = 0; i < hist.node_count(); ++i)
            worst = std::max(worst, std::abs(hist.value_at_node(i, 0) - exact[i]));
        CHECK(worst <= 1e-6);

        // The boundary-condition residual is small and shrinks with the step.
        // For alpha = 0 the dense output satisfies the equation exactly at the
        // midpoints (the Hermite slope reproduces the Simpson combination), so
        // both residuals sit at the roundoff floor.
        const double res = bc_residual(cfg, hist, trace);
        CHECK(res <= 1e-6);
        const auto trace2 = ForcingTrace::build(data, cfg, horizon, h / 2.0, quad);
        const auto hist2 = solve_charges(cfg, trace2, horizon, h / 2.0);
        const double res2 = bc_residual(cfg, hist2, trace2);
        CHECK((res2 < res || (res <= 1e-12 && res2 <= 1e-12)));
    }
}

TEST_CASE("RK4 order on a manufactured smooth forcing") {
    const double alpha = 1.0;
    auto cfg = scalar_config(alpha);
    const Cplx amp(0.4, 0.3);
    auto exact = [&](double t) {
        return amp * std::sin(t) * std::sin(t) * std::exp(Cplx(0, 1) * t);
    };
    auto exact_dot = [&](double t) {
        const Cplx osc = std::exp(Cplx(0, 1) * t);
        return amp * (std::sin(2.0 * t) * osc +
                      std::sin(t) * std::sin(t) * Cplx(0, 1) * osc);
    };
    auto forcing = [&](double t) { return exact_dot(t) / kFourPi + alpha * exact(t); };

    auto run = [&](double h) {
        const double horizon = 1.4;
        const int nodes = static_cast<int>(std::llround(horizon / h)) + 1;
        std::vector<Cplx> samples(nodes);
        for (int i = 0; i < nodes; ++i) samples[i] = forcing(i * h);
        const auto trace = ForcingTrace::from_samples(h, 1, std::move(samples));
        const auto hist = solve_charges(cfg, trace, horizon, h);
        double worst = 0.0;
        for (int i = 0; i < hist.node_count(); ++i)
            worst = std::max(worst, std::abs(hist.value_at_node(i, 0) - exact(i * h)));
        return worst;
    };

    const double coarse = run(0.005);
    const double fine = run(0.0025);
    CHECK(coarse / fine >= 12.0);
}

TEST_CASE("two-point causality: the far charge stays silent") {
    CMatrix H = CMatrix::Identity(2, 2);
    auto cfg = build_config({Vec3(0, 0, 0), Vec3(3, 0, 0)}, CMatrix::Identity(2, 2), H);
    InitialData d;
    d.position_bumps.push_back({Vec3(-1.5, 0, 0), 0.5, 1.0});
    const SphericalQuadrature quad;
    const double h = 0.01, horizon = 4.5;
    const auto trace = ForcingTrace::build(d, cfg, horizon, h, quad);
    const auto hist = solve_charges(cfg, trace, horizon, h);

    // dist(y1, S0) = 1, dist(y2, S0) = 4, delay d12 = 3: nothing at all before
    // t = 1, and zeta_2 only after min(4, 1 + 3) = 4.
    for (int i = 0; i < hist.node_count(); ++i) {
        const double t = i * h;
        if (t < 1.0 - 1e-12) {
            CHECK(std::abs(hist.value_at_node(i, 0)) <= 1e-9);
            CHECK(std::abs(hist.value_at_node(i, 1)) <= 1e-9);
        } else if (t < 4.0 - 2.0 * h) {
            CHECK(std::abs(hist.value_at_node(i, 1)) <= 1e-9);
        }
    }
    // And zeta_1 does move once the wave arrives.
    CHECK(hist.max_abs_value() > 1e-4);

    // Activation bracketing for the near point.
    const auto taus = activation_times(hist, default_activation_threshold(hist));
    CHECK(taus[0] >= 1.0);
    CHECK(taus[0] <= 1.0 + 2.0 * h);
}

TEST_CASE("solver preconditions") {
    // Step larger than the smallest delay.
    auto cfg = build_config({Vec3(0, 0, 0), Vec3(0.05, 0, 0)}, CMatrix::Identity(2, 2),
                            CMatrix::Identity(2, 2));
    const SphericalQuadrature quad;
    const auto trace = ForcingTrace::build(InitialData{}, cfg, 1.0, 0.1, quad);
    CHECK_THROWS_WITH_AS(solve_charges(cfg, trace, 1.0, 0.1),
                         doctest::Contains("delay"), std::invalid_argument);

    // Singular A is rejected with the pencil message.
    CMatrix A = CMatrix::Zero(1, 1), B = CMatrix::Identity(1, 1);
    auto singular = build_config({Vec3(0, 0, 0)}, A, B);
    const auto tr1 = ForcingTrace::build(InitialData{}, singular, 1.0, 0.01, quad);
    CHECK_THROWS_WITH_AS(solve_charges(singular, tr1, 1.0, 0.01),
                         doctest::Contains("pencil"), std::invalid_argument);

    // Invalid pairs are rejected up front.
    CMatrix ai(1, 1), bi(1, 1);
    ai << 1.0;
    bi << Cplx(0, 1);
    auto invalid = build_config({Vec3(0, 0, 0)}, ai, bi);
    const auto tr2 = ForcingTrace::build(InitialData{}, invalid, 1.0, 0.01, quad);
    CHECK_THROWS_AS(solve_charges(invalid, tr2, 1.0, 0.01), std::invalid_argument);
}

TEST_CASE("global convergence against the oracle across kinks") {
    const double alpha = 1.0;
    auto cfg = scalar_config(alpha);
    const auto data = offset_bump();
    const SphericalQuadrature quad;
    const BumpProfile& bump = data.position_bumps[0];
    auto forcing = [&](double s) {
        return radial_oracle(bump, InitialKind::Position, s, 2.0);
    };
    auto err = [&](double h) {
        const auto trace = ForcingTrace::build(data, cfg, 4.0, h, quad);
        const auto hist = solve_charges(cfg, trace, 4.0, h);
        const auto exact = oracles::duhamel_charge(forcing, alpha, h, hist.node_count());
        double worst = 0.0;
        for (int i = 0; i < hist.node_count(); ++i)
            worst = std::max(worst, std::abs(hist.value_at_node(i, 0) - exact[i]));
        return worst;
    };
    const double e1 = err(0.01);
    const double e2 = err(0.005);
    CHECK(e1 / e2 >= 3.9);   // at least second order through the kinks
}
