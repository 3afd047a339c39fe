#include <doctest.h>

#include "pointwave/free_wave.hpp"
#include "pointwave/simd/kernels.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace pointwave;

namespace {

struct Arrays {
    std::vector<double> xs, ys, zs;
};

Arrays random_points(std::mt19937_64& rng, std::size_t n, double span) {
    std::uniform_real_distribution<double> u(-span, span);
    Arrays a;
    a.xs.resize(n);
    a.ys.resize(n);
    a.zs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        a.xs[i] = u(rng);
        a.ys[i] = u(rng);
        a.zs[i] = u(rng);
    }
    return a;
}

} // namespace

TEST_CASE("kernel dispatch resolves to a known table") {
    const auto& active = simd::active_kernels();
    const std::string name = active.name;
    CHECK((name == "scalar" || name == "avx2" || name == "neon"));
    CHECK(simd::kernels_by_name("scalar") != nullptr);
    CHECK(simd::kernels_by_name("nonesuch") == nullptr);
}

TEST_CASE("vector kernels agree with the scalar reference") {
    const auto& vec = simd::active_kernels();
    const auto& ref = simd::scalar_kernels();
    if (std::string(vec.name) == "scalar") return;   // nothing to compare on this CPU

    std::mt19937_64 rng(2024);
    const SphericalQuadrature quad(24);

    for (std::size_t n : {std::size_t(0), std::size_t(1), std::size_t(3),
                          std::size_t(8), std::size_t(17), std::size_t(1000)}) {
        const Arrays pts = random_points(rng, n, 4.0);

        std::vector<double> a(n), b(n);
        vec.bump_values(n, pts.xs.data(), pts.ys.data(), pts.zs.data(), 0.3, -0.2,
                        0.1, 1.0 / (1.7 * 1.7), a.data());
        ref.bump_values(n, pts.xs.data(), pts.ys.data(), pts.zs.data(), 0.3, -0.2,
                        0.1, 1.0 / (1.7 * 1.7), b.data());
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(a[i] - b[i]) <= 1e-12 * (1.0 + std::abs(b[i])));

        std::vector<double> rho(n);
        for (std::size_t i = 0; i < n; ++i)
            rho[i] = std::hypot(pts.xs[i], pts.ys[i], pts.zs[i]);
        std::vector<double> v1(n), g1(n), v2(n), g2(n);
        for (double t : {0.4, 1.0, 2.7}) {
            vec.sphere_band_means(n, rho.data(), t, 1.2, quad.nodes(), quad.weights(),
                                  quad.order(), v1.data(), g1.data());
            ref.sphere_band_means(n, rho.data(), t, 1.2, quad.nodes(), quad.weights(),
                                  quad.order(), v2.data(), g2.data());
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(std::abs(v1[i] - v2[i]) <= 1e-12 * (1.0 + std::abs(v2[i])));
                CHECK(std::abs(g1[i] - g2[i]) <= 1e-12 * (1.0 + std::abs(g2[i])));
            }
        }

        const double d1 = vec.max_pairwise_dist2(n, pts.xs.data(), pts.ys.data(),
                                                 pts.zs.data());
        const double d2 = ref.max_pairwise_dist2(n, pts.xs.data(), pts.ys.data(),
                                                 pts.zs.data());
        CHECK(std::abs(d1 - d2) <= 1e-12 * (1.0 + d2));
    }
}

TEST_CASE("max_pairwise_dist2 reference handles small sets") {
    const auto& ref = simd::scalar_kernels();
    const double xs[] = {0.0, 3.0, 1.0};
    const double ys[] = {0.0, 4.0, 1.0};
    const double zs[] = {0.0, 0.0, 1.0};
    CHECK(ref.max_pairwise_dist2(0, xs, ys, zs) == 0.0);
    CHECK(ref.max_pairwise_dist2(1, xs, ys, zs) == 0.0);
    CHECK(ref.max_pairwise_dist2(2, xs, ys, zs) == doctest::Approx(25.0));
    CHECK(ref.max_pairwise_dist2(3, xs, ys, zs) == doctest::Approx(25.0));
}
