#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "orbitcert/errors.hpp"
#include "orbitcert/manifold.hpp"
#include "test_util.hpp"

using namespace orbitcert;
using namespace orbitcert::testutil;

TEST_CASE("euclidean space: projection and retraction are trivial") {
    const auto m = EmbeddedManifold::euclidean(3);
    const Vec p = vec3(0.3, -1.0, 2.0);
    const Vec v = vec3(1.0, 2.0, 3.0);
    CHECK((m.project_tangent(p, v) - v).norm() == 0.0);
    CHECK((m.retract(p, v) - (p + v)).norm() == 0.0);
    CHECK(m.tangent_basis(p).isApprox(Mat::Identity(3, 3)));
    CHECK(m.dim() == 3);
    CHECK(m.on_manifold(p));
}

TEST_CASE("sphere tangent projection") {
    const auto sphere = EmbeddedManifold::sphere(3);
    SUBCASE("at the pole the tangent plane is z = 0") {
        const Vec w = sphere.project_tangent(vec3(0, 0, 1), vec3(1, 2, 3));
        CHECK(w[0] == doctest::Approx(1.0));
        CHECK(w[1] == doctest::Approx(2.0));
        CHECK(std::abs(w[2]) < 1e-12);
    }
    SUBCASE("subtracting the radial component, checked by w.p = 0") {
        const Vec p = vec3(1, 0, 0);
        const Vec w = sphere.project_tangent(p, vec3(1, 1, 1));
        CHECK(std::abs(w.dot(p)) < 1e-12);
        CHECK(w[1] == doctest::Approx(1.0));
        CHECK(w[2] == doctest::Approx(1.0));
        CHECK(std::abs(w[0]) < 1e-12);
    }
}

TEST_CASE("projection is idempotent") {
    const auto sphere = EmbeddedManifold::sphere(4);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec p = random_vec(rng, 4).normalized();
        const Vec v = random_vec(rng, 4, -2.0, 2.0);
        const Vec once = sphere.project_tangent(p, v);
        const Vec twice = sphere.project_tangent(p, once);
        CHECK((twice - once).norm() <= 10.0 * sphere.on_tolerance * (1.0 + v.norm()));
    }
}

TEST_CASE("sphere retraction is the closest-point projection") {
    const auto sphere = EmbeddedManifold::sphere(3);
    const double eps = 1e-2;
    const Vec q = sphere.retract(vec3(1, 0, 0), vec3(0, eps, 0));
    const double scale = 1.0 / std::sqrt(1.0 + eps * eps);
    CHECK((q - vec3(scale, eps * scale, 0)).norm() < 1e-12);
    CHECK((sphere.retract(vec3(1, 0, 0), vec3(0, 0, 0)) - vec3(1, 0, 0)).norm() == 0.0);
}

TEST_CASE("retraction is first-order consistent: residual shrinks ~4x under halving") {
    const auto sphere = EmbeddedManifold::sphere(3);
    const Vec p = vec3(0, 0, 1);
    const Vec dir = vec3(1, 1, 0).normalized();
    double prev = -1.0;
    for (double len : {0.2, 0.1, 0.05, 0.025}) {
        const Vec v = len * dir;
        const double residual = (sphere.retract(p, v) - (p + v)).norm();
        if (prev > 0.0) {
            const double ratio = prev / residual;
            CHECK(ratio > 3.0);
            CHECK(ratio < 5.0);
        }
        prev = residual;
    }
}

TEST_CASE("tangent bases are orthonormal and span the right space") {
    std::mt19937_64 rng(11);
    const auto sphere = EmbeddedManifold::sphere(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec p = random_vec(rng, 3).normalized();
        const Mat basis = sphere.tangent_basis(p);
        REQUIRE(basis.cols() == 2);
        CHECK((basis.transpose() * basis - Mat::Identity(2, 2)).norm() < 1e-10);
        CHECK((basis.transpose() * p).norm() < 1e-10);
    }
    SUBCASE("pole basis spans z = 0") {
        const Mat basis = sphere.tangent_basis(vec3(0, 0, 1));
        CHECK(std::abs(basis(2, 0)) < 1e-12);
        CHECK(std::abs(basis(2, 1)) < 1e-12);
    }
    SUBCASE("circle in the plane") {
        const auto circle = EmbeddedManifold::sphere(2);
        const Mat basis = circle.tangent_basis(vec2(1, 0));
        REQUIRE(basis.cols() == 1);
        CHECK(std::abs(std::abs(basis(1, 0)) - 1.0) < 1e-12);
        CHECK(std::abs(basis(0, 0)) < 1e-12);
    }
    SUBCASE("deterministic for a fixed point") {
        const Vec p = vec3(0.6, 0.48, 0.64).normalized();
        CHECK(sphere.tangent_basis(p).isApprox(sphere.tangent_basis(p)));
    }
}

TEST_CASE("torus constraint and rank deficiency on the axis") {
    const auto torus = EmbeddedManifold::torus2(2.0, 0.5);
    CHECK(torus.on_manifold(vec3(2.5, 0, 0)));
    CHECK(torus.on_manifold(vec3(2.0, 0, 0.5)));
    CHECK(!torus.on_manifold(vec3(2.0, 0, 0.6)));
    CHECK_THROWS_AS((void)torus.project_tangent(vec3(0, 0, 0.2), vec3(1, 0, 0)), Error);
}

TEST_CASE("point projection: seeds off the manifold") {
    const auto sphere = EmbeddedManifold::sphere(3);
    const auto projected = sphere.project_point(vec3(2.0, 0.0, 0.0));
    REQUIRE(projected.has_value());
    CHECK(((*projected) - vec3(1, 0, 0)).norm() < 1e-8);
    // The center has no closest point: the Gauss-Newton step is singular.
    CHECK(!sphere.project_point(vec3(0, 0, 0)).has_value());
}

TEST_CASE("retraction failure reports RetractionDiverged") {
    auto weird = EmbeddedManifold::sphere(3);
    weird.retract_max_iter = 1;
    bool threw = false;
    try {
        (void)weird.retract(vec3(1, 0, 0), vec3(0, 50.0, 0));
    } catch (const Error& err) {
        threw = err.code() == ErrorCode::RetractionDiverged;
    }
    CHECK(threw);
}
