#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "orbitcert/builtin.hpp"
#include "orbitcert/degree.hpp"
#include "orbitcert/errors.hpp"
#include "test_util.hpp"

using namespace orbitcert;
using namespace orbitcert::testutil;

TEST_CASE("find_zeros on the cubic") {
    const auto sys = builtin_system("cubic1d");
    const auto zeros = find_zeros(sys.manifold, sys.g, sys.region, sys.search);
    REQUIRE(zeros.size() == 3);
    CHECK(zeros[0].point[0] == doctest::Approx(-1.0));
    CHECK(zeros[1].point[0] == doctest::Approx(0.0));
    CHECK(zeros[2].point[0] == doctest::Approx(1.0));
    CHECK(zeros[0].local_sign == -1);
    CHECK(zeros[1].local_sign == 1);
    CHECK(zeros[2].local_sign == -1);
    for (const auto& z : zeros) CHECK(z.residual <= sys.search.zero_tol);
}

TEST_CASE("find_zeros on the sphere height field") {
    const auto sys = builtin_system("sphere_height");
    const auto zeros = find_zeros(sys.manifold, sys.g, sys.region, sys.search);
    REQUIRE(zeros.size() == 2);
    // one zero per pole, both of local sign +1
    bool north = false;
    bool south = false;
    for (const auto& z : zeros) {
        if ((z.point - vec3(0, 0, 1)).norm() < 1e-6) north = true;
        if ((z.point - vec3(0, 0, -1)).norm() < 1e-6) south = true;
        CHECK(z.local_sign == 1);
    }
    CHECK(north);
    CHECK(south);
}

TEST_CASE("zero-free regions yield empty lists") {
    const auto line = EmbeddedManifold::euclidean(1);
    const TangentField g([](const Vec& p) { return vec1(-p[0]); });
    const auto zeros = find_zeros(line, g, RegionPredicate::interval(1.0, 2.0));
    CHECK(zeros.empty());
}

TEST_CASE("degree values and negation parity") {
    SUBCASE("planar rotation") {
        const auto plane = EmbeddedManifold::euclidean(2);
        const TangentField g([](const Vec& p) { return vec2(p[1], -p[0]); });
        const TangentField neg([](const Vec& p) { return vec2(-p[1], p[0]); });
        const RegionPredicate box = RegionPredicate::box(vec2(-1, -1), vec2(1, 1));
        CHECK(degree(plane, g, box) == 1);
        CHECK(degree(plane, neg, box) == 1);  // (-1)^2 = +1 in even dimension
    }
    SUBCASE("cubic") {
        const auto sys = builtin_system("cubic1d");
        const TangentField neg([&sys](const Vec& p) { return Vec(-sys.g(p)); });
        CHECK(degree(sys.manifold, sys.g, sys.region, sys.search) == -1);
        CHECK(degree(sys.manifold, neg, sys.region, sys.search) == 1);
    }
    SUBCASE("sphere total degree equals 2") {
        const auto sys = builtin_system("sphere_height");
        CHECK(degree(sys.manifold, sys.g, sys.region, sys.search) == 2);
    }
}

TEST_CASE("degree axioms: excision and additivity on a planted field") {
    const auto line = EmbeddedManifold::euclidean(1);
    const auto sys = builtin_system("cubic1d");
    const int whole = degree(line, sys.g, RegionPredicate::interval(-2.0, 2.0));
    CHECK(whole == degree(line, sys.g, RegionPredicate::interval(-1.2, 1.2)));
    const int left = degree(line, sys.g, RegionPredicate::interval(-2.0, -0.5));
    const int right = degree(line, sys.g, RegionPredicate::interval(-0.5, 2.0));
    CHECK(whole == left + right);
}

TEST_CASE("winding oracle") {
    const TangentField identity([](const Vec& p) { return p; });
    const TangentField rotation([](const Vec& p) { return vec2(p[1], -p[0]); });
    const TangentField square([](const Vec& p) {
        return vec2(p[0] * p[0] - p[1] * p[1], 2.0 * p[0] * p[1]);
    });
    const auto circle = circle_polyline(vec2(0, 0), 1.0);
    CHECK(winding_degree_planar(identity, circle) == 1);
    CHECK(winding_degree_planar(rotation, circle) == 1);
    CHECK(winding_degree_planar(square, circle) == 2);

    SUBCASE("vanishing on the boundary is rejected") {
        bool threw = false;
        try {
            (void)winding_degree_planar(identity, circle_polyline(vec2(1, 0), 1.0));
        } catch (const Error& err) {
            threw = err.code() == ErrorCode::VanishingOnBoundary;
        }
        CHECK(threw);
    }
    SUBCASE("agreement with the zero-sum degree") {
        const auto plane = EmbeddedManifold::euclidean(2);
        const RegionPredicate box = RegionPredicate::box(vec2(-1.5, -1.5), vec2(1.5, 1.5));
        CHECK(degree(plane, rotation, box) ==
              winding_degree_planar(rotation, box_polyline(box.bbox)));
    }
}

TEST_CASE("poincare-hopf checks") {
    SUBCASE("sphere") {
        const auto sys = builtin_system("sphere_height");
        const auto report = check_poincare_hopf(sys.manifold, sys.g, sys.search);
        CHECK(report.pass);
        CHECK(report.degree == 2);
        CHECK(report.euler_characteristic == 2);
    }
    SUBCASE("torus with a zero-free field") {
        const auto sys = builtin_system("torus_flow");
        const auto report = check_poincare_hopf(sys.manifold, sys.g, sys.search);
        CHECK(report.pass);
        CHECK(report.degree == 0);
        CHECK(report.zeros.empty());
    }
    SUBCASE("seeding failure on the sphere is reported as a violation") {
        // A single seed sits at the bbox center, which cannot be projected
        // onto the sphere; an empty zero list must fail the check rather
        // than pass as 'degree zero'.
        const auto sys = builtin_system("sphere_height");
        ZeroSearchOptions sparse = sys.search;
        sparse.seeds_per_axis = 1;
        const auto report = check_poincare_hopf(sys.manifold, sys.g, sparse);
        CHECK(!report.pass);
        CHECK(report.zeros.empty());
        CHECK(report.message.find("seeding") != std::string::npos);
    }
}

TEST_CASE("degenerate and boundary zeros abort with diagnostics") {
    const auto line = EmbeddedManifold::euclidean(1);
    SUBCASE("double zero") {
        const TangentField g([](const Vec& p) { return vec1(p[0] * p[0]); });
        bool threw = false;
        try {
            (void)find_zeros(line, g, RegionPredicate::interval(-1.0, 1.0));
        } catch (const Error& err) {
            threw = err.code() == ErrorCode::DegenerateZero;
        }
        CHECK(threw);
    }
    SUBCASE("zero on the region boundary") {
        const auto sys = builtin_system("cubic1d");
        bool threw = false;
        try {
            (void)find_zeros(sys.manifold, sys.g, RegionPredicate::interval(-1.0, 2.0),
                             sys.search);
        } catch (const Error& err) {
            threw = err.code() == ErrorCode::BoundaryZero;
        }
        CHECK(threw);
    }
}
