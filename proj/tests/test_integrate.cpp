#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "orbitcert/builtin.hpp"
#include "orbitcert/errors.hpp"
#include "orbitcert/fields.hpp"
#include "orbitcert/integrate.hpp"
#include "test_util.hpp"

using namespace orbitcert;
using namespace orbitcert::testutil;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("normalize_delay") {
    CHECK(!normalize_delay(0.0, 1.0).has_value());
    CHECK(normalize_delay(0.3, 1.0).value() == doctest::Approx(0.3));
    CHECK(normalize_delay(2.5, 1.0).value() == doctest::Approx(0.5));
    CHECK(normalize_delay(1.0, 1.0).value() == doctest::Approx(1.0));
    CHECK(normalize_delay(2.0, 1.0).value() == doctest::Approx(1.0));
    CHECK_THROWS(std::ignore = normalize_delay(-1.0, 1.0));
    CHECK_THROWS(std::ignore = normalize_delay(1.0, 0.0));
}

TEST_CASE("flow_ode closed forms") {
    const auto line = EmbeddedManifold::euclidean(1);
    SUBCASE("zero field is constant") {
        const TangentField g([](const Vec&) { return Vec(Vec::Zero(1)); });
        const Trajectory traj = flow_ode(line, g, vec1(0.7), 0.0, 2.0);
        for (const auto& s : traj.states) CHECK(s[0] == 0.7);
    }
    SUBCASE("exponential decay") {
        const TangentField g([](const Vec& p) { return vec1(-p[0]); });
        const Trajectory traj = flow_ode(line, g, vec1(1.0), 0.0, 1.0);
        CHECK(std::abs(traj.endpoint()[0] - std::exp(-1.0)) < 1e-8);
    }
    SUBCASE("rigid rotation on the sphere returns home") {
        const auto sphere = EmbeddedManifold::sphere(3);
        const TangentField g([](const Vec& p) { return vec3(-p[1], p[0], 0.0); });
        const Trajectory traj = flow_ode(sphere, g, vec3(1, 0, 0), 0.0, 2.0 * kPi);
        CHECK((traj.endpoint() - vec3(1, 0, 0)).norm() < 1e-6);
        CHECK(traj.max_constraint_violation(sphere) <= 10.0 * sphere.on_tolerance);
    }
    SUBCASE("adaptive stepping hits the same closed form") {
        const TangentField g([](const Vec& p) { return vec1(-p[0]); });
        IntegratorOptions opts;
        opts.adaptive = true;
        opts.local_tol = 1e-12;
        const Trajectory traj = flow_ode(line, g, vec1(1.0), 0.0, 1.0, opts);
        CHECK(std::abs(traj.endpoint()[0] - std::exp(-1.0)) < 1e-8);
        for (std::size_t i = 1; i < traj.times.size(); ++i) {
            CHECK(traj.times[i] > traj.times[i - 1]);
        }
    }
}

TEST_CASE("order-4 convergence under step halving") {
    const auto line = EmbeddedManifold::euclidean(1);
    const TangentField g([](const Vec& p) { return vec1(-p[0]); });
    auto err = [&](int steps) {
        IntegratorOptions opts;
        opts.dt = 1.0 / steps;
        return std::abs(flow_ode(line, g, vec1(1.0), 0.0, 1.0, opts).endpoint()[0] -
                        std::exp(-1.0));
    };
    CHECK(err(25) / err(50) >= 15.0);
}

TEST_CASE("semigroup property of the autonomous flow") {
    const auto sys = builtin_system("cubic1d");
    const Vec p = vec1(0.4);
    const Trajectory leg1 = flow_ode(sys.manifold, sys.g, p, 0.0, 0.7);
    const Trajectory leg2 = flow_ode(sys.manifold, sys.g, leg1.endpoint(), 0.0, 0.5);
    const Trajectory whole = flow_ode(sys.manifold, sys.g, p, 0.0, 1.2);
    CHECK((leg2.endpoint() - whole.endpoint()).norm() < 1e-9);
}

TEST_CASE("blowup raises BlowUp") {
    const auto line = EmbeddedManifold::euclidean(1);
    const TangentField g([](const Vec& p) { return vec1(p[0] * p[0]); });
    IntegratorOptions opts;
    opts.escape_radius = 1e3;
    bool threw = false;
    try {
        (void)flow_ode(line, g, vec1(2.0), 0.0, 1.0, opts);
    } catch (const Error& err) {
        threw = err.code() == ErrorCode::BlowUp;
    }
    CHECK(threw);
}

TEST_CASE("flow_dde") {
    const auto sys = builtin_system("delay_oscillator");
    const double rn = normalize_delay(sys.r, sys.T).value();

    SUBCASE("lambda = 0 agrees with the unperturbed flow") {
        History phi = History::constant(vec1(0.8), rn, 16);
        const Trajectory dde = flow_dde(sys.manifold, sys.g, sys.f, 0.0, phi, sys.T);
        const Trajectory ode = flow_ode(sys.manifold, sys.g, vec1(0.8), 0.0, sys.T);
        CHECK(std::abs(dde.endpoint()[0] - ode.endpoint()[0]) < 1e-10);
    }
    SUBCASE("direct substitution: sin t solves the oscillator at lambda = 1") {
        History phi = History::constant(vec1(0.0), rn, 32);
        for (std::size_t i = 0; i < phi.grid.size(); ++i) {
            phi.values[i] = vec1(std::sin(phi.grid[i]));
        }
        const Trajectory traj = flow_dde(sys.manifold, sys.g, sys.f, 1.0, phi, sys.T);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            worst = std::max(worst, std::abs(traj.states[i][0] - std::sin(traj.times[i])));
        }
        CHECK(worst <= 1e-6);
    }
    SUBCASE("f = 0 matches lambda = 0 exactly") {
        const PerturbationField zero = zero_perturbation(1, sys.T, rn);
        History phi = History::constant(vec1(0.8), rn, 16);
        const Trajectory a = flow_dde(sys.manifold, sys.g, zero, 7.0, phi, sys.T);
        const Trajectory b = flow_dde(sys.manifold, sys.g, zero, 0.0, phi, sys.T);
        CHECK((a.endpoint() - b.endpoint()).norm() == 0.0);
    }
    SUBCASE("a history with the wrong delay is rejected") {
        History phi = History::constant(vec1(0.8), 0.7, 16);  // r should be pi/2
        CHECK_THROWS_AS((void)flow_dde(sys.manifold, sys.g, sys.f, 1.0, phi, sys.T),
                        std::invalid_argument);
    }
}

TEST_CASE("variational flow") {
    const auto line = EmbeddedManifold::euclidean(1);
    SUBCASE("zero field gives the identity") {
        const TangentField g([](const Vec&) { return Vec(Vec::Zero(1)); },
                             [](const Vec&) { return Mat(Mat::Zero(1, 1)); });
        const Mat d = variational_flow(line, g, vec1(0.4), 1.0);
        CHECK(d(0, 0) == doctest::Approx(1.0));
    }
    SUBCASE("linear field gives e^{aT}") {
        const double a = 0.7;
        const TangentField g([a](const Vec& p) { return vec1(a * p[0]); },
                             [a](const Vec&) {
                                 Mat jac(1, 1);
                                 jac(0, 0) = a;
                                 return jac;
                             });
        const Mat d = variational_flow(line, g, vec1(0.0), 1.0);
        CHECK(std::abs(d(0, 0) - std::exp(a)) < 1e-8);
    }
    SUBCASE("finite-difference oracle on the cubic") {
        const auto sys = builtin_system("cubic1d");
        const Mat d = variational_flow(sys.manifold, sys.g, vec1(0.3), sys.T);
        const double eps = 1e-5;
        const double plus = flow_ode(sys.manifold, sys.g, vec1(0.3 + eps), 0.0, sys.T)
                                .endpoint()[0];
        const double minus = flow_ode(sys.manifold, sys.g, vec1(0.3 - eps), 0.0, sys.T)
                                 .endpoint()[0];
        const double fd = (plus - minus) / (2.0 * eps);
        CHECK(std::abs(d(0, 0) - fd) / std::abs(fd) <= 1e-4);
    }
}

TEST_CASE("lambda = 0 reduces every builtin delay system to its flow") {
    for (const auto& name : builtin_names()) {
        CAPTURE(name);
        const auto sys = builtin_system(name);
        const double rn = normalize_delay(sys.r, sys.T).value_or(0.0);
        Vec anchor(sys.manifold.ambient_dim());
        if (name == "sphere_height") {
            anchor = vec3(1.0, 1.0, 1.0).normalized();
        } else if (name == "torus_flow") {
            anchor = vec3(2.5, 0.0, 0.0);
        } else {
            anchor.setConstant(0.4);
        }
        const History phi = History::constant(anchor, rn, 8);
        const Trajectory dde =
            flow_dde(sys.manifold, sys.g, sys.f, 0.0, phi, sys.T, sys.controls.integrator);
        const Trajectory ode =
            flow_ode(sys.manifold, sys.g, anchor, 0.0, sys.T, sys.controls.integrator);
        CHECK((dde.endpoint() - ode.endpoint()).norm() <= 1e-10);
    }
}

TEST_CASE("delay equation on the sphere stays on the sphere") {
    const auto sphere = EmbeddedManifold::sphere(3);
    const TangentField g([](const Vec& p) { return vec3(-p[1], p[0], 0.0); });
    const PerturbationField f = tangentize(
        sphere, PerturbationField([](double t, const Vec&, const Vec& q) {
                    return vec3(0.3 * std::sin(t), 0.1 * q[2], 0.2);
                }, 2.0, 0.5));
    const History phi = History::constant(vec3(1, 0, 0), 0.5, 16);
    const Trajectory traj = flow_dde(sphere, g, f, 0.7, phi, 4.0);
    CHECK(traj.max_constraint_violation(sphere) <= 10.0 * sphere.on_tolerance);
    CHECK(traj.t_begin() == doctest::Approx(-0.5));
    CHECK(traj.t_end() == doctest::Approx(4.0));
}

TEST_CASE("history interpolation stays on the manifold") {
    const auto sphere = EmbeddedManifold::sphere(3);
    History phi = History::constant(vec3(1, 0, 0), 1.0, 8);
    for (std::size_t i = 0; i < phi.grid.size(); ++i) {
        const double a = 0.5 * phi.grid[i];
        phi.values[i] = vec3(std::cos(a), std::sin(a), 0.0);
    }
    const Vec mid = phi.at(sphere, -0.37);
    CHECK(std::abs(mid.norm() - 1.0) <= sphere.on_tolerance);
    const Vec endpoint = phi.at(sphere, 0.0);
    CHECK((endpoint - vec3(1, 0, 0)).norm() < 1e-12);
}

TEST_CASE("zero-delay histories degenerate to a single node") {
    const History phi = History::constant(vec2(1.0, 2.0), 0.0);
    CHECK(phi.nodes() == 1);
    CHECK(phi.grid.front() == 0.0);
    const auto plane = EmbeddedManifold::euclidean(2);
    CHECK((phi.at(plane, -0.3) - vec2(1.0, 2.0)).norm() == 0.0);
}
