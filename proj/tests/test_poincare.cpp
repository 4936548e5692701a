#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "orbitcert/builtin.hpp"
#include "orbitcert/errors.hpp"
#include "orbitcert/poincare.hpp"
#include "test_util.hpp"

using namespace orbitcert;
using namespace orbitcert::testutil;

TEST_CASE("poincare map closed forms") {
    const auto line = EmbeddedManifold::euclidean(1);
    SUBCASE("zero field: P is the identity") {
        const TangentField g([](const Vec&) { return Vec(Vec::Zero(1)); });
        CHECK((poincare_P(line, g, vec1(0.3), 1.0) - vec1(0.3)).norm() == 0.0);
    }
    SUBCASE("exponential decay") {
        const TangentField g([](const Vec& p) { return vec1(-p[0]); });
        CHECK(std::abs(poincare_P(line, g, vec1(2.0), 1.0)[0] - 2.0 * std::exp(-1.0)) < 1e-8);
    }
    SUBCASE("zeros of g are fixed points") {
        const auto sys = builtin_system("cubic1d");
        for (double q : {0.0, 1.0, -1.0}) {
            CHECK((poincare_P(sys.manifold, sys.g, vec1(q), sys.T) - vec1(q)).norm() <= 1e-9);
        }
    }
    SUBCASE("blowup becomes OutsideDomain") {
        const TangentField g([](const Vec& p) { return vec1(p[0] * p[0]); });
        IntegratorOptions opts;
        opts.escape_radius = 1e3;
        bool threw = false;
        try {
            (void)poincare_P(line, g, vec1(2.0), 1.0, opts);
        } catch (const Error& err) {
            threw = err.code() == ErrorCode::OutsideDomain;
        }
        CHECK(threw);
    }
}

TEST_CASE("translation operator Q") {
    const auto line = EmbeddedManifold::euclidean(1);
    const TangentField g([](const Vec& p) { return vec1(-p[0]); });
    const double T = 1.0;
    const double r = 0.5;

    SUBCASE("zero field: constant output at phi(0)") {
        const TangentField zero([](const Vec&) { return Vec(Vec::Zero(1)); });
        History phi = History::constant(vec1(0.0), r, 8);
        for (std::size_t i = 0; i < phi.grid.size(); ++i) {
            phi.values[i] = vec1(std::sin(3.0 * phi.grid[i]) + 0.5);
        }
        const auto result = translation_Q(line, zero, phi, T);
        for (const auto& v : result.output.values) CHECK(v[0] == doctest::Approx(0.5));
    }
    SUBCASE("Q factors through phi(0)") {
        History a = History::constant(vec1(1.0), r, 8);
        History b = a;
        for (std::size_t i = 0; i + 1 < b.values.size(); ++i) {
            b.values[i] = vec1(1.0 + std::sin(9.0 * b.grid[i]));
        }
        const auto qa = translation_Q(line, g, a, T);
        const auto qb = translation_Q(line, g, b, T);
        CHECK(qa.output.sup_distance(qb.output) == 0.0);
    }
    SUBCASE("closed form output for exponential decay") {
        const History phi = History::constant(vec1(1.0), r, 8);
        const auto result = translation_Q(line, g, phi, T);
        for (std::size_t i = 0; i < result.output.grid.size(); ++i) {
            const double expected = std::exp(-(T + result.output.grid[i]));
            CHECK(std::abs(result.output.values[i][0] - expected) < 1e-8);
        }
    }
    SUBCASE("requires T >= r") {
        const History phi = History::constant(vec1(1.0), 2.0, 8);
        CHECK_THROWS_AS((void)translation_Q(line, g, phi, 1.0), std::invalid_argument);
    }
}

TEST_CASE("perturbed translation operator") {
    const auto sys = builtin_system("delay_oscillator");
    const double rn = normalize_delay(sys.r, sys.T).value();

    SUBCASE("coincides with Q at lambda = 0") {
        History phi = History::constant(vec1(0.7), rn, 16);
        const auto q0 = translation_Q(sys.manifold, sys.g, phi, sys.T);
        const auto ql = translation_Q_lambda(sys.manifold, sys.g, sys.f, 0.0, phi, sys.T);
        CHECK(q0.output.sup_distance(ql.output) <= 1e-10);
    }
    SUBCASE("the sin-t history is a fixed point at lambda = 1") {
        History phi = History::constant(vec1(0.0), rn, 32);
        for (std::size_t i = 0; i < phi.grid.size(); ++i) {
            phi.values[i] = vec1(std::sin(phi.grid[i]));
        }
        const auto result = translation_Q_lambda(sys.manifold, sys.g, sys.f, 1.0, phi, sys.T);
        CHECK(result.output.sup_distance(phi) <= 1e-6);
    }
    SUBCASE("f = 0 at any lambda equals Q") {
        const PerturbationField zero = zero_perturbation(1, sys.T, rn);
        History phi = History::constant(vec1(0.7), rn, 16);
        const auto q0 = translation_Q(sys.manifold, sys.g, phi, sys.T);
        const auto ql = translation_Q_lambda(sys.manifold, sys.g, zero, 7.0, phi, sys.T);
        CHECK(q0.output.sup_distance(ql.output) <= 1e-10);
    }
}

TEST_CASE("bridging maps h and k") {
    const auto line = EmbeddedManifold::euclidean(1);
    const TangentField g([](const Vec& p) { return vec1(-p[0]); });
    const double T = 1.0;
    const double r = 0.5;

    SUBCASE("k of a constant history") {
        CHECK(map_k(History::constant(vec1(0.3), r, 8))[0] == 0.3);
    }
    SUBCASE("h∘k = Q and k∘h = P") {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 5; ++trial) {
            const Vec p = random_vec(rng, 1, -2.0, 2.0);
            History phi = History::constant(p, r, 16);
            const auto q = translation_Q(line, g, phi, T);
            const History hk = map_h(line, g, map_k(phi), T, r, 16);
            CHECK(hk.sup_distance(q.output) <= 1e-10);
            const Vec kh = map_k(map_h(line, g, p, T, r, 16));
            CHECK((kh - poincare_P(line, g, p, T)).norm() <= 1e-10);
        }
    }
}

TEST_CASE("fixed points of P and Q correspond under h and k") {
    const auto sys = builtin_system("cubic1d");
    const double rn = normalize_delay(sys.r, sys.T).value();
    for (double q : {0.0, 1.0, -1.0}) {
        const History image = map_h(sys.manifold, sys.g, vec1(q), sys.T, rn, 32);
        const auto q_of_h = translation_Q(sys.manifold, sys.g, image, sys.T);
        CHECK(q_of_h.output.sup_distance(image) <= 1e-7);
        CHECK(std::abs(map_k(image)[0] - q) <= 1e-7);
    }
}

TEST_CASE("Q outputs have flow-bounded node increments (local compactness surrogate)") {
    const auto line = EmbeddedManifold::euclidean(1);
    const TangentField g([](const Vec& p) { return vec1(-p[0]); });
    const double T = 1.0;
    const double r = 0.5;
    std::mt19937_64 rng(29);
    // |Q(phi)'| <= max |g| over the reachable compact set; nodes are theta
    // apart, so increments obey a uniform Lipschitz bound.
    const double bound = 2.0;  // max |g| = |x| <= 2 on the sampled ball
    for (int trial = 0; trial < 10; ++trial) {
        History phi = History::constant(random_vec(rng, 1, -1.5, 1.5), r, 16);
        const auto result = translation_Q(line, g, phi, T);
        for (std::size_t i = 1; i < result.output.values.size(); ++i) {
            const double dtheta = result.output.grid[i] - result.output.grid[i - 1];
            const double jump =
                (result.output.values[i] - result.output.values[i - 1]).norm();
            CHECK(jump <= 1.1 * bound * dtheta);
        }
    }
}
