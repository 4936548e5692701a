#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "orbitcert/branch.hpp"
#include "orbitcert/builtin.hpp"
#include "orbitcert/errors.hpp"
#include "test_util.hpp"

using namespace orbitcert;
using namespace orbitcert::testutil;

TEST_CASE("trivial starting pairs sit on the zeros") {
    const auto sys = builtin_system("cubic1d");
    const double rn = normalize_delay(sys.r, sys.T).value();
    const auto pairs = trivial_starting_pairs(sys.manifold, sys.g, sys.region, rn, 32, sys.search);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].history.at_zero()[0] == doctest::Approx(-1.0));
    CHECK(pairs[1].history.at_zero()[0] == doctest::Approx(0.0));
    CHECK(pairs[2].history.at_zero()[0] == doctest::Approx(1.0));
    for (const auto& pair : pairs) {
        CHECK(pair.lambda == 0.0);
        CHECK(pair.local_sign != 0);
        CHECK(pair.history.nodes() == 33);
    }

    SUBCASE("zero-free region gives no pairs") {
        const TangentField g([](const Vec& p) { return vec1(-p[0]); });
        CHECK(trivial_starting_pairs(sys.manifold, g, RegionPredicate::interval(1.0, 2.0), rn)
                  .empty());
    }
    SUBCASE("sphere height field has pairs at both poles") {
        const auto sphere = builtin_system("sphere_height");
        const auto sphere_pairs = trivial_starting_pairs(
            sphere.manifold, sphere.g, sphere.region, 0.3, 32, sphere.search);
        CHECK(sphere_pairs.size() == 2);
    }
}

TEST_CASE("periodic residual at known solutions") {
    const auto sys = builtin_system("delay_oscillator");
    const double rn = normalize_delay(sys.r, sys.T).value();

    SUBCASE("exact oscillator solution") {
        History phi = History::constant(vec1(0.0), rn, 32);
        for (std::size_t i = 0; i < phi.grid.size(); ++i) {
            phi.values[i] = vec1(std::sin(phi.grid[i]));
        }
        const Vec res = periodic_residual(sys.manifold, sys.g, sys.f, 1.0, phi, sys.T,
                                          sys.controls.integrator);
        CHECK(res.cwiseAbs().maxCoeff() <= 1e-6);
    }
    SUBCASE("trivial pair at lambda = 0") {
        const History phi = History::constant(vec1(0.0), rn, 32);
        const Vec res = periodic_residual(sys.manifold, sys.g, sys.f, 0.0, phi, sys.T,
                                          sys.controls.integrator);
        CHECK(res.cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("f = 0 keeps constant histories periodic at any lambda") {
        const auto cubic = builtin_system("cubic1d");
        const double rc = normalize_delay(cubic.r, cubic.T).value();
        const History phi = History::constant(vec1(1.0), rc, 32);
        const Vec res = periodic_residual(cubic.manifold, cubic.g, cubic.f, 3.0, phi, cubic.T,
                                          cubic.controls.integrator);
        CHECK(res.cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("solve_periodic") {
    const auto sys = builtin_system("delay_oscillator");
    const double rn = normalize_delay(sys.r, sys.T).value();

    SUBCASE("converges from a noisy guess to sin t") {
        History guess = History::constant(vec1(0.0), rn, 32);
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> noise(-0.05, 0.05);
        for (std::size_t i = 0; i < guess.grid.size(); ++i) {
            guess.values[i] = vec1(std::sin(guess.grid[i]) + noise(rng));
        }
        const History solved =
            solve_periodic(sys.manifold, sys.g, sys.f, 1.0, guess, sys.T, sys.controls);
        double worst = 0.0;
        for (std::size_t i = 0; i < solved.grid.size(); ++i) {
            worst = std::max(worst, std::abs(solved.values[i][0] - std::sin(solved.grid[i])));
        }
        CHECK(worst <= 1e-6);
    }
    SUBCASE("lambda = 0 near a hyperbolic zero lands on the constant history") {
        const auto cubic = builtin_system("cubic1d");
        const double rc = normalize_delay(cubic.r, cubic.T).value();
        History guess = History::constant(vec1(1.04), rc, 16);
        const History solved = solve_periodic(cubic.manifold, cubic.g, cubic.f, 0.0, guess,
                                              cubic.T, cubic.controls);
        for (const auto& v : solved.values) CHECK(std::abs(v[0] - 1.0) <= 1e-7);
    }
    SUBCASE("resonance at lambda = 0.1 has no solution") {
        const auto res = builtin_system("resonance");
        bool threw = false;
        try {
            (void)solve_periodic(res.manifold, res.g, res.f, 0.1,
                                 History::constant(vec2(0, 0), 0.0, 32), res.T, res.controls);
        } catch (const Error& err) {
            threw = err.code() == ErrorCode::NewtonDiverged ||
                    err.code() == ErrorCode::SingularJacobian;
        }
        CHECK(threw);
    }
}

TEST_CASE("delay oscillator branch up to a small lambda cap") {
    auto sys = builtin_system("delay_oscillator");
    sys.controls.lambda_max = 0.5;
    StartingPair origin;
    origin.lambda = 0.0;
    origin.history = History::constant(vec1(0.0), normalize_delay(sys.r, sys.T).value(), 32);
    origin.local_sign = -1;
    const Branch branch =
        continue_branch(sys.manifold, sys.g, sys.f, sys.T, sys.r, origin, sys.controls);
    CHECK(branch.termination == Termination::LambdaMax);
    REQUIRE(branch.pairs.size() >= 3);
    CHECK(branch.pairs.front().is_trivial);
    CHECK(branch.pairs.front().residual <= 1e-8);

    SUBCASE("pairs satisfy the equation when re-shot from their end segment") {
        for (std::size_t i = 1; i < branch.pairs.size(); i += 2) {
            const PeriodicPair& pair = branch.pairs[i];
            History wrapped = pair.initial;
            for (std::size_t node = 0; node < wrapped.grid.size(); ++node) {
                wrapped.values[node] =
                    pair.loop.at(sys.manifold, sys.T + wrapped.grid[node]);
            }
            const Trajectory again = flow_dde(sys.manifold, sys.g, sys.f, pair.lambda, wrapped,
                                              sys.T, sys.controls.integrator);
            double worst = 0.0;
            for (std::size_t node = 0; node < pair.loop.times.size(); ++node) {
                worst = std::max(worst, (again.at(sys.manifold, pair.loop.times[node]) -
                                         pair.loop.states[node])
                                            .norm());
            }
            CHECK(worst <= 10.0 * sys.controls.periodic_tol);
        }
    }
    SUBCASE("consecutive pairs stay within the accepted step scale") {
        for (std::size_t i = 1; i < branch.pairs.size(); ++i) {
            const double step = branch.arclength[i] - branch.arclength[i - 1];
            const double dlambda =
                std::abs(branch.pairs[i].lambda - branch.pairs[i - 1].lambda);
            const double dsup =
                branch.pairs[i].initial.sup_distance(branch.pairs[i - 1].initial);
            // the arclength metric averages over nodes: sup can exceed it by
            // at most sqrt(n_nodes)
            CHECK(std::hypot(dlambda, dsup) <= 8.0 * step + 1e-12);
        }
    }
}

TEST_CASE("continuation on the sphere with a genuine perturbation") {
    const auto base = builtin_system("sphere_height");
    const auto& sphere = base.manifold;
    const double T = base.T;
    const double r = 0.3;
    const PerturbationField f = tangentize(
        sphere, PerturbationField(
                    [](double t, const Vec&, const Vec& q) {
                        const double w = 2.0 * std::numbers::pi * t;
                        return vec3(0.3 * std::sin(w), 0.3 * std::cos(w), 0.1 * q[2]);
                    },
                    T, r));
    ContinuationControls controls = base.controls;
    controls.lambda_max = 0.3;
    controls.n_history_nodes = 12;

    SUBCASE("solve_periodic perturbs the pole equilibrium into a small loop") {
        const History guess = History::constant(vec3(0, 0, 1), r, 12);
        const History solved = solve_periodic(sphere, base.g, f, 0.2, guess, T, controls);
        const Vec res = periodic_residual(sphere, base.g, f, 0.2, solved, T,
                                          controls.integrator);
        CHECK(res.cwiseAbs().maxCoeff() <= controls.periodic_tol);
        for (const auto& v : solved.values) {
            CHECK(std::abs(v.norm() - 1.0) <= 10.0 * sphere.on_tolerance);
        }
        // the loop moved off the pole but stayed near it
        const Trajectory loop = flow_dde(sphere, base.g, f, 0.2, solved, T,
                                         controls.integrator);
        double dist = 0.0;
        for (const auto& s : loop.states) dist = std::max(dist, (s - vec3(0, 0, 1)).norm());
        CHECK(dist > 1e-4);
        CHECK(dist < 0.5);
    }
    SUBCASE("branch from the pole reaches the lambda cap on the manifold") {
        StartingPair origin;
        origin.history = History::constant(vec3(0, 0, 1), r, 12);
        origin.local_sign = 1;
        const Branch branch = continue_branch(sphere, base.g, f, T, r, origin, controls);
        CHECK(branch.termination == Termination::LambdaMax);
        CHECK(branch.pairs.size() >= 3);
        for (const auto& pair : branch.pairs) {
            CHECK(pair.residual <= 10.0 * controls.periodic_tol);
            CHECK(pair.loop.max_constraint_violation(sphere) <= 10.0 * sphere.on_tolerance);
        }
    }
}

TEST_CASE("delays beyond one period are normalized before shooting") {
    auto sys = builtin_system("delay_oscillator");
    sys.controls.lambda_max = 0.2;
    const double rn = normalize_delay(sys.r, sys.T).value();
    StartingPair origin;
    origin.history = History::constant(vec1(0.0), rn, 32);
    origin.local_sign = -1;
    const Branch direct =
        continue_branch(sys.manifold, sys.g, sys.f, sys.T, sys.r, origin, sys.controls);
    // same equation with the delay shifted by one full period
    const double shifted = sys.r + sys.T;
    const PerturbationField f_shifted(
        [](double t, const Vec&, const Vec& q) { return vec1(std::sin(t) - q[0]); }, sys.T,
        shifted);
    const Branch wrapped = continue_branch(sys.manifold, sys.g, f_shifted, sys.T, shifted,
                                           origin, sys.controls);
    CHECK(wrapped.termination == direct.termination);
    REQUIRE(wrapped.pairs.size() == direct.pairs.size());
    for (std::size_t i = 0; i < direct.pairs.size(); ++i) {
        CHECK(std::abs(wrapped.pairs[i].lambda - direct.pairs[i].lambda) <= 1e-12);
        CHECK(std::abs(wrapped.pairs[i].sup_norm - direct.pairs[i].sup_norm) <= 1e-12);
    }
}

TEST_CASE("resonance branch walks vertically") {
    const auto sys = builtin_system("resonance");
    StartingPair origin;
    origin.lambda = 0.0;
    origin.history = History::constant(vec2(0, 0), 0.0, 32);
    origin.local_sign = 1;
    const Branch branch =
        continue_branch(sys.manifold, sys.g, sys.f, sys.T, sys.r, origin, sys.controls);
    CHECK(branch.termination == Termination::Vertical);
    for (const auto& pair : branch.pairs) CHECK(pair.lambda <= 1e-6);
    CHECK(branch.arclength.back() > 0.0);
}

TEST_CASE("horizontal branch for f = 0") {
    const auto sys = builtin_system("cubic1d");
    const double rn = normalize_delay(sys.r, sys.T).value();
    StartingPair origin;
    origin.lambda = 0.0;
    origin.history = History::constant(vec1(1.0), rn, 32);
    origin.local_sign = -1;
    const Branch branch =
        continue_branch(sys.manifold, sys.g, sys.f, sys.T, sys.r, origin, sys.controls);
    CHECK(branch.termination == Termination::LambdaMax);
    CHECK(branch.pairs.back().lambda == doctest::Approx(sys.controls.lambda_max));
    for (const auto& pair : branch.pairs) {
        for (const auto& s : pair.loop.states) CHECK(std::abs(s[0] - 1.0) <= 1e-9);
    }
}

TEST_CASE("certificates") {
    SUBCASE("delay oscillator: issued, witness reaches the lambda cap") {
        auto sys = builtin_system("delay_oscillator");
        sys.controls.lambda_max = 0.3;
        const Certificate cert = branch_certificate(sys.manifold, sys.g, sys.f, sys.T, sys.r,
                                                    sys.omega, sys.controls, sys.search);
        CHECK(cert.degree == -1);
        CHECK(cert.issued);
        REQUIRE(cert.witnesses.size() == 1);
        CHECK(cert.witnesses.front().termination == Termination::LambdaMax);
        CHECK(!cert.any_anomaly);
        CHECK(cert.report().find("ISSUED") != std::string::npos);
    }
    SUBCASE("degenerate zero blocks the certificate") {
        const auto line = EmbeddedManifold::euclidean(1);
        const TangentField g([](const Vec& p) { return vec1(p[0] * p[0]); });
        const PerturbationField f = zero_perturbation(1, 1.0, 0.0);
        bool threw = false;
        try {
            (void)branch_certificate(line, g, f, 1.0, 0.0,
                                     PairRegion::all(Box::cube(1, -1.0, 1.0)));
        } catch (const Error& err) {
            threw = err.code() == ErrorCode::DegenerateZero;
        }
        CHECK(threw);
    }
    SUBCASE("interior dead-ends inside a bounded omega are flagged ANOMALY") {
        auto sys = builtin_system("delay_oscillator");
        // A corrector with no iteration budget dead-ends immediately at the
        // origin, strictly inside the bounded cylinder.
        sys.controls.newton_max_iter = 0;
        sys.controls.omega = PairRegion::cylinder(10.0, vec1(0.0), 1.5);
        StartingPair origin;
        origin.history = History::constant(vec1(0.0),
                                           normalize_delay(sys.r, sys.T).value(), 32);
        origin.local_sign = -1;
        const Branch branch =
            continue_branch(sys.manifold, sys.g, sys.f, sys.T, sys.r, origin, sys.controls);
        CHECK(branch.termination == Termination::StepFailure);
        CHECK(branch.anomaly);
        CHECK(branch.note.find("ANOMALY") != std::string::npos);
    }
    SUBCASE("zero degree means no certificate, not no branch") {
        const auto sys = builtin_system("torus_flow");
        const Certificate cert = branch_certificate(sys.manifold, sys.g, sys.f, sys.T, sys.r,
                                                    sys.omega, sys.controls, sys.search);
        CHECK(cert.degree == 0);
        CHECK(!cert.issued);
        CHECK(cert.witnesses.empty());
        CHECK(cert.report().find("NO CERTIFICATE") != std::string::npos);
    }
}
