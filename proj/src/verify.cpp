#include "orbitcert/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "orbitcert/branch.hpp"
#include "orbitcert/builtin.hpp"
#include "orbitcert/degree.hpp"
#include "orbitcert/errors.hpp"
#include "orbitcert/index.hpp"
#include "orbitcert/poincare.hpp"

namespace orbitcert {

namespace {

constexpr double kPi = std::numbers::pi;

Vec vec1(double x) {
    Vec v(1);
    v[0] = x;
    return v;
}

Vec vec2(double x, double y) {
    Vec v(2);
    v[0] = x;
    v[1] = y;
    return v;
}

Vec vec3(double x, double y, double z) {
    Vec v(3);
    v[0] = x;
    v[1] = y;
    v[2] = z;
    return v;
}

struct Check {
    bool pass = true;
    std::ostringstream log;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            log << "FAILED: " << what << "; ";
        }
    }

    template <typename T>
    void expect_eq(const T& got, const T& want, const std::string& what) {
        if (!(got == want)) {
            pass = false;
            log << "FAILED: " << what << " (got " << got << ", want " << want << "); ";
        }
    }

    void expect_le(double got, double bound, const std::string& what) {
        if (!(got <= bound)) {
            pass = false;
            log << "FAILED: " << what << " (" << got << " > " << bound << "); ";
        }
    }
};

CriterionResult run_criterion(int id, const std::string& name,
                              const std::function<void(Check&)>& body) {
    CriterionResult result;
    result.id = id;
    result.name = name;
    Check check;
    try {
        body(check);
        result.pass = check.pass;
        result.detail = check.log.str();
        if (result.pass && result.detail.empty()) result.detail = "ok";
    } catch (const std::exception& err) {
        result.pass = false;
        result.detail = std::string("exception: ") + err.what();
    }
    return result;
}

TangentField negate(const TangentField& g) {
    return TangentField([&g](const Vec& p) { return Vec(-g(p)); },
                        [&g](const Vec& p) { return Mat(-g.jacobian(p)); });
}

// --- criterion 1: ind(P,U) = deg(-g,U) ------------------------------------

void criterion_index_identity(Check& check) {
    {
        const BuiltinSystem sys = builtin_system("cubic1d");
        IndexOptions opts;
        opts.integrator = sys.controls.integrator;
        const TangentField neg = negate(sys.g);
        struct Case {
            double lo, hi;
            int want;
        };
        // Monodromy signs at the zeros 0, ±1 are (-1, +1, +1).
        for (const Case& c : {Case{-2.0, 2.0, 1}, Case{-0.5, 0.5, -1}, Case{0.5, 1.5, 1},
                              Case{-1.5, -0.5, 1}}) {
            const RegionPredicate u = RegionPredicate::interval(c.lo, c.hi);
            const int ind = index_P_region(sys.manifold, sys.g, u, sys.T, opts);
            const int deg = degree(sys.manifold, neg, u, opts.search);
            std::ostringstream what;
            what << "cubic1d U=(" << c.lo << "," << c.hi << ")";
            check.expect_eq(ind, deg, what.str() + " ind(P,U) vs deg(-g,U)");
            check.expect_eq(ind, c.want, what.str() + " value");
        }
    }
    {
        const BuiltinSystem sys = builtin_system("sphere_height");
        IndexOptions opts;
        opts.integrator = sys.controls.integrator;
        opts.search = sys.search;
        opts.search.seeds_per_axis = 6;  // fixed-point Newton runs one flow per step
        const TangentField neg = negate(sys.g);
        ZeroSearchOptions zero_search = sys.search;

        const RegionPredicate whole = RegionPredicate::all(*sys.manifold.compact_bbox);
        const int ind_all = index_P_region(sys.manifold, sys.g, whole, sys.T, opts);
        check.expect_eq(ind_all, degree(sys.manifold, neg, whole, zero_search),
                        "sphere whole: ind(P) vs deg(-g)");
        check.expect_eq(ind_all, 2, "sphere whole value");

        for (double z : {1.0, -1.0}) {
            const RegionPredicate cap = RegionPredicate::ball(vec3(0, 0, z), 0.8);
            const int ind = index_P_region(sys.manifold, sys.g, cap, sys.T, opts);
            check.expect_eq(ind, degree(sys.manifold, neg, cap, zero_search),
                            "sphere cap: ind(P) vs deg(-g)");
            check.expect_eq(ind, 1, "sphere cap value");
        }
    }
}

// --- criterion 2: ind(Q,W) = deg(-g,W̌) = ind(P,W̌) -------------------------

void criterion_reduction_formula(Check& check) {
    const BuiltinSystem sys = builtin_system("cubic1d");
    const double rn = normalize_delay(sys.r, sys.T).value_or(0.0);
    const int n_nodes = sys.controls.n_history_nodes;
    IndexOptions opts;
    opts.integrator = sys.controls.integrator;
    const TangentField neg = negate(sys.g);

    struct Case {
        HistoryRegion w;
        int want;
        std::string label;
    };
    History wiggle = History::constant(vec1(0.0), rn, n_nodes);
    for (std::size_t i = 0; i < wiggle.grid.size(); ++i) {
        wiggle.values[i] = vec1(0.5 + 0.4 * std::sin(4.0 * wiggle.grid[i]));
    }
    std::vector<Case> cases;
    cases.push_back({HistoryRegion::sup_ball(History::constant(vec1(0.0), rn, n_nodes), 0.5), -1,
                     "ball(0,0.5)"});
    cases.push_back({HistoryRegion::sup_ball(History::constant(vec1(0.0), rn, n_nodes), 1.5), 1,
                     "ball(0,1.5)"});
    cases.push_back({HistoryRegion::sup_ball(History::constant(vec1(1.0), rn, n_nodes), 0.3), 1,
                     "ball(1,0.3)"});
    cases.push_back({HistoryRegion::sup_ball(wiggle, 0.1), 0, "tube(nonconstant,0.1)"});

    for (const auto& c : cases) {
        const int ind_q = index_Q_region(sys.manifold, sys.g, c.w, sys.T, opts);
        const int deg = degree(sys.manifold, neg, c.w.check_set(), opts.search);
        const int ind_p = c.w.check_set().bbox.empty()
                              ? 0
                              : index_P_region(sys.manifold, sys.g, c.w.check_set(), sys.T, opts);
        check.expect_eq(ind_q, deg, c.label + " ind(Q,W) vs deg(-g,W̌)");
        check.expect_eq(ind_q, ind_p, c.label + " ind(Q,W) vs ind(P,W̌)");
        check.expect_eq(ind_q, c.want, c.label + " value");
    }
}

// --- criterion 3: Poincaré–Hopf -------------------------------------------

void criterion_poincare_hopf(Check& check) {
    {
        const BuiltinSystem sys = builtin_system("sphere_height");
        const auto report = check_poincare_hopf(sys.manifold, sys.g, sys.search);
        check.expect(report.pass, "sphere: " + report.message);
        check.expect_eq(report.degree, 2, "sphere degree");
    }
    {
        const BuiltinSystem sys = builtin_system("torus_flow");
        const auto report = check_poincare_hopf(sys.manifold, sys.g, sys.search);
        check.expect(report.pass, "torus: " + report.message);
        check.expect_eq(report.degree, 0, "torus degree");
    }
}

// --- criterion 4: degree axioms on randomized configurations ---------------

struct Planted1D {
    std::vector<double> zeros;
    double sign = 1.0;

    [[nodiscard]] TangentField field() const {
        const auto zs = zeros;
        const double s = sign;
        return TangentField([zs, s](const Vec& p) {
            double value = s;
            for (double z : zs) value *= (p[0] - z);
            return vec1(value);
        });
    }

    [[nodiscard]] int expected_degree() const {
        // sign g'(z_i) = sign * Π_{j≠i} (z_i - z_j); zeros are sorted.
        int total = 0;
        for (std::size_t i = 0; i < zeros.size(); ++i) {
            double derivative = sign;
            for (std::size_t j = 0; j < zeros.size(); ++j) {
                if (j != i) derivative *= (zeros[i] - zeros[j]);
            }
            total += derivative > 0.0 ? 1 : -1;
        }
        return total;
    }
};

Planted1D random_planted(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(1, 4);
    std::uniform_real_distribution<double> coord(-1.7, 1.7);
    std::uniform_int_distribution<int> flip(0, 1);
    Planted1D planted;
    const int n = count(rng);
    while (static_cast<int>(planted.zeros.size()) < n) {
        const double z = coord(rng);
        bool ok = true;
        for (double existing : planted.zeros) {
            if (std::abs(existing - z) < 0.3) ok = false;
        }
        if (ok) planted.zeros.push_back(z);
    }
    std::sort(planted.zeros.begin(), planted.zeros.end());
    planted.sign = flip(rng) == 0 ? 1.0 : -1.0;
    return planted;
}

void criterion_degree_axioms(Check& check, std::uint64_t seed) {
    const EmbeddedManifold line = EmbeddedManifold::euclidean(1);
    const EmbeddedManifold plane = EmbeddedManifold::euclidean(2);
    std::mt19937_64 rng(seed);
    ZeroSearchOptions search;
    search.seeds_per_axis = 24;

    // Excision.
    for (int trial = 0; trial < 5; ++trial) {
        const Planted1D planted = random_planted(rng);
        const TangentField g = planted.field();
        const RegionPredicate big = RegionPredicate::interval(-2.0, 2.0);
        const RegionPredicate small = RegionPredicate::interval(planted.zeros.front() - 0.15,
                                                                planted.zeros.back() + 0.15);
        const int deg_big = degree(line, g, big, search);
        const int deg_small = degree(line, g, small, search);
        check.expect_eq(deg_big, deg_small, "excision trial " + std::to_string(trial));
        check.expect_eq(deg_big, planted.expected_degree(),
                        "excision expected value trial " + std::to_string(trial));
    }

    // Additivity.
    for (int trial = 0; trial < 5; ++trial) {
        Planted1D planted = random_planted(rng);
        while (planted.zeros.size() < 2) planted = random_planted(rng);
        const TangentField g = planted.field();
        std::uniform_int_distribution<int> pick(0, static_cast<int>(planted.zeros.size()) - 2);
        const int cut_at = pick(rng);
        const double cut = 0.5 * (planted.zeros[cut_at] + planted.zeros[cut_at + 1]);
        const int whole = degree(line, g, RegionPredicate::interval(-2.0, 2.0), search);
        const int left = degree(line, g, RegionPredicate::interval(-2.0, cut), search);
        const int right = degree(line, g, RegionPredicate::interval(cut, 2.0), search);
        check.expect_eq(whole, left + right, "additivity trial " + std::to_string(trial));
    }

    // Homotopy invariance along h(x,s) = (1-s) g + s g̃ with nudged zeros.
    for (int trial = 0; trial < 5; ++trial) {
        const Planted1D planted = random_planted(rng);
        Planted1D nudged = planted;
        std::uniform_real_distribution<double> nudge(-0.05, 0.05);
        for (double& z : nudged.zeros) z += nudge(rng);
        std::sort(nudged.zeros.begin(), nudged.zeros.end());
        const TangentField g = planted.field();
        const TangentField gt = nudged.field();
        const RegionPredicate u = RegionPredicate::interval(-2.0, 2.0);
        int reference = 0;
        bool first = true;
        for (int step = 0; step <= 10; ++step) {
            const double s = step / 10.0;
            TangentField h([&g, &gt, s](const Vec& p) {
                return Vec((1.0 - s) * g(p) + s * gt(p));
            });
            for (double endpoint : {-2.0, 2.0}) {
                check.expect(h(vec1(endpoint)).norm() >= 10.0 * search.zero_tol,
                             "homotopy boundary admissibility");
            }
            const int deg = degree(line, h, u, search);
            if (first) {
                reference = deg;
                first = false;
            } else {
                check.expect_eq(deg, reference,
                                "homotopy trial " + std::to_string(trial) + " s=" +
                                    std::to_string(s));
            }
        }
        check.expect_eq(reference, planted.expected_degree(),
                        "homotopy expected value trial " + std::to_string(trial));
    }

    // Planar winding oracle agreement on product fields.
    ZeroSearchOptions planar_search;
    planar_search.seeds_per_axis = 12;
    for (int trial = 0; trial < 5; ++trial) {
        const Planted1D gx = random_planted(rng);
        const Planted1D gy = random_planted(rng);
        const TangentField fx = gx.field();
        const TangentField fy = gy.field();
        TangentField product([&fx, &fy](const Vec& p) {
            return vec2(fx(vec1(p[0]))[0], fy(vec1(p[1]))[0]);
        });
        const RegionPredicate box =
            RegionPredicate::box(vec2(-2.0, -2.0), vec2(2.0, 2.0));
        const int deg = degree(plane, product, box, planar_search);
        const int winding =
            winding_degree_planar(product, box_polyline(box.bbox, 64), 4096);
        check.expect_eq(deg, winding, "winding oracle trial " + std::to_string(trial));
        check.expect_eq(deg, gx.expected_degree() * gy.expected_degree(),
                        "product degree trial " + std::to_string(trial));
    }
}

// --- criterion 5: delay oscillator closed form ------------------------------

double fourier_amplitude(const Trajectory& loop) {
    // Trapezoid rule for c = (i/π) ∫ x(t) e^{-it} dt on one period; the loop
    // grid is uniform and periodic, so this is spectrally accurate.
    std::complex<double> integral(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < loop.times.size(); ++i) {
        const double t0 = loop.times[i];
        const double t1 = loop.times[i + 1];
        const std::complex<double> f0 =
            loop.states[i][0] * std::exp(std::complex<double>(0.0, -t0));
        const std::complex<double> f1 =
            loop.states[i + 1][0] * std::exp(std::complex<double>(0.0, -t1));
        integral += 0.5 * (t1 - t0) * (f0 + f1);
    }
    const std::complex<double> c = std::complex<double>(0.0, 1.0) / kPi * integral;
    return std::abs(c);
}

double oscillator_amplitude(double lambda) {
    // Ansatz x = Im(c e^{it}) in ẋ = -x + λ(sin t - x(t-π/2)) gives
    // c = λ / (1 + i(1-λ)).
    return lambda / std::hypot(1.0, 1.0 - lambda);
}

void criterion_delay_oscillator(Check& check, std::uint64_t seed) {
    const BuiltinSystem sys = builtin_system("delay_oscillator");
    const double rn = normalize_delay(sys.r, sys.T).value_or(0.0);

    // Direct-substitution oracle: φ(θ) = sin θ solves the equation at λ = 1.
    History exact = History::constant(vec1(0.0), rn, sys.controls.n_history_nodes);
    for (std::size_t i = 0; i < exact.grid.size(); ++i) {
        exact.values[i] = vec1(std::sin(exact.grid[i]));
    }
    const Trajectory traj =
        flow_dde(sys.manifold, sys.g, sys.f, 1.0, exact, sys.T, sys.controls.integrator);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        worst = std::max(worst, std::abs(traj.states[i][0] - std::sin(traj.times[i])));
    }
    check.expect_le(worst, 1e-6, "exact solution residual along the flow");

    // Newton from a noisy guess converges back to sin t.
    std::mt19937_64 rng(seed ^ 0x5DE1A5ULL);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    History guess = exact;
    for (auto& v : guess.values) v[0] += noise(rng);
    const History solved = solve_periodic(sys.manifold, sys.g, sys.f, 1.0, guess, sys.T,
                                          sys.controls);
    const Trajectory solved_traj =
        flow_dde(sys.manifold, sys.g, sys.f, 1.0, solved, sys.T, sys.controls.integrator);
    worst = 0.0;
    for (std::size_t i = 0; i < solved_traj.times.size(); ++i) {
        worst = std::max(worst,
                         std::abs(solved_traj.states[i][0] - std::sin(solved_traj.times[i])));
    }
    check.expect_le(worst, 1e-6, "solved solution vs sin t");

    // Branch from the trivial pair: amplitude tracks λ/|1+i(1-λ)| to λ_max.
    StartingPair origin;
    origin.lambda = 0.0;
    origin.history = History::constant(vec1(0.0), rn, sys.controls.n_history_nodes);
    origin.local_sign = -1;
    const Branch branch =
        continue_branch(sys.manifold, sys.g, sys.f, sys.T, sys.r, origin, sys.controls);
    check.expect(branch.termination == Termination::LambdaMax,
                 std::string("branch termination ") + to_string(branch.termination));
    check.expect(branch.pairs.size() >= 10, "branch has a usable number of pairs");
    double worst_amp = 0.0;
    for (const auto& pair : branch.pairs) {
        const double amp = fourier_amplitude(pair.loop);
        worst_amp = std::max(worst_amp,
                             std::abs(amp - oscillator_amplitude(pair.lambda)));
    }
    check.expect_le(worst_amp, 1e-5, "amplitude matches lambda/|1+i(1-lambda)|");
}

// --- criterion 6: resonance is completely vertical --------------------------

void criterion_resonance_vertical(Check& check) {
    const BuiltinSystem sys = builtin_system("resonance");
    StartingPair origin;
    origin.lambda = 0.0;
    origin.history = History::constant(vec2(0.0, 0.0), 0.0, sys.controls.n_history_nodes);
    origin.local_sign = 1;
    const Branch branch =
        continue_branch(sys.manifold, sys.g, sys.f, sys.T, sys.r, origin, sys.controls);
    check.expect(branch.termination == Termination::Vertical,
                 std::string("termination ") + to_string(branch.termination));
    double lambda_hi = 0.0;
    for (const auto& pair : branch.pairs) lambda_hi = std::max(lambda_hi, pair.lambda);
    check.expect_le(lambda_hi, 1e-6, "branch stays at lambda = 0");
    check.expect(branch.pairs.size() >= 3, "vertical branch collected pairs");

    // No 2π-periodic solution exists at λ = 0.1.
    bool failed = false;
    std::string code;
    try {
        (void)solve_periodic(sys.manifold, sys.g, sys.f, 0.1,
                             History::constant(vec2(0.0, 0.0), 0.0,
                                               sys.controls.n_history_nodes),
                             sys.T, sys.controls);
    } catch (const Error& err) {
        failed = err.code() == ErrorCode::NewtonDiverged ||
                 err.code() == ErrorCode::SingularJacobian;
        code = to_string(err.code());
    }
    check.expect(failed, "solve_periodic at lambda=0.1 must fail (got " +
                             (code.empty() ? "success" : code) + ")");
}

// --- criterion 7: f ≡ 0 gives horizontal branches ---------------------------

void criterion_horizontal(Check& check) {
    const BuiltinSystem sys = builtin_system("cubic1d");
    const double rn = normalize_delay(sys.r, sys.T).value_or(0.0);
    const auto origins = trivial_starting_pairs(sys.manifold, sys.g, sys.region, rn,
                                                sys.controls.n_history_nodes, sys.search);
    check.expect_eq(static_cast<int>(origins.size()), 3, "three trivial starting pairs");
    for (const auto& origin : origins) {
        const Branch branch =
            continue_branch(sys.manifold, sys.g, sys.f, sys.T, sys.r, origin, sys.controls);
        check.expect(branch.termination == Termination::LambdaMax,
                     std::string("termination ") + to_string(branch.termination));
        check.expect_le(std::abs(branch.pairs.back().lambda - sys.controls.lambda_max), 1e-12,
                        "branch reaches lambda_max");
        const Vec anchor = origin.history.at_zero();
        double flat = 0.0;
        for (const auto& pair : branch.pairs) {
            for (const auto& s : pair.loop.states) {
                flat = std::max(flat, (s - anchor).norm());
            }
        }
        check.expect_le(flat, 1e-9, "loops stay constant at the zero");
    }
}

// --- criterion 8: fix(P, h^{-1}(W)) vs fix(P, W̌) ---------------------------

void criterion_fix_correspondence(Check& check) {
    const BuiltinSystem sys = builtin_system("rotation");
    IndexOptions opts;
    opts.integrator = sys.controls.integrator;
    opts.search.seeds_per_axis = 16;
    const double rn = normalize_delay(sys.r, sys.T).value_or(0.0);

    const History arc = map_h(sys.manifold, sys.g, vec2(1.0, 0.0), sys.T, rn,
                              sys.controls.n_history_nodes, opts.integrator);
    // The arc sweeps a quarter circle, so no constant history fits in a tube
    // of radius 0.3 around it: W̌ is empty while h(p0) itself lies in W.
    const HistoryRegion w = HistoryRegion::sup_ball(arc, 0.3);
    check.expect(w.check_set().bbox.empty(), "W̌ of the tube is empty");

    const auto report =
        verify_fix_correspondence(sys.manifold, sys.g, w, sys.T, rn, opts);
    check.expect(report.inequality_witness.has_value(),
                 "found a fixed point of P in h^{-1}(W) outside W̌");
    check.expect(report.correspondence_verified, "all h-images are fixed by Q (residual <= 1e-7)");
    check.expect(!report.entries.empty(), "report examined fixed points");
}

// --- criterion 9: certificate soundness -------------------------------------

void criterion_certificates(Check& check) {
    struct Expected {
        std::string name;
        int degree;
    };
    for (const Expected& e :
         {Expected{"cubic1d", -1}, Expected{"delay_oscillator", -1}, Expected{"resonance", 1},
          Expected{"sphere_height", 2}, Expected{"torus_flow", 0}, Expected{"rotation", 1}}) {
        const BuiltinSystem sys = builtin_system(e.name);
        const Certificate cert = branch_certificate(sys.manifold, sys.g, sys.f, sys.T, sys.r,
                                                    sys.omega, sys.controls, sys.search);
        check.expect_eq(cert.degree, e.degree, e.name + " deg(g, Omega ∩ M)");
        check.expect_eq(cert.issued, e.degree != 0, e.name + " issuance");
        check.expect(!cert.any_anomaly, e.name + " no ANOMALY");
        for (const auto& witness : cert.witnesses) {
            const bool sound = witness.termination == Termination::LambdaMax ||
                               witness.termination == Termination::NormMax ||
                               witness.termination == Termination::LeftOmega ||
                               witness.termination == Termination::Vertical;
            check.expect(sound, e.name + " witness termination " +
                                    to_string(witness.termination));
        }
        if (cert.issued) {
            check.expect(!cert.witnesses.empty(), e.name + " witnesses attached");
        }
    }
}

// --- criterion 10: numerical hygiene ----------------------------------------

void criterion_hygiene(Check& check) {
    // RK4 order on the closed-form scalar flow.
    {
        const EmbeddedManifold line = EmbeddedManifold::euclidean(1);
        const TangentField g([](const Vec& p) { return vec1(-p[0]); });
        auto endpoint_error = [&](int steps) {
            IntegratorOptions opts;
            opts.dt = 1.0 / steps;
            const Trajectory traj = flow_ode(line, g, vec1(1.0), 0.0, 1.0, opts);
            return std::abs(traj.endpoint()[0] - std::exp(-1.0));
        };
        const double coarse = endpoint_error(25);
        const double fine = endpoint_error(50);
        check.expect(coarse / fine >= 15.0,
                     "scalar RK4 halving ratio " + std::to_string(coarse / fine));
    }
    // RK4 order for the rotation field on the sphere.
    {
        const EmbeddedManifold sphere = EmbeddedManifold::sphere(3);
        const TangentField g([](const Vec& p) { return vec3(-p[1], p[0], 0.0); });
        const Vec start = vec3(1.0, 0.0, 0.0);
        auto endpoint_error = [&](int steps) {
            IntegratorOptions opts;
            opts.dt = 1.0 / steps;
            const Trajectory traj = flow_ode(sphere, g, start, 0.0, 1.0, opts);
            return (traj.endpoint() - vec3(std::cos(1.0), std::sin(1.0), 0.0)).norm();
        };
        const double coarse = endpoint_error(25);
        const double fine = endpoint_error(50);
        check.expect(coarse / fine >= 15.0,
                     "sphere RK4 halving ratio " + std::to_string(coarse / fine));
    }
    // Variational flow against central finite differences.
    {
        const BuiltinSystem sys = builtin_system("cubic1d");
        const Vec q = vec1(0.3);
        const Mat d = variational_flow(sys.manifold, sys.g, q, sys.T, sys.controls.integrator);
        const double eps = 1e-5;
        const double fd = (poincare_P(sys.manifold, sys.g, vec1(0.3 + eps), sys.T,
                                      sys.controls.integrator)[0] -
                           poincare_P(sys.manifold, sys.g, vec1(0.3 - eps), sys.T,
                                      sys.controls.integrator)[0]) /
                          (2.0 * eps);
        check.expect_le(std::abs(d(0, 0) - fd) / std::abs(fd), 1e-4,
                        "cubic1d variational flow vs finite differences");
    }
    {
        const BuiltinSystem sys = builtin_system("sphere_height");
        const Vec p = vec3(1.0, 1.0, 1.0).normalized();
        const Mat basis = sys.manifold.tangent_basis(p);
        const Mat d = variational_flow(sys.manifold, sys.g, p, sys.T, sys.controls.integrator);
        const Vec image = poincare_P(sys.manifold, sys.g, p, sys.T, sys.controls.integrator);
        const Mat basis_end = sys.manifold.tangent_basis(image);
        const double eps = 1e-5;
        double worst = 0.0;
        for (int j = 0; j < 2; ++j) {
            const Vec plus = poincare_P(
                sys.manifold, sys.g,
                sys.manifold.retract(p, Vec(eps * basis.col(j))), sys.T,
                sys.controls.integrator);
            const Vec minus = poincare_P(
                sys.manifold, sys.g,
                sys.manifold.retract(p, Vec(-eps * basis.col(j))), sys.T,
                sys.controls.integrator);
            const Vec fd_coords = basis_end.transpose() * ((plus - minus) / (2.0 * eps));
            worst = std::max(worst, (fd_coords - Vec(d.col(j))).norm() / fd_coords.norm());
        }
        check.expect_le(worst, 1e-4, "sphere variational flow vs finite differences");
    }
    // Manifold adherence along trajectories.
    {
        const BuiltinSystem sphere = builtin_system("sphere_height");
        const Trajectory t1 = flow_ode(sphere.manifold, sphere.g, vec3(1.0, 1.0, 1.0).normalized(),
                                       0.0, 3.0, sphere.controls.integrator);
        check.expect_le(t1.max_constraint_violation(sphere.manifold),
                        10.0 * sphere.manifold.on_tolerance, "sphere trajectory adherence");

        const BuiltinSystem torus = builtin_system("torus_flow");
        const Trajectory t2 = flow_ode(torus.manifold, torus.g, vec3(2.5, 0.0, 0.0), 0.0, 3.0,
                                       torus.controls.integrator);
        check.expect_le(t2.max_constraint_violation(torus.manifold),
                        10.0 * torus.manifold.on_tolerance, "torus trajectory adherence");
    }
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
    std::vector<CriterionResult> results;
    results.push_back(run_criterion(1, "index identity: ind(P,U) = deg(-g,U)",
                                    criterion_index_identity));
    results.push_back(run_criterion(2, "reduction formula: ind(Q,W) = deg(-g,W̌) = ind(P,W̌)",
                                    criterion_reduction_formula));
    results.push_back(run_criterion(3, "Poincaré–Hopf on S² and T²", criterion_poincare_hopf));
    results.push_back(run_criterion(4, "degree axioms (excision, additivity, homotopy, winding)",
                                    [seed](Check& c) { criterion_degree_axioms(c, seed); }));
    results.push_back(run_criterion(5, "delay oscillator closed form and branch amplitudes",
                                    [seed](Check& c) { criterion_delay_oscillator(c, seed); }));
    results.push_back(run_criterion(6, "resonance branch is completely vertical",
                                    criterion_resonance_vertical));
    results.push_back(run_criterion(7, "zero perturbation gives horizontal branches",
                                    criterion_horizontal));
    results.push_back(run_criterion(8, "fixed-point correspondence and its limits",
                                    criterion_fix_correspondence));
    results.push_back(run_criterion(9, "certificate soundness (no interior dead-ends)",
                                    criterion_certificates));
    results.push_back(run_criterion(10, "numerical hygiene (RK4 order, variational flow, "
                                        "manifold adherence)",
                                    criterion_hygiene));
    return results;
}

}  // namespace orbitcert
