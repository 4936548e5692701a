#include "orbitcert/builtin.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace orbitcert {

PerturbationField zero_perturbation(int ambient_dim, double T, double r) {
    return PerturbationField(
        [ambient_dim](double, const Vec&, const Vec&) { return Vec::Zero(ambient_dim); }, T, r);
}

namespace {

Vec vec1(double x) {
    Vec v(1);
    v[0] = x;
    return v;
}

BuiltinSystem make_cubic1d() {
    BuiltinSystem sys;
    sys.name = "cubic1d";
    sys.description = "g(x) = x(1-x^2) on R, f = 0, T = 1, r = 0.3";
    sys.manifold = EmbeddedManifold::euclidean(1);
    sys.g = TangentField([](const Vec& p) { return vec1(p[0] * (1.0 - p[0] * p[0])); },
                         [](const Vec& p) {
                             Mat jac(1, 1);
                             jac(0, 0) = 1.0 - 3.0 * p[0] * p[0];
                             return jac;
                         });
    sys.T = 1.0;
    sys.r = 0.3;
    sys.f = zero_perturbation(1, sys.T, sys.r);
    sys.region = RegionPredicate::interval(-2.0, 2.0);
    sys.omega = PairRegion::all(Box::cube(1, -2.0, 2.0));
    return sys;
}

BuiltinSystem make_delay_oscillator() {
    const double T = 2.0 * std::numbers::pi;
    const double r = 0.5 * std::numbers::pi;
    BuiltinSystem sys;
    sys.name = "delay_oscillator";
    sys.description = "g(x) = -x, f(t,p,q) = sin t - q, T = 2*pi, r = pi/2";
    sys.manifold = EmbeddedManifold::euclidean(1);
    sys.g = TangentField([](const Vec& p) { return vec1(-p[0]); },
                         [](const Vec&) {
                             Mat jac(1, 1);
                             jac(0, 0) = -1.0;
                             return jac;
                         });
    sys.T = T;
    sys.r = r;
    sys.f = PerturbationField(
        [](double t, const Vec&, const Vec& q) { return vec1(std::sin(t) - q[0]); }, T, r);
    sys.region = RegionPredicate::interval(-2.0, 2.0);
    sys.omega = PairRegion::all(Box::cube(1, -2.0, 2.0));
    sys.controls.lambda_max = 5.0;
    return sys;
}

BuiltinSystem make_resonance() {
    const double T = 2.0 * std::numbers::pi;
    BuiltinSystem sys;
    sys.name = "resonance";
    sys.description = "g = (y, -x), f = (0, sin t), T = 2*pi: forcing at the rotation "
                      "frequency, no periodic solutions for lambda > 0";
    sys.manifold = EmbeddedManifold::euclidean(2);
    sys.g = TangentField(
        [](const Vec& p) {
            Vec v(2);
            v[0] = p[1];
            v[1] = -p[0];
            return v;
        },
        [](const Vec&) {
            Mat jac(2, 2);
            jac << 0.0, 1.0, -1.0, 0.0;
            return jac;
        });
    sys.T = T;
    sys.r = 0.0;
    sys.f = PerturbationField(
        [](double t, const Vec&, const Vec&) {
            Vec v(2);
            v[0] = 0.0;
            v[1] = std::sin(t);
            return v;
        },
        T, 0.0);
    sys.region = RegionPredicate::box(Vec::Constant(2, -2.0), Vec::Constant(2, 2.0));
    sys.omega = PairRegion::all(Box::cube(2, -2.0, 2.0));
    // The vertical walk needs the time-2*pi rotation resolved well below
    // periodic_tol even at unit amplitude.
    sys.controls.integrator.dt = T / 400.0;
    return sys;
}

BuiltinSystem make_sphere_height() {
    BuiltinSystem sys;
    sys.name = "sphere_height";
    sys.description = "tangentized e3 (height gradient) on S^2, f = 0, T = 1";
    sys.manifold = EmbeddedManifold::sphere(3);
    // p -> e3 - (e3.p) p is already tangent; its Jacobian is analytic.
    sys.g = TangentField(
        [](const Vec& p) {
            Vec v = -p[2] * p;
            v[2] += 1.0;
            return v;
        },
        [](const Vec& p) {
            Mat jac = -p[2] * Mat::Identity(3, 3);
            jac.col(2) -= p;
            return jac;
        });
    sys.T = 1.0;
    sys.r = 0.3;
    sys.f = zero_perturbation(3, sys.T, sys.r);
    sys.region = RegionPredicate::all(*sys.manifold.compact_bbox);
    sys.omega = PairRegion::all(*sys.manifold.compact_bbox);
    sys.search.seeds_per_axis = 8;
    return sys;
}

BuiltinSystem make_torus_flow() {
    BuiltinSystem sys;
    sys.name = "torus_flow";
    sys.description = "zero-free rotation field (-y, x, 0) on the torus (R=2, rho=0.5), "
                      "f = 0, T = 1";
    sys.manifold = EmbeddedManifold::torus2(2.0, 0.5);
    sys.g = TangentField(
        [](const Vec& p) {
            Vec v(3);
            v[0] = -p[1];
            v[1] = p[0];
            v[2] = 0.0;
            return v;
        },
        [](const Vec&) {
            Mat jac(3, 3);
            jac << 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0;
            return jac;
        });
    sys.T = 1.0;
    sys.r = 0.0;
    sys.f = zero_perturbation(3, sys.T, sys.r);
    sys.region = RegionPredicate::all(*sys.manifold.compact_bbox);
    sys.omega = PairRegion::all(*sys.manifold.compact_bbox);
    sys.search.seeds_per_axis = 8;
    return sys;
}

BuiltinSystem make_rotation() {
    const double T = 2.0 * std::numbers::pi;
    const double r = 0.5 * std::numbers::pi;
    BuiltinSystem sys;
    sys.name = "rotation";
    sys.description = "planar rotation g = (y, -x), f = 0, T = 2*pi: every point is a "
                      "fixed point of P";
    sys.manifold = EmbeddedManifold::euclidean(2);
    sys.g = TangentField(
        [](const Vec& p) {
            Vec v(2);
            v[0] = p[1];
            v[1] = -p[0];
            return v;
        },
        [](const Vec&) {
            Mat jac(2, 2);
            jac << 0.0, 1.0, -1.0, 0.0;
            return jac;
        });
    sys.T = T;
    sys.r = r;
    sys.f = zero_perturbation(2, T, r);
    sys.region = RegionPredicate::box(Vec::Constant(2, -2.0), Vec::Constant(2, 2.0));
    sys.omega = PairRegion::all(Box::cube(2, -2.0, 2.0));
    // Fixed-point residuals of the full-period rotation must sit well under
    // the fixed point tolerance.
    sys.controls.integrator.dt = T / 500.0;
    return sys;
}

}  // namespace

BuiltinSystem builtin_system(const std::string& name) {
    if (name == "cubic1d") return make_cubic1d();
    if (name == "delay_oscillator") return make_delay_oscillator();
    if (name == "resonance") return make_resonance();
    if (name == "sphere_height") return make_sphere_height();
    if (name == "torus_flow") return make_torus_flow();
    if (name == "rotation") return make_rotation();
    throw std::invalid_argument("unknown builtin system '" + name + "'");
}

std::vector<std::string> builtin_names() {
    return {"cubic1d", "delay_oscillator", "resonance", "sphere_height", "torus_flow", "rotation"};
}

}  // namespace orbitcert
