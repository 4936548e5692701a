#pragma once

#include <optional>
#include <vector>

#include "orbitcert/fields.hpp"
#include "orbitcert/manifold.hpp"
#include "orbitcert/types.hpp"

namespace orbitcert {

struct IntegratorOptions {
    double dt = 0.0;            // fixed step size; 0 picks span/200
    bool adaptive = false;      // step-doubling local error control (flow_ode only)
    double local_tol = 1e-10;   // per-step error target when adaptive
    double escape_radius = 1e6; // |x| beyond this counts as leaving every compact set
};

/// Solution samples on a strictly increasing time grid, states on M, with the
/// right-hand side stored per node so dense output is cubic Hermite.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<Vec> derivs;

    [[nodiscard]] double t_begin() const { return times.front(); }
    [[nodiscard]] double t_end() const { return times.back(); }
    [[nodiscard]] const Vec& endpoint() const { return states.back(); }

    /// Piecewise cubic Hermite interpolation, no manifold correction.
    [[nodiscard]] Vec raw_at(double t) const;
    /// Interpolation post-composed with projection onto M.
    [[nodiscard]] Vec at(const EmbeddedManifold& manifold, double t) const;

    [[nodiscard]] double sup_norm() const;
    /// Largest componentwise constraint violation over all nodes.
    [[nodiscard]] double max_constraint_violation(const EmbeddedManifold& manifold) const;
};

/// Discretized element of C([-r,0], M): n_h+1 uniform nodes, cubic Hermite
/// interpolation with finite-difference slopes, values corrected onto M.
/// delay == 0 degenerates to the single node φ(0).
struct History {
    double delay = 0.0;
    std::vector<double> grid;   // -r = grid[0] < ... < grid[n] = 0
    std::vector<Vec> values;

    static History constant(const Vec& p, double delay, int n_nodes = 32);

    [[nodiscard]] int nodes() const { return static_cast<int>(values.size()); }
    [[nodiscard]] const Vec& at_zero() const { return values.back(); }
    [[nodiscard]] Vec at(const EmbeddedManifold& manifold, double theta) const;
    [[nodiscard]] std::vector<Vec> fd_slopes() const;

    /// sup over grid nodes of the ambient distance (both on the same grid).
    [[nodiscard]] double sup_distance(const History& other) const;
    [[nodiscard]] double sup_norm() const;
};

/// r = 0 maps to nullopt (the equation is an ODE); otherwise returns
/// r' = r - nT with n the unique integer giving 0 < r' <= T.
[[nodiscard]] std::optional<double> normalize_delay(double r, double T);

/// Integrates ẋ = g(x) from p over [t0, t1], each accepted step retracted
/// onto M. Throws BlowUp past opts.escape_radius.
[[nodiscard]] Trajectory flow_ode(const EmbeddedManifold& manifold, const TangentField& g,
                                  const Vec& p, double t0, double t1,
                                  const IntegratorOptions& opts = {});

/// Integrates ẋ = g(x) + λ f(t, x, x(t-r)) by the method of steps from the
/// history φ; the returned trajectory covers [-r, t1] and includes φ.
/// φ.delay == 0 treats the delayed argument as the current state.
[[nodiscard]] Trajectory flow_dde(const EmbeddedManifold& manifold, const TangentField& g,
                                  const PerturbationField& f, double lambda, const History& phi,
                                  double t1, const IntegratorOptions& opts = {});

/// Monodromy-style derivative of the time-T flow map: integrates
/// v̇ = Dg(x(t)) v along the trajectory for each tangent basis vector at p,
/// projecting onto the moving tangent space; the result expresses
/// dP(p) : T_pM → T_{P(p)}M in the deterministic bases at p and P(p).
[[nodiscard]] Mat variational_flow(const EmbeddedManifold& manifold, const TangentField& g,
                                   const Vec& p, double T, const IntegratorOptions& opts = {});

}  // namespace orbitcert
