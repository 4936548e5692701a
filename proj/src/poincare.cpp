#include "orbitcert/poincare.hpp"

#include <stdexcept>

#include "orbitcert/errors.hpp"

namespace orbitcert {

namespace {

History read_end_segment(const EmbeddedManifold& manifold, const Trajectory& traj, double T,
                         const History& like) {
    History out;
    out.delay = like.delay;
    out.grid = like.grid;
    out.values.resize(like.values.size());
    for (std::size_t i = 0; i < like.grid.size(); ++i) {
        out.values[i] = traj.at(manifold, T + like.grid[i]);
    }
    return out;
}

}  // namespace

Vec poincare_P(const EmbeddedManifold& manifold, const TangentField& g, const Vec& p, double T,
               const IntegratorOptions& opts) {
    try {
        return flow_ode(manifold, g, p, 0.0, T, opts).endpoint();
    } catch (const Error& err) {
        if (err.code() == ErrorCode::BlowUp) {
            raise(ErrorCode::OutsideDomain, "p is not in dom(P): solution not defined up to T");
        }
        throw;
    }
}

HistoryOperatorResult translation_Q(const EmbeddedManifold& manifold, const TangentField& g,
                                    const History& phi, double T, const IntegratorOptions& opts) {
    if (T < phi.delay) {
        throw std::invalid_argument("translation_Q requires T >= r (normalize the delay first)");
    }
    try {
        Trajectory traj = flow_ode(manifold, g, phi.at_zero(), 0.0, T, opts);
        return {read_end_segment(manifold, traj, T, phi), std::move(traj)};
    } catch (const Error& err) {
        if (err.code() == ErrorCode::BlowUp) {
            raise(ErrorCode::OutsideDomain, "φ is not in dom(Q): φ(0) not in dom(P)");
        }
        throw;
    }
}

HistoryOperatorResult translation_Q_lambda(const EmbeddedManifold& manifold, const TangentField& g,
                                           const PerturbationField& f, double lambda,
                                           const History& phi, double T,
                                           const IntegratorOptions& opts) {
    if (T < phi.delay) {
        throw std::invalid_argument("translation_Q_lambda requires T >= r");
    }
    if (lambda < 0.0) throw std::invalid_argument("translation_Q_lambda requires lambda >= 0");
    try {
        Trajectory traj = flow_dde(manifold, g, f, lambda, phi, T, opts);
        return {read_end_segment(manifold, traj, T, phi), std::move(traj)};
    } catch (const Error& err) {
        if (err.code() == ErrorCode::BlowUp) {
            raise(ErrorCode::OutsideDomain, "(λ, φ) escaped before time T");
        }
        throw;
    }
}

History map_h(const EmbeddedManifold& manifold, const TangentField& g, const Vec& p, double T,
              double r, int n_nodes, const IntegratorOptions& opts) {
    if (T < r) throw std::invalid_argument("map_h requires T >= r");
    try {
        const Trajectory traj = flow_ode(manifold, g, p, 0.0, T, opts);
        const History like = History::constant(p, r, n_nodes);
        return read_end_segment(manifold, traj, T, like);
    } catch (const Error& err) {
        if (err.code() == ErrorCode::BlowUp) {
            raise(ErrorCode::OutsideDomain, "p is not in dom(P)");
        }
        throw;
    }
}

Vec map_k(const History& phi) {
    return phi.at_zero();
}

}  // namespace orbitcert
