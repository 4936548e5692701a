#include "orbitcert/branch.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "orbitcert/errors.hpp"

namespace orbitcert {

const char* to_string(Termination reason) {
    switch (reason) {
        case Termination::LambdaMax: return "LambdaMax";
        case Termination::NormMax: return "NormMax";
        case Termination::LeftOmega: return "LeftOmega";
        case Termination::Vertical: return "Vertical";
        case Termination::StepFailure: return "StepFailure";
    }
    return "Unknown";
}

namespace {

struct NodeBases {
    std::vector<Mat> basis;  // empty when M = ℝᵏ
    int m = 0;
    int n = 0;
};

NodeBases bases_at(const EmbeddedManifold& manifold, const History& phi) {
    NodeBases bases;
    bases.m = manifold.dim();
    bases.n = phi.nodes();
    if (manifold.constraint_dim() > 0) {
        bases.basis.reserve(phi.values.size());
        for (const auto& v : phi.values) bases.basis.push_back(manifold.tangent_basis(v));
    }
    return bases;
}

History apply_offsets(const EmbeddedManifold& manifold, const History& base,
                      const NodeBases& bases, const Vec& u) {
    History phi = base;
    const int m = bases.m;
    for (int i = 0; i < bases.n; ++i) {
        const Vec local = u.segment(i * m, m);
        if (bases.basis.empty()) {
            phi.values[i] = base.values[i] + local;
        } else {
            phi.values[i] = manifold.retract(base.values[i], Vec(bases.basis[i] * local));
        }
    }
    return phi;
}

// Tangent coordinates of target relative to base, stacked node-wise.
Vec coords_of(const History& target, const History& base, const NodeBases& bases) {
    const int m = bases.m;
    Vec u(m * bases.n);
    for (int i = 0; i < bases.n; ++i) {
        const Vec diff = target.values[i] - base.values[i];
        u.segment(i * m, m) = bases.basis.empty() ? diff : Vec(bases.basis[i].transpose() * diff);
    }
    return u;
}

// Continuation metric: <(dλ,du),(dλ',du')> = dλ dλ' + (1/n) Σ du_i · du_i'.
double metric_dot(double dl1, const Vec& u1, double dl2, const Vec& u2, int n) {
    return dl1 * dl2 + u1.dot(u2) / n;
}

double metric_norm(double dl, const Vec& u, int n) {
    return std::sqrt(metric_dot(dl, u, dl, u, n));
}

History sanitize(const EmbeddedManifold& manifold, History phi) {
    if (manifold.constraint_dim() == 0) return phi;
    for (auto& v : phi.values) {
        if (auto projected = manifold.project_point(v)) v = *projected;
    }
    return phi;
}

Vec residual_from_trajectory(const EmbeddedManifold& manifold, const Trajectory& traj,
                             const History& phi, double T) {
    const int m = manifold.dim();
    const int n = phi.nodes();
    Vec res(m * n);
    for (int i = 0; i < n; ++i) {
        const Vec image = traj.at(manifold, T + phi.grid[i]);
        const Vec diff = image - phi.values[i];
        if (manifold.constraint_dim() == 0) {
            res.segment(i * m, m) = diff;
        } else {
            res.segment(i * m, m) = manifold.tangent_basis(phi.values[i]).transpose() * diff;
        }
    }
    return res;
}

Trajectory restrict_to_period(const Trajectory& traj) {
    Trajectory loop;
    std::size_t start = 0;
    while (start + 1 < traj.times.size() && traj.times[start] < -1e-14) ++start;
    loop.times.assign(traj.times.begin() + start, traj.times.end());
    loop.states.assign(traj.states.begin() + start, traj.states.end());
    loop.derivs.assign(traj.derivs.begin() + start, traj.derivs.end());
    return loop;
}

PeriodicPair make_pair(const EmbeddedManifold& manifold, const TangentField& g,
                       const PerturbationField& f, double lambda, const History& phi, double T,
                       const ContinuationControls& controls) {
    Trajectory traj = flow_dde(manifold, g, f, lambda, phi, T, controls.integrator);
    PeriodicPair pair;
    pair.lambda = lambda;
    pair.residual = residual_from_trajectory(manifold, traj, phi, T)
                        .cwiseAbs()
                        .maxCoeff();
    pair.loop = restrict_to_period(traj);
    pair.initial = phi;
    pair.sup_norm = pair.loop.sup_norm();
    const Vec& start = phi.at_zero();
    double flat = 0.0;
    for (const auto& s : pair.loop.states) flat = std::max(flat, (s - start).norm());
    pair.is_trivial = lambda <= 1e-12 && flat <= 1e-7 && g(start).norm() <= 1e-7;
    return pair;
}

// Newton core shared by solve_periodic and the bordered corrector. The
// residual map is supplied as a callable on the full unknown vector.
struct NewtonOutcome {
    Vec solution;
    double residual_norm = 0.0;
    int iterations = 0;
};

template <typename ResidualFn>
NewtonOutcome newton_solve(const ResidualFn& residual, Vec z0, int max_iter, double tol,
                           double step_cap) {
    Vec z = std::move(z0);
    Vec res = residual(z);
    const int dim = static_cast<int>(res.size());
    if (dim != z.size()) {
        throw std::logic_error("newton_solve requires a square system");
    }
    double initial = res.cwiseAbs().maxCoeff();
    for (int it = 0; it < max_iter; ++it) {
        const double rnorm = res.cwiseAbs().maxCoeff();
        if (rnorm <= tol) return {z, rnorm, it};
        const double eps = 1e-7 * (1.0 + z.cwiseAbs().maxCoeff());
        Mat jac(dim, dim);
        for (int j = 0; j < dim; ++j) {
            Vec zj = z;
            zj[j] += eps;
            jac.col(j) = (residual(zj) - res) / eps;
        }
        const double jmax = jac.cwiseAbs().maxCoeff();
        if (!(jmax > 1e-8 * std::max(1.0, rnorm))) {
            raise(ErrorCode::SingularJacobian, "periodicity Jacobian is numerically zero");
        }
        Eigen::FullPivLU<Mat> lu(jac);
        if (!lu.isInvertible()) {
            raise(ErrorCode::SingularJacobian,
                  "periodicity Jacobian is singular (possible bifurcation or resonance)");
        }
        const Vec step = lu.solve(Vec(-res));
        if (!step.allFinite() || step.cwiseAbs().maxCoeff() > step_cap) {
            raise(ErrorCode::NewtonDiverged, "Newton step exceeded the growth cap");
        }
        z += step;
        res = residual(z);
        const double rnew = res.cwiseAbs().maxCoeff();
        if (rnew > 1e4 * (initial + 1.0)) {
            raise(ErrorCode::NewtonDiverged, "residual grew out of control");
        }
    }
    if (res.cwiseAbs().maxCoeff() <= tol) {
        return {z, res.cwiseAbs().maxCoeff(), max_iter};
    }
    raise(ErrorCode::NewtonDiverged, "no convergence within the iteration budget");
}

bool perturbation_is_zero(const EmbeddedManifold& manifold, const PerturbationField& f, double T,
                          const Vec& anchor) {
    if (!f.valid()) return true;
    std::vector<Vec> points = {anchor};
    const int m = manifold.dim();
    if (m > 0) {
        try {
            const Mat basis = manifold.tangent_basis(anchor);
            points.push_back(manifold.retract(anchor, Vec(0.1 * basis.col(0))));
        } catch (const Error&) {
            // probing with the anchor alone is still meaningful
        }
    }
    for (double t : {0.0, 0.37 * T, 0.71 * T}) {
        for (const auto& p : points) {
            for (const auto& q : points) {
                if (f(t, p, q).norm() != 0.0) return false;
            }
        }
    }
    return true;
}

struct PostAcceptOutcome {
    bool stop = false;
    Termination reason = Termination::StepFailure;
};

PostAcceptOutcome check_caps(const PeriodicPair& pair, const ContinuationControls& controls,
                             int& vertical_count) {
    if (pair.lambda > controls.lambda_max) return {true, Termination::LambdaMax};
    if (pair.sup_norm > controls.norm_max) return {true, Termination::NormMax};
    if (controls.omega.contains && !controls.omega.contains(pair.lambda, pair.loop)) {
        return {true, Termination::LeftOmega};
    }
    if (std::abs(pair.lambda) <= controls.lambda_vert_tol) {
        ++vertical_count;
        if (vertical_count >= controls.n_vert) return {true, Termination::Vertical};
    } else {
        vertical_count = 0;
    }
    return {false, Termination::StepFailure};
}

void flag_anomaly(Branch& branch, const ContinuationControls& controls) {
    if (branch.termination != Termination::StepFailure) return;
    if (!controls.omega.contains || !controls.omega.bounded) return;
    const PeriodicPair& last = branch.pairs.back();
    if (!controls.omega.contains(last.lambda, last.loop)) return;
    if (controls.omega.is_near_boundary(last.lambda, last.loop)) return;
    if (last.lambda >= controls.lambda_max || last.sup_norm >= controls.norm_max) return;
    branch.anomaly = true;
    branch.note += " ANOMALY: certified branches cannot dead-end strictly inside a bounded Ω.";
}

// Uniform tangent shift: every node moves by h along its dir-th basis vector.
Vec uniform_shift(int n, int m, int dir, double h) {
    Vec u = Vec::Zero(n * m);
    for (int i = 0; i < n; ++i) u[i * m + dir] = h;
    return u;
}

}  // namespace

std::vector<StartingPair> trivial_starting_pairs(const EmbeddedManifold& manifold,
                                                 const TangentField& g,
                                                 const RegionPredicate& region,
                                                 double r_normalized, int n_history_nodes,
                                                 const ZeroSearchOptions& opts) {
    std::vector<StartingPair> pairs;
    for (const auto& zero : find_zeros(manifold, g, region, opts)) {
        StartingPair pair;
        pair.lambda = 0.0;
        pair.history = History::constant(zero.point, r_normalized, n_history_nodes);
        pair.local_sign = zero.local_sign;
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

Vec periodic_residual(const EmbeddedManifold& manifold, const TangentField& g,
                      const PerturbationField& f, double lambda, const History& phi, double T,
                      const IntegratorOptions& opts) {
    const Trajectory traj = flow_dde(manifold, g, f, lambda, phi, T, opts);
    return residual_from_trajectory(manifold, traj, phi, T);
}

History solve_periodic(const EmbeddedManifold& manifold, const TangentField& g,
                       const PerturbationField& f, double lambda, const History& phi_guess,
                       double T, const ContinuationControls& controls) {
    History base = sanitize(manifold, phi_guess);
    const int n = base.nodes();
    const int m = manifold.dim();
    const int dim = n * m;
    const double step_cap = 1e3 * (1.0 + base.sup_norm());

    double initial = -1.0;
    // The unknown is rebased after every step: offsets are always taken from
    // the current history, keeping the tangent bases consistent.
    for (int it = 0; it < controls.newton_max_iter; ++it) {
        const NodeBases bases = bases_at(manifold, base);
        const Vec res = periodic_residual(manifold, g, f, lambda, base, T, controls.integrator);
        const double rnorm = res.cwiseAbs().maxCoeff();
        if (rnorm <= controls.periodic_tol) return base;
        if (initial < 0.0) initial = rnorm;
        if (rnorm > 1e4 * (initial + 1.0)) {
            raise(ErrorCode::NewtonDiverged, "solve_periodic: residual grew out of control");
        }

        const double eps = 1e-7 * (1.0 + base.sup_norm());
        Mat jac(dim, dim);
        for (int j = 0; j < dim; ++j) {
            Vec u = Vec::Zero(dim);
            u[j] = eps;
            const History probe = apply_offsets(manifold, base, bases, u);
            jac.col(j) =
                (periodic_residual(manifold, g, f, lambda, probe, T, controls.integrator) - res) /
                eps;
        }
        const double jmax = jac.cwiseAbs().maxCoeff();
        if (!(jmax > 1e-8 * std::max(1.0, rnorm))) {
            raise(ErrorCode::SingularJacobian,
                  "solve_periodic: periodicity Jacobian is numerically zero");
        }
        Eigen::FullPivLU<Mat> lu(jac);
        if (!lu.isInvertible()) {
            raise(ErrorCode::SingularJacobian,
                  "solve_periodic: singular Jacobian (possible bifurcation or resonance)");
        }
        const Vec step = lu.solve(Vec(-res));
        if (!step.allFinite() || step.cwiseAbs().maxCoeff() > step_cap) {
            raise(ErrorCode::NewtonDiverged, "solve_periodic: step exceeded the growth cap");
        }
        base = apply_offsets(manifold, base, bases, step);
    }
    const Vec final_res = periodic_residual(manifold, g, f, lambda, base, T, controls.integrator);
    if (final_res.cwiseAbs().maxCoeff() <= controls.periodic_tol) return base;
    raise(ErrorCode::NewtonDiverged, "solve_periodic: no convergence within the iteration budget");
}

namespace {

// One pseudo-arclength corrector solve. Unknowns are (λ, u) with u the node
// tangent offsets from base; the constraint pins the tangential progress.
struct CorrectorProblem {
    const EmbeddedManifold& manifold;
    const TangentField& g;
    const PerturbationField& f;
    double T;
    const History& base;
    const NodeBases& bases;
    double lambda_base;
    double tau_lambda;
    const Vec& tau_u;
    double h;
    const ContinuationControls& controls;

    [[nodiscard]] Vec operator()(const Vec& z) const {
        const double lambda = z[0];
        const Vec u = z.tail(z.size() - 1);
        const History phi = apply_offsets(manifold, base, bases, u);
        const double lam = std::max(lambda, 0.0);
        Vec res(z.size());
        res.tail(z.size() - 1) =
            periodic_residual(manifold, g, f, lam, phi, T, controls.integrator);
        res[0] = tau_lambda * (lambda - lambda_base) + tau_u.dot(u) / bases.n - h;
        return res;
    }
};

}  // namespace

Branch continue_branch(const EmbeddedManifold& manifold, const TangentField& g,
                       const PerturbationField& f, double T, double r, const StartingPair& origin,
                       const ContinuationControls& controls) {
    Branch branch;
    branch.origin = origin;

    const auto r_norm = normalize_delay(r, T);
    const double rn = r_norm.value_or(0.0);
    History phi0 = sanitize(manifold, origin.history);
    if (std::abs(phi0.delay - rn) > 1e-12) {
        // Starting history built with an unnormalized delay: restart from its
        // value at 0 (trivial pairs are constant, so nothing is lost).
        phi0 = History::constant(phi0.at_zero(), rn, controls.n_history_nodes);
    }

    const int n = phi0.nodes();
    const int m = manifold.dim();

    PeriodicPair first = make_pair(manifold, g, f, 0.0, phi0, T, controls);
    branch.pairs.push_back(first);
    branch.arclength.push_back(0.0);

    if (origin.local_sign == 0) {
        branch.note += " origin has zero local degree: certificate unavailable.";
    }

    // Degenerate perturbation: the horizontal set [0, λ_max] x {p̂} is the
    // branch; emit it directly.
    if (perturbation_is_zero(manifold, f, T, phi0.at_zero())) {
        const double step = std::min(controls.ds_max, controls.lambda_max / 10.0);
        double lambda = 0.0;
        while (lambda < controls.lambda_max) {
            const double lambda_next = std::min(lambda + step, controls.lambda_max);
            PeriodicPair pair = make_pair(manifold, g, f, lambda_next, phi0, T, controls);
            branch.pairs.push_back(pair);
            branch.arclength.push_back(branch.arclength.back() + (lambda_next - lambda));
            lambda = lambda_next;
            if (controls.omega.contains && !controls.omega.contains(lambda, pair.loop)) {
                branch.termination = Termination::LeftOmega;
                return branch;
            }
        }
        branch.termination = Termination::LambdaMax;
        branch.note += " horizontal branch (f == 0).";
        return branch;
    }

    int vertical_count = 0;

    // --- First step off the trivial pair: natural continuation in λ. The
    // analytic tangent is unavailable when the Jacobian is singular in λ
    // (resonance), so the tangent comes from a secant through two points.
    std::optional<History> phi1;
    double lambda1 = 0.0;
    for (double dlam = controls.ds0; dlam >= controls.ds_min; dlam *= 0.5) {
        try {
            History candidate = solve_periodic(manifold, g, f, dlam, phi0, T, controls);
            phi1 = std::move(candidate);
            lambda1 = dlam;
            break;
        } catch (const Error& err) {
            if (err.code() != ErrorCode::NewtonDiverged &&
                err.code() != ErrorCode::SingularJacobian) {
                throw;
            }
        }
    }

    if (!phi1) {
        // No solution for any λ > 0 reachable from here. Probe for a branch
        // inside the λ = 0 slice: perturb the history and resolve at λ = 0.
        // Convergence away from φ0 exhibits a continuum of periodic solutions
        // of the unperturbed equation (the "completely vertical" situation).
        const double delta = std::max(1e-3, 10.0 * controls.ds_min);
        int dir = -1;
        History cur = phi0;
        for (int j = 0; j < m; ++j) {
            const NodeBases bases = bases_at(manifold, phi0);
            const History probe =
                apply_offsets(manifold, phi0, bases, uniform_shift(n, m, j, delta));
            try {
                History solved = solve_periodic(manifold, g, f, 0.0, probe, T, controls);
                if (solved.sup_distance(phi0) >= 0.5 * delta) {
                    dir = j;
                    cur = std::move(solved);
                    break;
                }
            } catch (const Error& err) {
                if (err.code() != ErrorCode::NewtonDiverged &&
                    err.code() != ErrorCode::SingularJacobian) {
                    throw;
                }
            }
        }
        if (dir < 0) {
            branch.termination = Termination::StepFailure;
            branch.note += " no continuation direction found at the origin.";
            flag_anomaly(branch, controls);
            return branch;
        }

        // Walk the vertical family at λ = 0.
        {
            PeriodicPair pair = make_pair(manifold, g, f, 0.0, cur, T, controls);
            branch.pairs.push_back(pair);
            branch.arclength.push_back(branch.arclength.back() + delta);
            const auto outcome = check_caps(pair, controls, vertical_count);
            if (outcome.stop) {
                branch.termination = outcome.reason;
                return branch;
            }
        }
        double h = controls.ds0;
        while (true) {
            const NodeBases bases = bases_at(manifold, cur);
            const History probe =
                apply_offsets(manifold, cur, bases, uniform_shift(n, m, dir, h));
            bool accepted = false;
            try {
                History solved = solve_periodic(manifold, g, f, 0.0, probe, T, controls);
                if (solved.sup_distance(cur) >= 0.5 * h) {
                    const double progress = solved.sup_distance(cur);
                    cur = std::move(solved);
                    PeriodicPair pair = make_pair(manifold, g, f, 0.0, cur, T, controls);
                    branch.pairs.push_back(pair);
                    branch.arclength.push_back(branch.arclength.back() + progress);
                    accepted = true;
                    const auto outcome = check_caps(pair, controls, vertical_count);
                    if (outcome.stop) {
                        branch.termination = outcome.reason;
                        return branch;
                    }
                }
            } catch (const Error& err) {
                if (err.code() != ErrorCode::NewtonDiverged &&
                    err.code() != ErrorCode::SingularJacobian) {
                    throw;
                }
            }
            if (accepted) {
                h = std::min(2.0 * h, controls.ds_max);
            } else {
                h *= 0.5;
                if (h < controls.ds_min) {
                    branch.termination = Termination::StepFailure;
                    branch.note += " vertical walk stalled.";
                    flag_anomaly(branch, controls);
                    return branch;
                }
            }
        }
    }

    // Second accepted pair from the natural step.
    {
        PeriodicPair pair = make_pair(manifold, g, f, lambda1, *phi1, T, controls);
        branch.pairs.push_back(pair);
        const NodeBases bases1 = bases_at(manifold, *phi1);
        const Vec du = -coords_of(phi0, *phi1, bases1);
        branch.arclength.push_back(branch.arclength.back() + metric_norm(lambda1, du, n));
        const auto outcome = check_caps(pair, controls, vertical_count);
        if (outcome.stop) {
            branch.termination = outcome.reason;
            return branch;
        }
    }

    // --- Main pseudo-arclength loop.
    History base = *phi1;
    double lambda_cur = lambda1;
    History prev = phi0;
    double lambda_prev = 0.0;
    double h = controls.ds0;
    const double step_cap = 10.0;  // corrector Newton step bound in (λ, u)
    const int max_pairs = 5000;

    while (static_cast<int>(branch.pairs.size()) < max_pairs) {
        const NodeBases bases = bases_at(manifold, base);
        // Secant tangent in the current base's coordinates.
        Vec du = -coords_of(prev, base, bases);
        double dl = lambda_cur - lambda_prev;
        const double len = metric_norm(dl, du, n);
        if (len <= 0.0) {
            branch.termination = Termination::StepFailure;
            branch.note += " zero-length secant.";
            flag_anomaly(branch, controls);
            return branch;
        }
        dl /= len;
        du /= len;

        bool accepted = false;
        int halvings = 0;
        while (halvings <= controls.max_step_halvings) {
            Vec z0(1 + n * m);
            z0[0] = lambda_cur + h * dl;
            z0.tail(n * m) = h * du;
            const CorrectorProblem problem{manifold, g,  f,  T,        base, bases,
                                           lambda_cur,   dl, du, h,        controls};
            try {
                const NewtonOutcome outcome = newton_solve(
                    problem, z0, controls.newton_max_iter, controls.periodic_tol, step_cap);
                const double lambda_new = outcome.solution[0];
                if (lambda_new < -1e-9) {
                    // Branches live in λ >= 0; treat as a failed step.
                    ++halvings;
                    h *= 0.5;
                    continue;
                }
                const Vec u_new = outcome.solution.tail(n * m);
                History phi_new = apply_offsets(manifold, base, bases, u_new);
                const double lam = std::max(lambda_new, 0.0);
                PeriodicPair pair = make_pair(manifold, g, f, lam, phi_new, T, controls);
                branch.pairs.push_back(pair);
                branch.arclength.push_back(branch.arclength.back() +
                                           metric_norm(lambda_new - lambda_cur, u_new, n));
                prev = std::move(base);
                lambda_prev = lambda_cur;
                base = std::move(phi_new);
                lambda_cur = lam;
                accepted = true;
                const auto capped = check_caps(pair, controls, vertical_count);
                if (capped.stop) {
                    branch.termination = capped.reason;
                    return branch;
                }
                if (outcome.iterations <= 4) h = std::min(2.0 * h, controls.ds_max);
                break;
            } catch (const Error& err) {
                if (err.code() != ErrorCode::NewtonDiverged &&
                    err.code() != ErrorCode::SingularJacobian) {
                    throw;
                }
                ++halvings;
                h *= 0.5;
                if (h < controls.ds_min) break;
            }
        }
        if (!accepted) {
            branch.termination = Termination::StepFailure;
            branch.note += " corrector failed after max step halvings.";
            flag_anomaly(branch, controls);
            return branch;
        }
    }
    branch.termination = Termination::StepFailure;
    branch.note += " pair budget exhausted.";
    flag_anomaly(branch, controls);
    return branch;
}

Certificate branch_certificate(const EmbeddedManifold& manifold, const TangentField& g,
                               const PerturbationField& f, double T, double r,
                               const PairRegion& omega, const ContinuationControls& controls,
                               const ZeroSearchOptions& search) {
    Certificate cert;
    const RegionPredicate slice = omega.m_slice(T);
    cert.degree = degree(manifold, g, slice, search);
    cert.issued = (cert.degree != 0);
    if (!cert.issued) return cert;

    const auto r_norm = normalize_delay(r, T);
    cert.origins = trivial_starting_pairs(manifold, g, slice, r_norm.value_or(0.0),
                                          controls.n_history_nodes, search);
    ContinuationControls launched = controls;
    launched.omega = omega;
    for (const auto& origin : cert.origins) {
        Branch witness = continue_branch(manifold, g, f, T, r, origin, launched);
        cert.any_anomaly = cert.any_anomaly || witness.anomaly;
        cert.witnesses.push_back(std::move(witness));
    }
    return cert;
}

std::string Certificate::report() const {
    std::ostringstream out;
    out << "certificate: deg(g, Omega ∩ M) = " << degree << "\n";
    if (!issued) {
        out << "status: NO CERTIFICATE (degree is zero; this does not exclude branches)\n";
        return out.str();
    }
    out << "status: ISSUED — Omega contains a connected set of nontrivial T-periodic pairs\n"
        << "        meeting {(0,p): g(p)=0} whose closure in Omega is not compact.\n"
        << "witness branches (" << witnesses.size() << "):\n";
    for (std::size_t i = 0; i < witnesses.size(); ++i) {
        const Branch& b = witnesses[i];
        double lambda_hi = 0.0;
        double sup_hi = 0.0;
        for (const auto& p : b.pairs) {
            lambda_hi = std::max(lambda_hi, p.lambda);
            sup_hi = std::max(sup_hi, p.sup_norm);
        }
        out << "  [" << i << "] origin=[" << b.origin.history.at_zero().transpose()
            << "] sign=" << b.origin.local_sign << " pairs=" << b.pairs.size()
            << " arclength=" << (b.arclength.empty() ? 0.0 : b.arclength.back())
            << " lambda_max=" << lambda_hi << " sup_norm_max=" << sup_hi
            << " termination=" << to_string(b.termination)
            << (b.anomaly ? " ANOMALY" : "") << "\n";
        if (!b.note.empty()) out << "      note:" << b.note << "\n";
    }
    out << "soundness: " << (any_anomaly ? "FAIL (interior dead-end)" : "PASS") << "\n";
    return out.str();
}

}  // namespace orbitcert
