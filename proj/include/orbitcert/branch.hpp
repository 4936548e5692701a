#pragma once

#include <string>
#include <vector>

#include "orbitcert/degree.hpp"
#include "orbitcert/integrate.hpp"
#include "orbitcert/poincare.hpp"
#include "orbitcert/region.hpp"

namespace orbitcert {

/// (λ, φ) whose initial value problem has a T-periodic solution; trivial when
/// λ = 0 and φ is constant at a zero of g.
struct StartingPair {
    double lambda = 0.0;
    History history;
    int local_sign = 0;  // sign of the zero it sits on (0 when unknown)
};

/// (λ, x) with x a discretized T-periodic solution of the delay equation.
struct PeriodicPair {
    double lambda = 0.0;
    Trajectory loop;   // one period [0, T]
    History initial;   // the history segment the loop was shot from
    double residual = 0.0;
    double sup_norm = 0.0;
    bool is_trivial = false;
};

enum class Termination { LambdaMax, NormMax, LeftOmega, Vertical, StepFailure };

const char* to_string(Termination reason);

struct Branch {
    std::vector<PeriodicPair> pairs;
    std::vector<double> arclength;  // cumulative, parallel to pairs
    Termination termination = Termination::StepFailure;
    StartingPair origin;
    /// StepFailure strictly inside a bounded Ω with λ and the norm below
    /// their caps: the one outcome a certified branch cannot produce.
    bool anomaly = false;
    std::string note;
};

struct ContinuationControls {
    double lambda_max = 5.0;
    double norm_max = 1e3;
    double ds0 = 1e-2;
    double ds_min = 1e-6;
    double ds_max = 0.5;
    double lambda_vert_tol = 1e-6;
    int n_vert = 5;
    int max_step_halvings = 12;
    int newton_max_iter = 25;
    double periodic_tol = 1e-8;
    int n_history_nodes = 32;
    PairRegion omega;  // unset contains == everything
    IntegratorOptions integrator;
};

/// One trivial starting pair (0, constant history at q) per zero of g in the
/// region, annotated with the zero's local sign. r_normalized == 0 produces
/// single-node histories.
[[nodiscard]] std::vector<StartingPair> trivial_starting_pairs(const EmbeddedManifold& manifold,
                                                               const TangentField& g,
                                                               const RegionPredicate& region,
                                                               double r_normalized,
                                                               int n_history_nodes = 32,
                                                               const ZeroSearchOptions& opts = {});

/// Node-wise tangent components of Q_λ(φ) ⊖ φ, stacked (m per node).
[[nodiscard]] Vec periodic_residual(const EmbeddedManifold& manifold, const TangentField& g,
                                    const PerturbationField& f, double lambda, const History& phi,
                                    double T, const IntegratorOptions& opts = {});

/// Newton on periodic_residual over the node tangent coordinates, updates
/// applied through retraction. Throws NewtonDiverged / SingularJacobian.
[[nodiscard]] History solve_periodic(const EmbeddedManifold& manifold, const TangentField& g,
                                     const PerturbationField& f, double lambda,
                                     const History& phi_guess, double T,
                                     const ContinuationControls& controls = {});

/// Pseudo-arclength continuation of T-periodic pairs from a trivial starting
/// pair. λ may decrease through folds; a branch pinned at λ = 0 while the
/// arclength grows terminates Vertical; f ≡ 0 yields the horizontal branch
/// directly.
[[nodiscard]] Branch continue_branch(const EmbeddedManifold& manifold, const TangentField& g,
                                     const PerturbationField& f, double T, double r,
                                     const StartingPair& origin,
                                     const ContinuationControls& controls = {});

struct Certificate {
    int degree = 0;   // deg(g, Ω ∩ M)
    bool issued = false;
    std::vector<StartingPair> origins;
    std::vector<Branch> witnesses;
    bool any_anomaly = false;

    [[nodiscard]] std::string report() const;
};

/// Computes deg(g, Ω ∩ M); when nonzero, certifies a noncompact connected
/// set of nontrivial T-periodic pairs in Ω meeting the trivial ones, and
/// attaches the continued branches from every trivial starting pair in Ω ∩ M
/// as numerical witnesses. Zero degree means "no certificate", not "no
/// branch".
[[nodiscard]] Certificate branch_certificate(const EmbeddedManifold& manifold,
                                             const TangentField& g, const PerturbationField& f,
                                             double T, double r, const PairRegion& omega,
                                             const ContinuationControls& controls = {},
                                             const ZeroSearchOptions& search = {});

}  // namespace orbitcert
