#pragma once

#include "orbitcert/integrate.hpp"

namespace orbitcert {

/// A translation-operator application: the output history together with the
/// full trajectory it was read from.
struct HistoryOperatorResult {
    History output;
    Trajectory underlying;
};

/// Time-T map of ẋ = g(x). Throws OutsideDomain when the solution from p
/// is not defined up to T (wraps BlowUp).
[[nodiscard]] Vec poincare_P(const EmbeddedManifold& manifold, const TangentField& g,
                             const Vec& p, double T, const IntegratorOptions& opts = {});

/// Translation operator Q(φ)(θ) = x(φ(0), T+θ). Depends on φ only through
/// φ(0); the output is resampled onto φ's grid. Requires T >= φ.delay.
[[nodiscard]] HistoryOperatorResult translation_Q(const EmbeddedManifold& manifold,
                                                  const TangentField& g, const History& phi,
                                                  double T, const IntegratorOptions& opts = {});

/// Perturbed translation operator: Q_λ(φ)(θ) is the delay equation's
/// solution from history φ evaluated at T+θ; coincides with Q at λ = 0.
[[nodiscard]] HistoryOperatorResult translation_Q_lambda(const EmbeddedManifold& manifold,
                                                         const TangentField& g,
                                                         const PerturbationField& f, double lambda,
                                                         const History& phi, double T,
                                                         const IntegratorOptions& opts = {});

/// h(p)(θ) = x(p, θ+T), the history the unperturbed flow writes ending at
/// time T. Requires T >= r.
[[nodiscard]] History map_h(const EmbeddedManifold& manifold, const TangentField& g, const Vec& p,
                            double T, double r, int n_nodes = 32,
                            const IntegratorOptions& opts = {});

/// k(φ) = φ(0).
[[nodiscard]] Vec map_k(const History& phi);

}  // namespace orbitcert
