#pragma once

#include <functional>
#include <utility>

#include "orbitcert/manifold.hpp"
#include "orbitcert/types.hpp"

namespace orbitcert {

/// Autonomous vector field p ↦ g(p) ∈ ℝᵏ with a k x k Jacobian, analytic when
/// supplied and central finite differences otherwise. Immutable and reentrant.
class TangentField {
  public:
    using EvalFn = std::function<Vec(const Vec&)>;
    using JacFn = std::function<Mat(const Vec&)>;

    TangentField() = default;
    explicit TangentField(EvalFn eval, JacFn jacobian = nullptr)
        : eval_(std::move(eval)), jacobian_(std::move(jacobian)) {}

    [[nodiscard]] Vec operator()(const Vec& p) const { return eval_(p); }
    [[nodiscard]] Mat jacobian(const Vec& p) const;

    [[nodiscard]] bool has_analytic_jacobian() const { return static_cast<bool>(jacobian_); }

  private:
    EvalFn eval_;
    JacFn jacobian_;
};

/// Time-periodic perturbation (t, p, q) ↦ f(t, p, q) ∈ T_pM with period T in t
/// and a fixed delay r feeding the third argument.
class PerturbationField {
  public:
    using EvalFn = std::function<Vec(double, const Vec&, const Vec&)>;

    PerturbationField() = default;
    PerturbationField(EvalFn eval, double period, double delay)
        : eval_(std::move(eval)), period_(period), delay_(delay) {}

    [[nodiscard]] Vec operator()(double t, const Vec& p, const Vec& q) const {
        return eval_(t, p, q);
    }
    [[nodiscard]] double period() const { return period_; }
    [[nodiscard]] double delay() const { return delay_; }

    [[nodiscard]] bool valid() const { return static_cast<bool>(eval_); }

  private:
    EvalFn eval_;
    double period_ = 0.0;
    double delay_ = 0.0;
};

/// Wraps a field so it evaluates as the tangent projection of the original;
/// tangency holds by construction. The Jacobian of the wrapped field is
/// finite-differenced (the projector's derivative contributes).
[[nodiscard]] TangentField tangentize(const EmbeddedManifold& manifold, const TangentField& raw);
[[nodiscard]] PerturbationField tangentize(const EmbeddedManifold& manifold,
                                           const PerturbationField& raw);

/// Checks |g(p) - proj g(p)| <= tang_tol * (1 + |g(p)|) at p.
[[nodiscard]] bool is_tangent_at(const EmbeddedManifold& manifold, const TangentField& field,
                                 const Vec& p, double tang_tol = 1e-8);

/// Jacobian of g at a zero q restricted to T_qM: A = Bᵀ Dg(q) B with
/// B = tangent_basis(q), plus sign(det A). The sign is basis independent.
/// Throws NearSingular when |det A| falls under singular_tol * max(|A|,1)^m.
[[nodiscard]] std::pair<Mat, int> tangent_jacobian(const EmbeddedManifold& manifold,
                                                   const TangentField& field, const Vec& q,
                                                   double zero_tol = 1e-8,
                                                   double singular_tol = 1e-8);

/// Same reduction A = Bᵀ Dg(p) B without the zero precondition or the
/// degeneracy check; used by Newton iterations away from zeros.
[[nodiscard]] Mat reduced_jacobian(const EmbeddedManifold& manifold, const TangentField& field,
                                   const Vec& p);

}  // namespace orbitcert
