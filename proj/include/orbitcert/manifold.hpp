#pragma once

#include <functional>
#include <optional>

#include "orbitcert/types.hpp"

namespace orbitcert {

/// A manifold M ⊆ ℝᵏ given implicitly as the zero set of a constraint map
/// F : ℝᵏ → ℝᶜ whose Jacobian has full row rank c on M. c = 0 means M = ℝᵏ.
///
/// Values are immutable after construction and safe to share across threads;
/// all member operations are pure functions of their arguments.
class EmbeddedManifold {
  public:
    using ConstraintFn = std::function<Vec(const Vec&)>;
    using ConstraintJacFn = std::function<Mat(const Vec&)>;

    /// Defaults to the real line; mostly useful as a placeholder before
    /// assignment.
    EmbeddedManifold() : EmbeddedManifold(1, 0, nullptr, nullptr) {}

    [[nodiscard]] int ambient_dim() const { return ambient_dim_; }
    [[nodiscard]] int constraint_dim() const { return constraint_dim_; }
    /// Intrinsic dimension m = k - c.
    [[nodiscard]] int dim() const { return ambient_dim_ - constraint_dim_; }

    [[nodiscard]] Vec constraint(const Vec& p) const;
    /// c x k matrix; analytic when supplied, central finite differences otherwise.
    [[nodiscard]] Mat constraint_jacobian(const Vec& p) const;

    /// Componentwise |F(p)| <= on_tolerance.
    [[nodiscard]] bool on_manifold(const Vec& p) const;

    /// Orthogonal projection of v onto the null space of the constraint
    /// Jacobian at p. Throws RankDeficient.
    [[nodiscard]] Vec project_tangent(const Vec& p, const Vec& v) const;

    /// Moves p by the tangent vector v and corrects back onto M with Newton
    /// steps in the normal directions. Throws RetractionDiverged.
    [[nodiscard]] Vec retract(const Vec& p, const Vec& v) const;

    /// k x m matrix whose columns are an orthonormal basis of ker DF(p),
    /// with a deterministic sign convention. Throws RankDeficient.
    [[nodiscard]] Mat tangent_basis(const Vec& p) const;

    /// Closest-point style projection of an arbitrary ambient point onto M
    /// (Gauss-Newton on the constraint). nullopt when the iteration fails,
    /// e.g. from a seed where DF is rank deficient.
    [[nodiscard]] std::optional<Vec> project_point(const Vec& q) const;

    static EmbeddedManifold euclidean(int k);
    /// Unit sphere S^{k-1} in ℝᵏ (χ = 2 for k odd, 0 for k even).
    static EmbeddedManifold sphere(int k);
    /// Torus of revolution about the z axis in ℝ³, radii R > rho > 0 (χ = 0).
    static EmbeddedManifold torus2(double R, double rho);
    static EmbeddedManifold implicit(int k, int c, ConstraintFn constraint,
                                     ConstraintJacFn jacobian = nullptr,
                                     std::optional<int> euler_characteristic = {});

    std::optional<int> euler_characteristic;
    /// Ambient box covering M, used to seed searches on compact manifolds.
    std::optional<Box> compact_bbox;

    double on_tolerance = 1e-9;
    double rank_threshold = 1e-8;
    double retract_step_cap = 1e6;
    int retract_max_iter = 30;

  private:
    EmbeddedManifold(int k, int c, ConstraintFn constraint, ConstraintJacFn jacobian);

    int ambient_dim_;
    int constraint_dim_;
    ConstraintFn constraint_;
    ConstraintJacFn constraint_jacobian_;
};

}  // namespace orbitcert
