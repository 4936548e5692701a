#include "orbitcert/fields.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "orbitcert/errors.hpp"

namespace orbitcert {

Mat TangentField::jacobian(const Vec& p) const {
    if (jacobian_) return jacobian_(p);
    const int k = static_cast<int>(p.size());
    const double h = fd_step(p);
    Mat jac(k, k);
    Vec pp = p;
    for (int j = 0; j < k; ++j) {
        pp[j] = p[j] + h;
        const Vec fplus = eval_(pp);
        pp[j] = p[j] - h;
        const Vec fminus = eval_(pp);
        pp[j] = p[j];
        jac.col(j) = (fplus - fminus) / (2.0 * h);
    }
    return jac;
}

TangentField tangentize(const EmbeddedManifold& manifold, const TangentField& raw) {
    if (manifold.constraint_dim() == 0) return raw;
    auto eval = [manifold, raw](const Vec& p) { return manifold.project_tangent(p, raw(p)); };
    return TangentField(eval);
}

PerturbationField tangentize(const EmbeddedManifold& manifold, const PerturbationField& raw) {
    if (manifold.constraint_dim() == 0 || !raw.valid()) return raw;
    auto eval = [manifold, raw](double t, const Vec& p, const Vec& q) {
        return manifold.project_tangent(p, raw(t, p, q));
    };
    return PerturbationField(eval, raw.period(), raw.delay());
}

bool is_tangent_at(const EmbeddedManifold& manifold, const TangentField& field, const Vec& p,
                   double tang_tol) {
    const Vec value = field(p);
    const Vec projected = manifold.project_tangent(p, value);
    return (value - projected).norm() <= tang_tol * (1.0 + value.norm());
}

Mat reduced_jacobian(const EmbeddedManifold& manifold, const TangentField& field, const Vec& p) {
    const Mat basis = manifold.tangent_basis(p);
    return basis.transpose() * field.jacobian(p) * basis;
}

std::pair<Mat, int> tangent_jacobian(const EmbeddedManifold& manifold, const TangentField& field,
                                     const Vec& q, double zero_tol, double singular_tol) {
    const double gnorm = field(q).norm();
    if (gnorm > 10.0 * zero_tol) {
        std::ostringstream msg;
        msg << "tangent_jacobian requires a zero of the field, |g(q)| = " << gnorm;
        throw std::invalid_argument(msg.str());
    }
    const int m = manifold.dim();
    const Mat reduced = reduced_jacobian(manifold, field, q);
    const double det = reduced.determinant();
    // max(|A|, 1) keeps the threshold meaningful when A itself is tiny (m = 1
    // in particular, where |det A| = |A| makes a pure relative test vacuous).
    const double scale = std::max(reduced.norm(), 1.0);
    if (std::abs(det) < singular_tol * std::pow(scale, m)) {
        raise(ErrorCode::NearSingular, "degenerate zero: |det A| below threshold");
    }
    return {reduced, det > 0.0 ? 1 : -1};
}

}  // namespace orbitcert
