#include "orbitcert/manifold.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <utility>

#include "orbitcert/errors.hpp"

namespace orbitcert {

namespace {

// Deterministic column sign convention: the entry of largest magnitude
// (first on ties) is made positive.
void normalize_column_signs(Mat& basis) {
    for (int j = 0; j < basis.cols(); ++j) {
        int imax = 0;
        double amax = 0.0;
        for (int i = 0; i < basis.rows(); ++i) {
            const double a = std::abs(basis(i, j));
            if (a > amax) {
                amax = a;
                imax = i;
            }
        }
        if (basis(imax, j) < 0.0) basis.col(j) = -basis.col(j);
    }
}

}  // namespace

EmbeddedManifold::EmbeddedManifold(int k, int c, ConstraintFn constraint,
                                   ConstraintJacFn jacobian)
    : ambient_dim_(k),
      constraint_dim_(c),
      constraint_(std::move(constraint)),
      constraint_jacobian_(std::move(jacobian)) {
    if (k < 1) throw std::invalid_argument("ambient dimension must be >= 1");
    if (c < 0 || c >= k) throw std::invalid_argument("constraint dimension must satisfy 0 <= c < k");
}

Vec EmbeddedManifold::constraint(const Vec& p) const {
    if (constraint_dim_ == 0) return Vec::Zero(0);
    return constraint_(p);
}

Mat EmbeddedManifold::constraint_jacobian(const Vec& p) const {
    if (constraint_dim_ == 0) return Mat::Zero(0, ambient_dim_);
    if (constraint_jacobian_) return constraint_jacobian_(p);
    const double h = fd_step(p);
    Mat jac(constraint_dim_, ambient_dim_);
    Vec pp = p;
    for (int j = 0; j < ambient_dim_; ++j) {
        pp[j] = p[j] + h;
        const Vec fplus = constraint_(pp);
        pp[j] = p[j] - h;
        const Vec fminus = constraint_(pp);
        pp[j] = p[j];
        jac.col(j) = (fplus - fminus) / (2.0 * h);
    }
    return jac;
}

bool EmbeddedManifold::on_manifold(const Vec& p) const {
    if (!p.allFinite()) return false;
    if (constraint_dim_ == 0) return true;
    return constraint_(p).cwiseAbs().maxCoeff() <= on_tolerance;
}

Vec EmbeddedManifold::project_tangent(const Vec& p, const Vec& v) const {
    if (constraint_dim_ == 0) return v;
    const Mat jac = constraint_jacobian(p);
    if (constraint_dim_ == 1) {
        const double nrm2 = jac.row(0).squaredNorm();
        if (nrm2 < 1e-24) {
            raise(ErrorCode::RankDeficient, "constraint Jacobian vanishes");
        }
        return v - jac.row(0).transpose() * (jac.row(0).dot(v) / nrm2);
    }
    Eigen::JacobiSVD<Mat> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv[sv.size() - 1] < rank_threshold * sv[0]) {
        raise(ErrorCode::RankDeficient, "constraint Jacobian is rank deficient");
    }
    // v - J^T (J J^T)^{-1} J v  via the SVD of J
    const Vec coeffs = svd.matrixV().transpose() * v;
    return v - svd.matrixV() * coeffs;
}

Vec EmbeddedManifold::retract(const Vec& p, const Vec& v) const {
    if (v.norm() > retract_step_cap) {
        throw std::invalid_argument("retract: tangent step exceeds step cap");
    }
    if (constraint_dim_ == 0) return p + v;
    Vec q = p + v;
    const double target = 0.5 * on_tolerance;
    for (int it = 0; it < retract_max_iter; ++it) {
        const Vec res = constraint_(q);
        if (res.cwiseAbs().maxCoeff() <= target) return q;
        const Mat jac = constraint_jacobian(q);
        const Mat gram = jac * jac.transpose();
        Eigen::LDLT<Mat> ldlt(gram);
        if (ldlt.info() != Eigen::Success) break;
        const Vec delta = jac.transpose() * ldlt.solve(res);
        if (!delta.allFinite()) break;
        q -= delta;
    }
    if (constraint_(q).cwiseAbs().maxCoeff() <= on_tolerance) return q;
    raise(ErrorCode::RetractionDiverged, "Newton correction onto the manifold failed");
}

Mat EmbeddedManifold::tangent_basis(const Vec& p) const {
    const int m = dim();
    if (constraint_dim_ == 0) return Mat::Identity(ambient_dim_, ambient_dim_);
    const Mat jac = constraint_jacobian(p);
    Eigen::JacobiSVD<Mat> svd(jac, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv[sv.size() - 1] < rank_threshold * sv[0]) {
        raise(ErrorCode::RankDeficient, "constraint Jacobian is rank deficient");
    }
    Mat basis = svd.matrixV().rightCols(m);
    normalize_column_signs(basis);
    return basis;
}

std::optional<Vec> EmbeddedManifold::project_point(const Vec& q0) const {
    if (constraint_dim_ == 0) return q0;
    Vec q = q0;
    for (int it = 0; it < 50; ++it) {
        const Vec res = constraint_(q);
        if (!res.allFinite()) return std::nullopt;
        if (res.cwiseAbs().maxCoeff() <= on_tolerance) return q;
        const Mat jac = constraint_jacobian(q);
        Eigen::JacobiSVD<Mat> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        if (sv[0] <= 0.0 || sv[sv.size() - 1] < rank_threshold * sv[0]) return std::nullopt;
        const Vec delta = svd.solve(res);
        if (!delta.allFinite()) return std::nullopt;
        q -= delta;
    }
    return std::nullopt;
}

EmbeddedManifold EmbeddedManifold::euclidean(int k) {
    return EmbeddedManifold(k, 0, nullptr, nullptr);
}

EmbeddedManifold EmbeddedManifold::sphere(int k) {
    auto constraint = [](const Vec& p) {
        Vec f(1);
        f[0] = p.squaredNorm() - 1.0;
        return f;
    };
    auto jacobian = [](const Vec& p) {
        Mat jac(1, p.size());
        jac.row(0) = 2.0 * p.transpose();
        return jac;
    };
    EmbeddedManifold m(k, 1, constraint, jacobian);
    m.euler_characteristic = (k % 2 == 1) ? 2 : 0;
    m.compact_bbox = Box::cube(k, -1.05, 1.05);
    return m;
}

EmbeddedManifold EmbeddedManifold::torus2(double R, double rho) {
    if (!(R > rho && rho > 0.0)) {
        throw std::invalid_argument("torus2 requires R > rho > 0");
    }
    auto constraint = [R, rho](const Vec& p) {
        const double s = std::hypot(p[0], p[1]);
        Vec f(1);
        f[0] = (s - R) * (s - R) + p[2] * p[2] - rho * rho;
        return f;
    };
    auto jacobian = [R](const Vec& p) {
        const double s = std::hypot(p[0], p[1]);
        Mat jac(1, 3);
        if (s == 0.0) {
            jac.setZero();  // rank deficient on the axis; callers detect it
            return jac;
        }
        const double factor = 2.0 * (s - R) / s;
        jac(0, 0) = factor * p[0];
        jac(0, 1) = factor * p[1];
        jac(0, 2) = 2.0 * p[2];
        return jac;
    };
    EmbeddedManifold m(3, 1, constraint, jacobian);
    m.euler_characteristic = 0;
    Vec lo(3), hi(3);
    lo << -(R + rho) - 0.05, -(R + rho) - 0.05, -rho - 0.05;
    hi << (R + rho) + 0.05, (R + rho) + 0.05, rho + 0.05;
    m.compact_bbox = Box{lo, hi};
    return m;
}

EmbeddedManifold EmbeddedManifold::implicit(int k, int c, ConstraintFn constraint,
                                            ConstraintJacFn jacobian,
                                            std::optional<int> euler_characteristic) {
    EmbeddedManifold m(k, c, std::move(constraint), std::move(jacobian));
    m.euler_characteristic = euler_characteristic;
    return m;
}

}  // namespace orbitcert
