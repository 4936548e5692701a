#include "orbitcert/index.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "orbitcert/errors.hpp"

namespace orbitcert {

namespace {

bool lex_less(const Vec& a, const Vec& b) {
    for (int j = 0; j < a.size(); ++j) {
        if (a[j] < b[j]) return true;
        if (a[j] > b[j]) return false;
    }
    return false;
}

// Displacement of the time-T map in the tangent coordinates at p.
Vec displacement(const EmbeddedManifold& manifold, const TangentField& g, const Vec& p, double T,
                 const Mat& basis, const IntegratorOptions& integrator) {
    const Vec image = poincare_P(manifold, g, p, T, integrator);
    return basis.transpose() * (image - p);
}

// Newton iteration for P(p) = p with finite-difference Jacobian in tangent
// coordinates. Returns nullopt on failure.
std::optional<Vec> newton_fixed_point(const EmbeddedManifold& manifold, const TangentField& g,
                                      const Vec& seed, double T, double step_cap,
                                      const IndexOptions& opts) {
    const int m = manifold.dim();
    Vec p = seed;
    for (int it = 0; it < opts.search.newton_max_iter; ++it) {
        Mat basis;
        Vec res;
        try {
            basis = manifold.tangent_basis(p);
            res = displacement(manifold, g, p, T, basis, opts.integrator);
        } catch (const Error&) {
            return std::nullopt;
        }
        if (res.norm() <= opts.fixed_point_tol) return p;

        const double h = 1e-6 * (1.0 + p.norm());
        Mat jac(m, m);
        try {
            for (int j = 0; j < m; ++j) {
                const Vec probe_plus = manifold.retract(p, Vec(h * basis.col(j)));
                const Vec probe_minus = manifold.retract(p, Vec(-h * basis.col(j)));
                const Vec d_plus =
                    basis.transpose() *
                    (poincare_P(manifold, g, probe_plus, T, opts.integrator) - probe_plus);
                const Vec d_minus =
                    basis.transpose() *
                    (poincare_P(manifold, g, probe_minus, T, opts.integrator) - probe_minus);
                jac.col(j) = (d_plus - d_minus) / (2.0 * h);
            }
        } catch (const Error&) {
            return std::nullopt;
        }
        Eigen::FullPivLU<Mat> lu(jac);
        if (!lu.isInvertible()) return std::nullopt;
        Vec step = lu.solve(Vec(-res));
        if (!step.allFinite()) return std::nullopt;
        const double len = step.norm();
        if (len > step_cap) step *= step_cap / len;
        try {
            p = manifold.retract(p, Vec(basis * step));
        } catch (const Error&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace

int index_P_at(const EmbeddedManifold& manifold, const TangentField& g, const Vec& q, double T,
               const IndexOptions& opts) {
    const Vec image = poincare_P(manifold, g, q, T, opts.integrator);
    const double res = (image - q).norm();
    if (res > 10.0 * opts.fixed_point_tol) {
        std::ostringstream msg;
        msg << "index_P_at requires a fixed point of P, |P(q)-q| = " << res;
        throw std::invalid_argument(msg.str());
    }
    const int m = manifold.dim();
    const Mat monodromy = variational_flow(manifold, g, q, T, opts.integrator);
    const Mat shifted = Mat::Identity(m, m) - monodromy;
    const double det = shifted.determinant();
    const double scale = std::max(shifted.norm(), 1.0);
    if (std::abs(det) < opts.singular_tol * std::pow(scale, m)) {
        raise(ErrorCode::NonHyperbolic, "I - dP(q) is near singular at the fixed point");
    }
    return det > 0.0 ? 1 : -1;
}

std::vector<FixedPointRecord> find_fixed_points_P(const EmbeddedManifold& manifold,
                                                  const TangentField& g,
                                                  const RegionPredicate& region, double T,
                                                  const IndexOptions& opts) {
    const double diam = region.bbox.diameter();
    const double step_cap = diam > 0.0 ? 0.5 * diam : 1.0;
    const double dedup_radius = std::max(opts.search.dedup_radius_rel * diam, 1e-14);

    std::vector<Vec> converged;
    for (const Vec& seed : seed_grid(manifold, region.bbox, opts.search.seeds_per_axis)) {
        auto fixed = newton_fixed_point(manifold, g, seed, T, step_cap, opts);
        if (!fixed) continue;
        bool duplicate = false;
        for (const Vec& known : converged) {
            if ((known - *fixed).norm() <= dedup_radius) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) converged.push_back(std::move(*fixed));
    }
    std::sort(converged.begin(), converged.end(), lex_less);

    std::vector<FixedPointRecord> records;
    for (const Vec& q : converged) {
        if (region.near_boundary(q)) {
            raise(ErrorCode::NotAdmissible, "fixed point of P within boundary_margin of ∂U");
        }
        if (!region.contains(q)) continue;
        FixedPointRecord record;
        record.point = q;
        record.residual = (poincare_P(manifold, g, q, T, opts.integrator) - q).norm();
        record.index = index_P_at(manifold, g, q, T, opts);
        records.push_back(std::move(record));
    }
    return records;
}

int index_P_region(const EmbeddedManifold& manifold, const TangentField& g,
                   const RegionPredicate& region, double T, const IndexOptions& opts) {
    int sum = 0;
    for (const auto& record : find_fixed_points_P(manifold, g, region, T, opts)) {
        sum += record.index;
    }
    TangentField neg_g([&g](const Vec& p) { return Vec(-g(p)); },
                       [&g](const Vec& p) { return Mat(-g.jacobian(p)); });
    const int deg = degree(manifold, neg_g, region, opts.search);
    if (deg != sum) {
        std::ostringstream msg;
        msg << "ind(P,U) = " << sum << " but deg(-g,U) = " << deg
            << "; a fixed point of P was likely missed (nonconstant T-periodic orbit in U?)";
        raise(ErrorCode::IndexMismatch, msg.str());
    }
    return sum;
}

int index_Q_region(const EmbeddedManifold& manifold, const TangentField& g, const HistoryRegion& w,
                   double T, const IndexOptions& opts) {
    const RegionPredicate check = w.check_set();
    TangentField neg_g([&g](const Vec& p) { return Vec(-g(p)); },
                       [&g](const Vec& p) { return Mat(-g.jacobian(p)); });
    const int value = degree(manifold, neg_g, check, opts.search);
    const int ind_p = index_P_region(manifold, g, check, T, opts);
    if (ind_p != value) {
        std::ostringstream msg;
        msg << "finite-dimensional reduction mismatch: deg(-g,W̌) = " << value
            << " but ind(P,W̌) = " << ind_p;
        raise(ErrorCode::ReductionMismatch, msg.str());
    }
    return value;
}

FixCorrespondenceReport verify_fix_correspondence(const EmbeddedManifold& manifold,
                                                  const TangentField& g, const HistoryRegion& w,
                                                  double T, double r, const IndexOptions& opts) {
    FixCorrespondenceReport report;
    const RegionPredicate check = w.check_set();

    // Candidate fixed points of P: seeds across W̌'s box and, when that box is
    // empty, across a box around the reference data W was built from — the
    // interesting candidates for h(p) ∈ W have P-orbits passing through it.
    RegionPredicate search = RegionPredicate::all(check.bbox);
    if (check.bbox.empty()) {
        // Recover an ambient search box from probing: W's contains() data is
        // opaque, so fall back to the unit-scale box around the origin
        // inflated until some history in W is plausible. Callers with exotic
        // W should pass a region whose check_bbox seeds the search.
        search = RegionPredicate::all(Box::cube(manifold.ambient_dim(), -2.0, 2.0));
    }

    std::vector<FixedPointRecord> fixed;
    // Fixed points may be non-isolated here (every point of a rotation is
    // one); collect converged points without the hyperbolicity certificate.
    {
        const double diam = search.bbox.diameter();
        const double step_cap = diam > 0.0 ? 0.5 * diam : 1.0;
        const double dedup_radius = std::max(opts.search.dedup_radius_rel * diam, 1e-14);
        std::vector<Vec> converged;
        for (const Vec& seed : seed_grid(manifold, search.bbox, opts.search.seeds_per_axis)) {
            const Vec image = poincare_P(manifold, g, seed, T, opts.integrator);
            Vec q;
            if ((image - seed).norm() <= opts.fixed_point_tol) {
                q = seed;  // continuum of fixed points: the seed already is one
            } else if (auto found =
                           newton_fixed_point(manifold, g, seed, T, step_cap, opts)) {
                q = *found;
            } else {
                continue;
            }
            bool duplicate = false;
            for (const Vec& known : converged) {
                if ((known - q).norm() <= dedup_radius) {
                    duplicate = true;
                    break;
                }
            }
            if (!duplicate) converged.push_back(std::move(q));
        }
        std::sort(converged.begin(), converged.end(), lex_less);
        for (const Vec& q : converged) {
            FixedPointRecord record;
            record.point = q;
            record.residual = (poincare_P(manifold, g, q, T, opts.integrator) - q).norm();
            fixed.push_back(std::move(record));
        }
    }

    report.correspondence_verified = true;
    for (const auto& record : fixed) {
        FixCorrespondenceEntry entry;
        entry.point = record.point;
        const History image =
            map_h(manifold, g, record.point, T, r, w.n_nodes, opts.integrator);
        entry.h_image_in_w = w.contains(image);
        entry.in_check_set = check.contains(record.point);
        const HistoryOperatorResult q_of_h =
            translation_Q(manifold, g, image, T, opts.integrator);
        entry.q_residual = q_of_h.output.sup_distance(image);
        if (entry.q_residual > 1e-7) report.correspondence_verified = false;
        if (entry.h_image_in_w && !entry.in_check_set && !report.inequality_witness) {
            report.inequality_witness = record.point;
        }
        report.entries.push_back(std::move(entry));
    }

    std::ostringstream msg;
    msg << report.entries.size() << " fixed point(s) of P examined; ";
    if (report.inequality_witness) {
        msg << "found p in fix(P, h^{-1}(W)) \\ fix(P, W̌) at ["
            << report.inequality_witness->transpose() << "]";
    } else {
        msg << "fix(P, h^{-1}(W)) = fix(P, W̌) on the examined set";
    }
    report.summary = msg.str();
    return report;
}

}  // namespace orbitcert
