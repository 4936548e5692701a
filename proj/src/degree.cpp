#include "orbitcert/degree.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
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

// Newton iteration for g = 0 in tangent coordinates with retraction updates.
// Returns the converged point or nullopt.
std::optional<Vec> newton_zero(const EmbeddedManifold& manifold, const TangentField& g,
                               const Vec& seed, double step_cap, int max_iter, double tol) {
    Vec p = seed;
    for (int it = 0; it < max_iter; ++it) {
        Vec value = g(p);
        if (!value.allFinite()) return std::nullopt;
        if (value.norm() <= tol) return p;
        try {
            const Mat basis = manifold.tangent_basis(p);
            const Mat reduced = basis.transpose() * g.jacobian(p) * basis;
            Eigen::FullPivLU<Mat> lu(reduced);
            if (!lu.isInvertible()) return std::nullopt;
            Vec step = lu.solve(Vec(-basis.transpose() * value));
            if (!step.allFinite()) return std::nullopt;
            const double len = step.norm();
            if (len > step_cap) step *= step_cap / len;
            p = manifold.retract(p, Vec(basis * step));
        } catch (const Error&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

// Extra iterations toward machine precision; keeps the best iterate. The
// degeneracy check depends on this: at a double zero, Newton converges only
// linearly and the stopping tolerance alone would leave the reduced Jacobian
// at O(sqrt(zero_tol)) instead of near zero.
Vec polish_zero(const EmbeddedManifold& manifold, const TangentField& g, Vec p, double step_cap) {
    double best = g(p).norm();
    Vec best_p = p;
    for (int it = 0; it < 48 && best > 0.0; ++it) {
        try {
            const Mat basis = manifold.tangent_basis(p);
            const Mat reduced = basis.transpose() * g.jacobian(p) * basis;
            Eigen::FullPivLU<Mat> lu(reduced);
            if (!lu.isInvertible()) break;
            Vec step = lu.solve(Vec(-basis.transpose() * g(p)));
            if (!step.allFinite()) break;
            const double len = step.norm();
            if (len > step_cap) step *= step_cap / len;
            p = manifold.retract(p, Vec(basis * step));
        } catch (const Error&) {
            break;
        }
        const double res = g(p).norm();
        if (res < best) {
            best = res;
            best_p = p;
        } else if (res > 10.0 * best) {
            break;
        }
    }
    return best_p;
}

}  // namespace

std::vector<Vec> seed_grid(const EmbeddedManifold& manifold, const Box& box, int seeds_per_axis) {
    std::vector<Vec> seeds;
    if (box.empty() || seeds_per_axis < 1) return seeds;
    const int k = box.dim();
    const int n = seeds_per_axis;
    long total = 1;
    for (int j = 0; j < k; ++j) total *= n;
    seeds.reserve(static_cast<std::size_t>(total));
    Vec p(k);
    for (long idx = 0; idx < total; ++idx) {
        long rem = idx;
        for (int j = 0; j < k; ++j) {
            const long i = rem % n;
            rem /= n;
            p[j] = (n == 1) ? 0.5 * (box.lo[j] + box.hi[j])
                            : box.lo[j] + (box.hi[j] - box.lo[j]) * static_cast<double>(i) /
                                              static_cast<double>(n - 1);
        }
        if (auto projected = manifold.project_point(p)) seeds.push_back(*projected);
    }
    return seeds;
}

std::vector<ZeroRecord> find_zeros(const EmbeddedManifold& manifold, const TangentField& g,
                                   const RegionPredicate& region, const ZeroSearchOptions& opts) {
    const double diam = region.bbox.diameter();
    const double step_cap = diam > 0.0 ? 0.5 * diam : 1.0;
    const double dedup_radius = std::max(opts.dedup_radius_rel * diam, 1e-14);

    std::vector<Vec> converged;
    for (const Vec& seed : seed_grid(manifold, region.bbox, opts.seeds_per_axis)) {
        auto zero = newton_zero(manifold, g, seed, step_cap, opts.newton_max_iter, opts.zero_tol);
        if (!zero) continue;
        Vec polished = polish_zero(manifold, g, *zero, step_cap);
        bool duplicate = false;
        for (const Vec& known : converged) {
            if ((known - polished).norm() <= dedup_radius) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) converged.push_back(std::move(polished));
    }
    std::sort(converged.begin(), converged.end(), lex_less);

    std::vector<ZeroRecord> zeros;
    for (const Vec& p : converged) {
        const bool inside = region.contains(p);
        if (region.near_boundary(p)) {
            std::ostringstream msg;
            msg << "zero within boundary_margin of the region boundary at [" << p.transpose()
                << "]";
            raise(ErrorCode::BoundaryZero, msg.str());
        }
        if (!inside) continue;
        try {
            auto [reduced, sign] =
                tangent_jacobian(manifold, g, p, opts.zero_tol, opts.singular_tol);
            (void)reduced;
            zeros.push_back(ZeroRecord{p, sign, g(p).norm()});
        } catch (const Error& err) {
            if (err.code() == ErrorCode::NearSingular) {
                std::ostringstream msg;
                msg << "degenerate zero at [" << p.transpose() << "]";
                raise(ErrorCode::DegenerateZero, msg.str());
            }
            throw;
        }
    }
    return zeros;
}

int degree(const EmbeddedManifold& manifold, const TangentField& g, const RegionPredicate& region,
           const ZeroSearchOptions& opts) {
    int sum = 0;
    for (const auto& zero : find_zeros(manifold, g, region, opts)) sum += zero.local_sign;
    return sum;
}

int winding_degree_planar(const TangentField& w, const std::vector<Vec>& boundary, int samples,
                          double zero_tol) {
    if (boundary.size() < 3) throw std::invalid_argument("boundary needs at least 3 vertices");

    // Arclength parametrization of the closed polyline.
    std::vector<double> cumulative(boundary.size() + 1, 0.0);
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        const Vec& a = boundary[i];
        const Vec& b = boundary[(i + 1) % boundary.size()];
        cumulative[i + 1] = cumulative[i] + (b - a).norm();
    }
    const double total_length = cumulative.back();
    auto point_at = [&](double s) -> Vec {
        s = std::fmod(s, total_length);
        if (s < 0.0) s += total_length;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
        auto i = static_cast<std::size_t>(it - cumulative.begin());
        if (i == 0) i = 1;
        if (i > boundary.size()) i = boundary.size();
        const double seg = cumulative[i] - cumulative[i - 1];
        const double u = seg > 0.0 ? (s - cumulative[i - 1]) / seg : 0.0;
        return boundary[i - 1] + u * (boundary[i % boundary.size()] - boundary[i - 1]);
    };

    const int max_samples = 1 << 22;
    int n = std::max(samples, 16);
    while (true) {
        double angle_sum = 0.0;
        double prev_angle = 0.0;
        double max_increment = 0.0;
        for (int i = 0; i <= n; ++i) {
            const Vec p = point_at(total_length * static_cast<double>(i) / n);
            const Vec value = w(p);
            const double norm = value.norm();
            if (norm < 10.0 * zero_tol) {
                raise(ErrorCode::VanishingOnBoundary,
                      "field magnitude below 10*zero_tol on the sampled boundary");
            }
            const double angle = std::atan2(value[1], value[0]);
            if (i > 0) {
                double inc = angle - prev_angle;
                while (inc > std::numbers::pi) inc -= 2.0 * std::numbers::pi;
                while (inc < -std::numbers::pi) inc += 2.0 * std::numbers::pi;
                angle_sum += inc;
                max_increment = std::max(max_increment, std::abs(inc));
            }
            prev_angle = angle;
        }
        const double turns = angle_sum / (2.0 * std::numbers::pi);
        const double residue = std::abs(turns - std::round(turns));
        if (residue <= 0.05 && max_increment < 0.5 * std::numbers::pi) {
            return static_cast<int>(std::lround(turns));
        }
        if (n >= max_samples) {
            if (residue <= 0.1) return static_cast<int>(std::lround(turns));
            raise(ErrorCode::AngleResidueTooLarge,
                  "winding residue above 0.1 at the sampling cap");
        }
        n *= 2;
    }
}

std::vector<Vec> circle_polyline(const Vec& center, double radius, int segments) {
    std::vector<Vec> pts;
    pts.reserve(segments);
    for (int i = 0; i < segments; ++i) {
        const double a = 2.0 * std::numbers::pi * i / segments;
        Vec p(2);
        p[0] = center[0] + radius * std::cos(a);
        p[1] = center[1] + radius * std::sin(a);
        pts.push_back(p);
    }
    return pts;
}

std::vector<Vec> box_polyline(const Box& box, int segments_per_edge) {
    std::vector<Vec> pts;
    const double x0 = box.lo[0], x1 = box.hi[0], y0 = box.lo[1], y1 = box.hi[1];
    auto edge = [&](double ax, double ay, double bx, double by) {
        for (int i = 0; i < segments_per_edge; ++i) {
            const double u = static_cast<double>(i) / segments_per_edge;
            Vec p(2);
            p[0] = ax + u * (bx - ax);
            p[1] = ay + u * (by - ay);
            pts.push_back(p);
        }
    };
    edge(x0, y0, x1, y0);
    edge(x1, y0, x1, y1);
    edge(x1, y1, x0, y1);
    edge(x0, y1, x0, y0);
    return pts;
}

PoincareHopfReport check_poincare_hopf(const EmbeddedManifold& manifold, const TangentField& g,
                                       const ZeroSearchOptions& opts) {
    if (!manifold.euler_characteristic) {
        throw std::invalid_argument("check_poincare_hopf requires euler_characteristic");
    }
    if (!manifold.compact_bbox) {
        throw std::invalid_argument("check_poincare_hopf requires a compact bounding box");
    }
    PoincareHopfReport report;
    report.euler_characteristic = *manifold.euler_characteristic;
    const RegionPredicate whole = RegionPredicate::all(*manifold.compact_bbox);
    report.zeros = find_zeros(manifold, g, whole, opts);
    report.degree = 0;
    for (const auto& z : report.zeros) report.degree += z.local_sign;
    report.pass = (report.degree == report.euler_characteristic);
    std::ostringstream msg;
    if (report.pass) {
        msg << "deg(g,M) = " << report.degree << " = chi(M)";
    } else if (report.zeros.empty() && report.euler_characteristic != 0) {
        msg << "no zeros found but chi(M) = " << report.euler_characteristic
            << " != 0: impossible for a tangent field; increase the seeding density";
    } else {
        msg << "deg(g,M) = " << report.degree << " != chi(M) = " << report.euler_characteristic
            << ": zeros were missed; increase the seeding density";
    }
    report.message = msg.str();
    return report;
}

}  // namespace orbitcert
