#pragma once

#include <string>
#include <vector>

#include "orbitcert/fields.hpp"
#include "orbitcert/region.hpp"

namespace orbitcert {

/// A certified nondegenerate zero of a tangent field.
struct ZeroRecord {
    Vec point;
    int local_sign = 0;   // sign det of the tangent-restricted Jacobian
    double residual = 0;  // |g(point)|
};

struct ZeroSearchOptions {
    int seeds_per_axis = 16;
    int newton_max_iter = 50;
    double zero_tol = 1e-8;
    double singular_tol = 1e-8;
    double dedup_radius_rel = 1e-6;  // relative to the bbox diameter
};

/// Newton search over a seed grid in region.bbox projected onto M; converged
/// points are polished, deduplicated, filtered by the region and certified
/// nondegenerate. Zeros within boundary_margin of the region boundary raise
/// BoundaryZero; degenerate zeros raise DegenerateZero. Sorted
/// lexicographically.
[[nodiscard]] std::vector<ZeroRecord> find_zeros(const EmbeddedManifold& manifold,
                                                 const TangentField& g,
                                                 const RegionPredicate& region,
                                                 const ZeroSearchOptions& opts = {});

/// deg(g, region) = Σ sign det g'(q) over the nondegenerate zeros in region.
[[nodiscard]] int degree(const EmbeddedManifold& manifold, const TangentField& g,
                         const RegionPredicate& region, const ZeroSearchOptions& opts = {});

/// Independent planar oracle: total signed angle of w along a closed polyline
/// divided by 2π. Samples are doubled while the accumulated-angle residue is
/// above 0.05 (up to a cap). Throws VanishingOnBoundary and
/// AngleResidueTooLarge.
[[nodiscard]] int winding_degree_planar(const TangentField& w, const std::vector<Vec>& boundary,
                                        int samples = 4096, double zero_tol = 1e-8);

/// Closed polylines for winding checks.
[[nodiscard]] std::vector<Vec> circle_polyline(const Vec& center, double radius, int segments = 64);
[[nodiscard]] std::vector<Vec> box_polyline(const Box& box, int segments_per_edge = 16);

struct PoincareHopfReport {
    int degree = 0;
    int euler_characteristic = 0;
    bool pass = false;
    std::vector<ZeroRecord> zeros;
    std::string message;
};

/// Computes deg(g, M) over a compact M and compares with χ(M).
[[nodiscard]] PoincareHopfReport check_poincare_hopf(const EmbeddedManifold& manifold,
                                                     const TangentField& g,
                                                     const ZeroSearchOptions& opts = {});

/// Seed grid helper shared by the zero and fixed-point searches: grid points
/// of the box projected onto M (failed projections are dropped).
[[nodiscard]] std::vector<Vec> seed_grid(const EmbeddedManifold& manifold, const Box& box,
                                         int seeds_per_axis);

}  // namespace orbitcert
