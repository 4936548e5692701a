#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbitcert/degree.hpp"
#include "orbitcert/integrate.hpp"
#include "orbitcert/poincare.hpp"
#include "orbitcert/region.hpp"

namespace orbitcert {

struct IndexOptions {
    ZeroSearchOptions search;      // seeding shared with the degree module
    IntegratorOptions integrator;  // flow options for P and its derivative
    double fixed_point_tol = 1e-8;
    double singular_tol = 1e-8;
};

/// Index of the Poincaré map at a hyperbolic fixed point:
/// sign det(I - dP(q)). Throws NonHyperbolic when I - dP(q) is near singular.
[[nodiscard]] int index_P_at(const EmbeddedManifold& manifold, const TangentField& g, const Vec& q,
                             double T, const IndexOptions& opts = {});

/// A located fixed point of P with its local index.
struct FixedPointRecord {
    Vec point;
    int index = 0;
    double residual = 0.0;  // |P(q) - q|
};

[[nodiscard]] std::vector<FixedPointRecord> find_fixed_points_P(const EmbeddedManifold& manifold,
                                                                const TangentField& g,
                                                                const RegionPredicate& region,
                                                                double T,
                                                                const IndexOptions& opts = {});

/// Sum of local indices of P over the fixed points in U. The result is
/// checked against deg(-g, U); disagreement (a missed fixed point, e.g. a
/// nonconstant T-periodic orbit meeting U) raises IndexMismatch.
[[nodiscard]] int index_P_region(const EmbeddedManifold& manifold, const TangentField& g,
                                 const RegionPredicate& region, double T,
                                 const IndexOptions& opts = {});

/// ind(Q, W) evaluated through the finite-dimensional reduction: the value is
/// deg(-g, W̌); ind(P, W̌) is computed as an independent cross-check and a
/// three-way disagreement raises ReductionMismatch.
[[nodiscard]] int index_Q_region(const EmbeddedManifold& manifold, const TangentField& g,
                                 const HistoryRegion& w, double T, const IndexOptions& opts = {});

struct FixCorrespondenceEntry {
    Vec point;                 // fixed point of P
    bool h_image_in_w = false; // h(p) ∈ W
    bool in_check_set = false; // p ∈ W̌
    double q_residual = 0.0;   // |Q(h(p)) - h(p)|_sup
};

struct FixCorrespondenceReport {
    std::vector<FixCorrespondenceEntry> entries;
    /// A fixed point of P lying in h⁻¹(W) but not in W̌, when the system
    /// exhibits one.
    std::optional<Vec> inequality_witness;
    bool correspondence_verified = false;  // every h-image is Q-fixed
    std::string summary;
};

/// Reports on the h/k correspondence between fix(Q, W) and fix(P, h⁻¹(W)),
/// including a witness that fix(P, h⁻¹(W)) can differ from fix(P, W̌).
[[nodiscard]] FixCorrespondenceReport verify_fix_correspondence(const EmbeddedManifold& manifold,
                                                                const TangentField& g,
                                                                const HistoryRegion& w, double T,
                                                                double r,
                                                                const IndexOptions& opts = {});

}  // namespace orbitcert
