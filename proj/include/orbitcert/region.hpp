#pragma once

#include <functional>
#include <vector>

#include "orbitcert/integrate.hpp"
#include "orbitcert/manifold.hpp"
#include "orbitcert/types.hpp"

namespace orbitcert {

/// Open-set surrogate for U ⊆ M: a deterministic membership test plus an
/// ambient bounding box used to seed searches. Points within boundary_margin
/// of the boundary are flagged by near_boundary (via the exact boundary
/// distance when available, axis probing otherwise).
struct RegionPredicate {
    std::function<bool(const Vec&)> contains;
    Box bbox;
    double boundary_margin = 1e-6;
    std::function<double(const Vec&)> boundary_distance;  // optional, unsigned

    [[nodiscard]] bool near_boundary(const Vec& p) const;

    static RegionPredicate box(const Vec& lo, const Vec& hi, double margin = 1e-6);
    static RegionPredicate interval(double lo, double hi, double margin = 1e-6);
    static RegionPredicate ball(const Vec& center, double radius, double margin = 1e-6);
    /// All of M (no boundary); the box only seeds searches.
    static RegionPredicate all(const Box& seed_bbox);
};

/// Open-set surrogate for W ⊆ C([-r,0], M). Membership is evaluated on
/// discretized histories; check_set derives the finite-dimensional shadow
/// W̌ = {p ∈ M : p̂ ∈ W} as a RegionPredicate.
struct HistoryRegion {
    std::function<bool(const History&)> contains;
    std::function<double(const History&)> boundary_distance;  // optional
    Box check_bbox;          // contains every p whose constant history is in W
    double boundary_margin = 1e-6;
    double delay = 0.0;      // grid parameters for the constant histories
    int n_nodes = 32;

    [[nodiscard]] RegionPredicate check_set() const;

    /// sup-norm ball of the given radius around a reference history.
    static HistoryRegion sup_ball(History reference, double radius, double margin = 1e-6);
    /// φ(0) constrained to a box and the oscillation sup|φ(θ)-φ(0)| bounded.
    static HistoryRegion phi0_box(const Box& box, double osc_bound, double delay, int n_nodes,
                                  double margin = 1e-6);
    static HistoryRegion union_of(std::vector<HistoryRegion> parts);
};

/// Open-set surrogate for Ω ⊆ [0,∞) x C_T(M): membership of (λ, loop) pairs.
struct PairRegion {
    std::function<bool(double, const Trajectory&)> contains;
    std::function<bool(double, const Trajectory&)> near_boundary;  // optional
    bool bounded = false;
    Box m_slice_bbox;  // ambient box seeding Ω ∩ M

    [[nodiscard]] bool is_near_boundary(double lambda, const Trajectory& loop) const {
        return near_boundary ? near_boundary(lambda, loop) : false;
    }

    /// Ω ∩ M: points p whose pair (0, constant loop at p) lies in Ω.
    [[nodiscard]] RegionPredicate m_slice(double T) const;

    static PairRegion all(const Box& seed_bbox);
    /// λ ∈ [0, lambda_hi) and sup_t |x(t) - center| < radius.
    static PairRegion cylinder(double lambda_hi, const Vec& center, double radius,
                               double margin = 1e-6);
};

/// Two-node constant loop at p over [0, T]; enough for membership tests.
[[nodiscard]] Trajectory constant_loop(const Vec& p, double T);

}  // namespace orbitcert
