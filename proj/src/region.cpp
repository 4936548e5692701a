#include "orbitcert/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>

namespace orbitcert {

namespace {

// Distance from p to the boundary of an axis-aligned box (exact for inside
// points in the min-slack sense, Euclidean distance to the box outside).
double box_boundary_distance(const Box& box, const Vec& p) {
    if (box.contains(p)) {
        double slack = std::numeric_limits<double>::infinity();
        for (int j = 0; j < box.dim(); ++j) {
            slack = std::min(slack, std::min(p[j] - box.lo[j], box.hi[j] - p[j]));
        }
        return slack;
    }
    double d2 = 0.0;
    for (int j = 0; j < box.dim(); ++j) {
        const double excess = std::max({box.lo[j] - p[j], 0.0, p[j] - box.hi[j]});
        d2 += excess * excess;
    }
    return std::sqrt(d2);
}

}  // namespace

bool RegionPredicate::near_boundary(const Vec& p) const {
    if (boundary_distance) return boundary_distance(p) <= boundary_margin;
    // Probe fallback: membership flips within the margin along some axis.
    const bool inside = contains(p);
    Vec probe = p;
    for (int j = 0; j < p.size(); ++j) {
        probe[j] = p[j] + boundary_margin;
        if (contains(probe) != inside) return true;
        probe[j] = p[j] - boundary_margin;
        if (contains(probe) != inside) return true;
        probe[j] = p[j];
    }
    return false;
}

RegionPredicate RegionPredicate::box(const Vec& lo, const Vec& hi, double margin) {
    Box b{lo, hi};
    RegionPredicate region;
    region.contains = [b](const Vec& p) {
        for (int j = 0; j < b.dim(); ++j) {
            if (p[j] <= b.lo[j] || p[j] >= b.hi[j]) return false;
        }
        return true;
    };
    region.bbox = b;
    region.boundary_margin = margin;
    region.boundary_distance = [b](const Vec& p) { return box_boundary_distance(b, p); };
    return region;
}

RegionPredicate RegionPredicate::interval(double lo, double hi, double margin) {
    Vec l(1), h(1);
    l[0] = lo;
    h[0] = hi;
    return box(l, h, margin);
}

RegionPredicate RegionPredicate::ball(const Vec& center, double radius, double margin) {
    RegionPredicate region;
    region.contains = [center, radius](const Vec& p) { return (p - center).norm() < radius; };
    region.bbox = Box{Vec(center.array() - radius), Vec(center.array() + radius)};
    region.boundary_margin = margin;
    region.boundary_distance = [center, radius](const Vec& p) {
        return std::abs((p - center).norm() - radius);
    };
    return region;
}

RegionPredicate RegionPredicate::all(const Box& seed_bbox) {
    RegionPredicate region;
    region.contains = [](const Vec&) { return true; };
    region.bbox = seed_bbox;
    region.boundary_distance = [](const Vec&) { return std::numeric_limits<double>::infinity(); };
    return region;
}

RegionPredicate HistoryRegion::check_set() const {
    RegionPredicate region;
    const auto contains_history = contains;
    const double r = delay;
    const int n = n_nodes;
    region.contains = [contains_history, r, n](const Vec& p) {
        return contains_history(History::constant(p, r, n));
    };
    region.bbox = check_bbox;
    region.boundary_margin = boundary_margin;
    if (boundary_distance) {
        const auto dist_history = boundary_distance;
        region.boundary_distance = [dist_history, r, n](const Vec& p) {
            return dist_history(History::constant(p, r, n));
        };
    }
    return region;
}

HistoryRegion HistoryRegion::sup_ball(History reference, double radius, double margin) {
    HistoryRegion region;
    region.delay = reference.delay;
    region.n_nodes = reference.nodes() - 1;
    const int k = static_cast<int>(reference.values.front().size());
    // A constant history at p is within the ball iff p is within radius of
    // every node value, so the check set lives in the intersection box.
    Vec lo = Vec::Constant(k, -std::numeric_limits<double>::infinity());
    Vec hi = Vec::Constant(k, std::numeric_limits<double>::infinity());
    for (const auto& v : reference.values) {
        lo = lo.cwiseMax(Vec(v.array() - radius));
        hi = hi.cwiseMin(Vec(v.array() + radius));
    }
    region.check_bbox = Box{lo, hi};
    region.boundary_margin = margin;
    auto ref = std::make_shared<History>(std::move(reference));
    region.contains = [ref, radius](const History& phi) {
        return phi.sup_distance(*ref) < radius;
    };
    region.boundary_distance = [ref, radius](const History& phi) {
        return std::abs(phi.sup_distance(*ref) - radius);
    };
    return region;
}

HistoryRegion HistoryRegion::phi0_box(const Box& box, double osc_bound, double delay, int n_nodes,
                                      double margin) {
    HistoryRegion region;
    region.delay = delay;
    region.n_nodes = n_nodes;
    region.check_bbox = box;
    region.boundary_margin = margin;
    region.contains = [box, osc_bound](const History& phi) {
        const Vec& p0 = phi.at_zero();
        for (int j = 0; j < box.dim(); ++j) {
            if (p0[j] <= box.lo[j] || p0[j] >= box.hi[j]) return false;
        }
        double osc = 0.0;
        for (const auto& v : phi.values) osc = std::max(osc, (v - p0).norm());
        return osc < osc_bound;
    };
    region.boundary_distance = [box, osc_bound](const History& phi) {
        const Vec& p0 = phi.at_zero();
        double osc = 0.0;
        for (const auto& v : phi.values) osc = std::max(osc, (v - p0).norm());
        return std::min(box_boundary_distance(box, p0), std::abs(osc_bound - osc));
    };
    return region;
}

HistoryRegion HistoryRegion::union_of(std::vector<HistoryRegion> parts) {
    if (parts.empty()) throw std::invalid_argument("union_of requires at least one part");
    HistoryRegion region;
    region.delay = parts.front().delay;
    region.n_nodes = parts.front().n_nodes;
    region.boundary_margin = parts.front().boundary_margin;
    Box hull = parts.front().check_bbox;
    for (std::size_t i = 1; i < parts.size(); ++i) hull = hull.hull(parts[i].check_bbox);
    region.check_bbox = hull;
    auto shared = std::make_shared<std::vector<HistoryRegion>>(std::move(parts));
    region.contains = [shared](const History& phi) {
        return std::any_of(shared->begin(), shared->end(),
                           [&phi](const HistoryRegion& part) { return part.contains(phi); });
    };
    // Exact union boundary distance is part-dependent; fall back to probing.
    return region;
}

RegionPredicate PairRegion::m_slice(double T) const {
    RegionPredicate region;
    const auto contains_pair = contains;
    region.contains = [contains_pair, T](const Vec& p) {
        return contains_pair(0.0, constant_loop(p, T));
    };
    region.bbox = m_slice_bbox;
    return region;  // boundary proximity falls back to membership probing
}

PairRegion PairRegion::all(const Box& seed_bbox) {
    PairRegion region;
    region.contains = [](double, const Trajectory&) { return true; };
    region.bounded = false;
    region.m_slice_bbox = seed_bbox;
    return region;
}

PairRegion PairRegion::cylinder(double lambda_hi, const Vec& center, double radius,
                                double margin) {
    PairRegion region;
    region.contains = [lambda_hi, center, radius](double lambda, const Trajectory& loop) {
        if (lambda < 0.0 || lambda >= lambda_hi) return false;
        for (const auto& s : loop.states) {
            if ((s - center).norm() >= radius) return false;
        }
        return true;
    };
    region.near_boundary = [lambda_hi, center, radius, margin](double lambda,
                                                               const Trajectory& loop) {
        if (std::abs(lambda - lambda_hi) <= margin) return true;
        double sup = 0.0;
        for (const auto& s : loop.states) sup = std::max(sup, (s - center).norm());
        return std::abs(sup - radius) <= margin;
    };
    region.bounded = true;
    region.m_slice_bbox = Box{Vec(center.array() - radius), Vec(center.array() + radius)};
    return region;
}

Trajectory constant_loop(const Vec& p, double T) {
    Trajectory loop;
    loop.times = {0.0, T};
    loop.states = {p, p};
    loop.derivs = {Vec::Zero(p.size()), Vec::Zero(p.size())};
    return loop;
}

}  // namespace orbitcert
