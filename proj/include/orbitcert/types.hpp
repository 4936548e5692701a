#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>

namespace orbitcert {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Axis-aligned box in ambient coordinates. lo > hi in any axis means empty.
struct Box {
    Vec lo;
    Vec hi;

    [[nodiscard]] int dim() const { return static_cast<int>(lo.size()); }

    [[nodiscard]] bool empty() const {
        for (int j = 0; j < dim(); ++j) {
            if (lo[j] > hi[j]) return true;
        }
        return false;
    }

    [[nodiscard]] bool contains(const Vec& p) const {
        if (p.size() != lo.size()) return false;
        for (int j = 0; j < dim(); ++j) {
            if (p[j] < lo[j] || p[j] > hi[j]) return false;
        }
        return true;
    }

    [[nodiscard]] double diameter() const {
        return empty() ? 0.0 : (hi - lo).norm();
    }

    [[nodiscard]] Vec center() const { return 0.5 * (lo + hi); }

    static Box cube(int k, double lo_v, double hi_v) {
        return Box{Vec::Constant(k, lo_v), Vec::Constant(k, hi_v)};
    }

    /// Smallest box containing both operands.
    [[nodiscard]] Box hull(const Box& other) const {
        if (empty()) return other;
        if (other.empty()) return *this;
        return Box{lo.cwiseMin(other.lo), hi.cwiseMax(other.hi)};
    }
};

inline double fd_step(const Vec& p) {
    // central-difference step, eps^{1/3} * (1 + |p|)
    return std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + p.norm());
}

}  // namespace orbitcert
