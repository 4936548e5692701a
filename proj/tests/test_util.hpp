#pragma once

#include <random>

#include "orbitcert/types.hpp"

namespace orbitcert::testutil {

inline Vec vec1(double x) {
    Vec v(1);
    v[0] = x;
    return v;
}

inline Vec vec2(double x, double y) {
    Vec v(2);
    v[0] = x;
    v[1] = y;
    return v;
}

inline Vec vec3(double x, double y, double z) {
    Vec v(3);
    v[0] = x;
    v[1] = y;
    v[2] = z;
    return v;
}

inline Vec random_vec(std::mt19937_64& rng, int dim, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vec v(dim);
    for (int j = 0; j < dim; ++j) v[j] = dist(rng);
    return v;
}

/// Random orthogonal matrix via QR of a Gaussian matrix.
inline Mat random_orthogonal(std::mt19937_64& rng, int dim);

}  // namespace orbitcert::testutil

#include <Eigen/QR>

namespace orbitcert::testutil {

inline Mat random_orthogonal(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) a(i, j) = gauss(rng);
    }
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    return q;
}

}  // namespace orbitcert::testutil
