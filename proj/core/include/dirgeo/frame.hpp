#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "dirgeo/direction.hpp"
#include "dirgeo/error.hpp"
#include "dirgeo/vec.hpp"

namespace dirgeo {

// Orthonormal basis ordered by descending singular value.
struct Frame {
    std::vector<Direction> basis;
    std::vector<double> singular_values;

    int dim() const { return basis.empty() ? 0 : basis.front().dim(); }
};

namespace detail {

// Cyclic Jacobi sweeps on a symmetric n x n matrix, n <= 3. Deterministic:
// fixed sweep order, fixed tolerance, no pivot search.
inline void jacobi_eigen(std::array<std::array<double, 3>, 3>& a, int n,
                         std::array<std::array<double, 3>, 3>& v) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v[i][j] = (i == j) ? 1.0 : 0.0;
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::fabs(a[i][i]));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::fabs(a[i][j]));
    if (scale == 0.0) return;
    const double tol = 1e-12 * scale;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) off += std::fabs(a[p][q]);
        if (off < tol) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < tol * 1e-4) continue;
                double theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
}

}  // namespace detail

// Covariance eigen-frame of (point - center) samples. Basis diagonalizes the
// covariance; singular values are square roots of its spectrum, descending.
// Points coinciding with the center are ignored.
inline Frame principal_directions(const std::vector<Point>& points, const Point& center) {
    const int n = center.n;
    std::array<std::array<double, 3>, 3> cov{};
    long usable = 0;
    for (const auto& p : points) {
        Vec d = p - center;
        if (d.norm2() == 0.0) continue;
        ++usable;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) cov[i][j] += d[i] * d[j];
    }
    if (usable < 2)
        throw InsufficientDataError("principal_directions: need >= 2 points distinct from center");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cov[i][j] /= static_cast<double>(usable);

    std::array<std::array<double, 3>, 3> evec{};
    detail::jacobi_eigen(cov, n, evec);

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) { return cov[i][i] > cov[j][j]; });

    Frame f;
    for (int rank = 0; rank < n; ++rank) {
        int k = order[static_cast<std::size_t>(rank)];
        Vec b = Vec::zero(n);
        for (int i = 0; i < n; ++i) b[i] = evec[i][k];
        // deterministic sign: largest-magnitude component positive
        int imax = 0;
        for (int i = 1; i < n; ++i)
            if (std::fabs(b[i]) > std::fabs(b[imax])) imax = i;
        if (b[imax] < 0.0) b = -b;
        f.basis.push_back(Direction(b));
        f.singular_values.push_back(std::sqrt(std::max(0.0, cov[k][k])));
    }
    return f;
}

}  // namespace dirgeo
