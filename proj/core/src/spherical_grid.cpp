#include "dirgeo/spherical_grid.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace dirgeo {

namespace {

// face axes: direction(f, a, b) = normalize(center + a * ua + b * ub)
struct FaceBasis {
    Vec center, ua, ub;
};

const std::array<FaceBasis, 6>& faces() {
    static const std::array<FaceBasis, 6> f = {{
        {Vec(1, 0, 0), Vec(0, 1, 0), Vec(0, 0, 1)},    // +x
        {Vec(-1, 0, 0), Vec(0, -1, 0), Vec(0, 0, 1)},  // -x
        {Vec(0, 1, 0), Vec(-1, 0, 0), Vec(0, 0, 1)},   // +y
        {Vec(0, -1, 0), Vec(1, 0, 0), Vec(0, 0, 1)},   // -y
        {Vec(0, 0, 1), Vec(1, 0, 0), Vec(0, 1, 0)},    // +z
        {Vec(0, 0, -1), Vec(1, 0, 0), Vec(0, -1, 0)},  // -z
    }};
    return f;
}

Vec face_point(int f, double a, double b) {
    const FaceBasis& fb = faces()[static_cast<std::size_t>(f)];
    return (fb.center + fb.ua * a + fb.ub * b).normalized();
}

}  // namespace

SphericalGrid::SphericalGrid(int dim, int resolution) : dim_(dim), resolution_(resolution) {
    if (resolution < 2) throw std::invalid_argument("SphericalGrid: resolution must be >= 2");
    if (dim == 2) {
        centers_.reserve(static_cast<std::size_t>(resolution));
        for (int i = 0; i < resolution; ++i) {
            double a = 2.0 * M_PI * (i + 0.5) / resolution;
            centers_.push_back(Vec(std::cos(a), std::sin(a)));
        }
        for (int i = 0; i < resolution; ++i) {
            std::vector<std::uint32_t> row{
                static_cast<std::uint32_t>((i + resolution - 1) % resolution),
                static_cast<std::uint32_t>((i + 1) % resolution)};
            adjacency_.add_row(row);
        }
        max_cell_diameter_ = 2.0 * M_PI / resolution;
        return;
    }
    if (dim != 3) throw std::invalid_argument("SphericalGrid: dim must be 2 or 3");

    const int k = resolution;
    centers_.reserve(static_cast<std::size_t>(6 * k * k));
    for (int f = 0; f < 6; ++f)
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i)
                centers_.push_back(
                    face_point(f, 2.0 * (i + 0.5) / k - 1.0, 2.0 * (j + 0.5) / k - 1.0));

    auto cell_index = [k](int f, int i, int j) {
        return static_cast<std::uint32_t>((f * k + j) * k + i);
    };

    // directed neighbor sets, symmetrized below
    std::vector<std::set<std::uint32_t>> nbrs(cell_count());
    for (int f = 0; f < 6; ++f) {
        for (int j = 0; j < k; ++j) {
            for (int i = 0; i < k; ++i) {
                std::uint32_t c = cell_index(f, i, j);
                const int di[4] = {1, -1, 0, 0};
                const int dj[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    int ni = i + di[d], nj = j + dj[d];
                    if (ni >= 0 && ni < k && nj >= 0 && nj < k) {
                        nbrs[c].insert(cell_index(f, ni, nj));
                        continue;
                    }
                    // across the seam: probe just outside the face square
                    double a = 2.0 * (ni + 0.5) / k - 1.0;
                    double b = 2.0 * (nj + 0.5) / k - 1.0;
                    std::uint32_t other =
                        static_cast<std::uint32_t>(locate(face_point(f, a, b)));
                    if (other != c) nbrs[c].insert(other);
                }
            }
        }
    }
    for (std::uint32_t c = 0; c < cell_count(); ++c)
        for (std::uint32_t n : nbrs[c]) nbrs[n].insert(c);
    for (std::uint32_t c = 0; c < cell_count(); ++c) {
        std::vector<std::uint32_t> row(nbrs[c].begin(), nbrs[c].end());
        adjacency_.add_row(row);
    }

    for (std::uint32_t c = 0; c < cell_count(); ++c)
        for (std::uint32_t n : nbrs[c])
            max_cell_diameter_ =
                std::max(max_cell_diameter_, angle_between(centers_[c], centers_[n]));
}

std::size_t SphericalGrid::locate(const Vec& direction) const {
    if (dim_ == 2) {
        double a = std::atan2(direction.y(), direction.x());
        if (a < 0.0) a += 2.0 * M_PI;
        int i = std::clamp(static_cast<int>(a / (2.0 * M_PI) * resolution_), 0, resolution_ - 1);
        return static_cast<std::size_t>(i);
    }
    const double ax = std::fabs(direction.x()), ay = std::fabs(direction.y()),
                 az = std::fabs(direction.z());
    int f;
    double a, b;
    if (ax >= ay && ax >= az) {
        f = direction.x() > 0 ? 0 : 1;
        double inv = 1.0 / ax;
        a = (f == 0 ? direction.y() : -direction.y()) * inv;
        b = direction.z() * inv;
    } else if (ay >= ax && ay >= az) {
        f = direction.y() > 0 ? 2 : 3;
        double inv = 1.0 / ay;
        a = (f == 2 ? -direction.x() : direction.x()) * inv;
        b = direction.z() * inv;
    } else {
        f = direction.z() > 0 ? 4 : 5;
        double inv = 1.0 / az;
        a = direction.x() * inv;
        b = (f == 4 ? direction.y() : -direction.y()) * inv;
    }
    const int k = resolution_;
    int i = std::clamp(static_cast<int>((a + 1.0) * 0.5 * k), 0, k - 1);
    int j = std::clamp(static_cast<int>((b + 1.0) * 0.5 * k), 0, k - 1);
    return static_cast<std::size_t>((f * k + j) * k + i);
}

}  // namespace dirgeo
