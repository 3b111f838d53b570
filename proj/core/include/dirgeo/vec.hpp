#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace dirgeo {

// Ambient vector for dimensions 1..3. Fixed storage, value semantics.
struct Vec {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    int n = 3;

    Vec() = default;
    Vec(double x, double y) : c{x, y, 0.0}, n(2) {}
    Vec(double x, double y, double z) : c{x, y, z}, n(3) {}

    static Vec zero(int dim) {
        Vec v;
        v.n = dim;
        return v;
    }
    static Vec axis(int dim, int k, double s = 1.0) {
        Vec v = zero(dim);
        v.c[static_cast<std::size_t>(k)] = s;
        return v;
    }

    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    double x() const { return c[0]; }
    double y() const { return c[1]; }
    double z() const { return c[2]; }

    Vec operator+(const Vec& o) const {
        Vec r = *this;
        for (int i = 0; i < n; ++i) r[i] += o[i];
        return r;
    }
    Vec operator-(const Vec& o) const {
        Vec r = *this;
        for (int i = 0; i < n; ++i) r[i] -= o[i];
        return r;
    }
    Vec operator*(double s) const {
        Vec r = *this;
        for (int i = 0; i < n; ++i) r[i] *= s;
        return r;
    }
    Vec operator/(double s) const { return (*this) * (1.0 / s); }
    Vec operator-() const { return (*this) * -1.0; }
    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] += o[i];
        return *this;
    }

    double dot(const Vec& o) const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += (*this)[i] * o[i];
        return s;
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }

    bool finite() const {
        for (int i = 0; i < n; ++i)
            if (!std::isfinite((*this)[i])) return false;
        return true;
    }

    Vec normalized() const {
        double m = norm();
        if (m == 0.0) throw std::invalid_argument("cannot normalize zero vector");
        return (*this) / m;
    }

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < n; ++i) s += (i ? "," : "") + std::to_string((*this)[i]);
        return s + ")";
    }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

// Magnitude of the cross product; in 2D the |z| component of the embedded cross.
inline double cross_norm(const Vec& a, const Vec& b) {
    if (a.n == 2) return std::fabs(a[0] * b[1] - a[1] * b[0]);
    if (a.n == 1) return 0.0;
    double cx = a[1] * b[2] - a[2] * b[1];
    double cy = a[2] * b[0] - a[0] * b[2];
    double cz = a[0] * b[1] - a[1] * b[0];
    return std::sqrt(cx * cx + cy * cy + cz * cz);
}

// Angle between two nonzero vectors in [0, pi]. atan2 form, stable near 0 and pi.
inline double angle_between(const Vec& a, const Vec& b) {
    return std::atan2(cross_norm(a, b), a.dot(b));
}

inline double distance(const Vec& a, const Vec& b) { return (a - b).norm(); }

using Point = Vec;

}  // namespace dirgeo
