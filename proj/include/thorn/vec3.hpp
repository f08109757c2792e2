#pragma once

#include <cmath>
#include <stdexcept>

namespace thorn {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator*(const Vec3& a, double s) { return s * a; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) { a.x += b.x; a.y += b.y; a.z += b.z; return a; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }

// Direction with |v| = 1 enforced at construction (tolerance 1e-12 on re-check).
struct UnitVector {
    Vec3 v;

    UnitVector() : v{0, 0, 1} {}
    explicit UnitVector(const Vec3& raw) {
        double n = norm(raw);
        if (!(n > 0) || !std::isfinite(n))
            throw std::invalid_argument("UnitVector: zero or non-finite direction");
        v = (1.0 / n) * raw;
    }
    double x() const { return v.x; }
    double y() const { return v.y; }
    double z() const { return v.z; }
    operator Vec3() const { return v; }
};

// Rodrigues rotation of p about a unit axis.
inline Vec3 rotate_about(const UnitVector& axis, double angle, const Vec3& p) {
    const Vec3 k = axis.v;
    const double c = std::cos(angle), s = std::sin(angle);
    return c * p + s * cross(k, p) + (dot(k, p) * (1.0 - c)) * k;
}

}  // namespace thorn
