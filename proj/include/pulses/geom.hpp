// Minimal 3-vector / 3x3-matrix algebra and SO(3) helpers: axis-angle
// (Rodrigues) rotations, their composition, and the left Jacobian of the
// exponential map. Everything is small-angle safe via series expansions.
#pragma once

#include <array>
#include <cmath>

namespace pulses {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double a) const { return {a * x, a * y, a * z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
};

inline Vec3 operator*(double a, const Vec3& v) { return v * a; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Row-major 3x3 matrix.
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    static Mat3 identity() {
        Mat3 r;
        r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
        return r;
    }

    Vec3 row(int i) const { return {m[i][0], m[i][1], m[i][2]}; }
    Vec3 col(int j) const { return {m[0][j], m[1][j], m[2][j]}; }

    Vec3 apply(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }

    /// M^T v (avoids forming the transpose).
    Vec3 apply_transpose(const Vec3& v) const {
        return {m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
                m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
                m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
        return r;
    }
};

namespace detail {
// sin(t)/t, (1-cos t)/t^2 and (t-sin t)/t^3 with Taylor fallbacks near 0.
inline double sinc(double t) {
    if (std::fabs(t) < 1e-4) {
        double t2 = t * t;
        return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    }
    return std::sin(t) / t;
}
inline double cosc(double t) {
    if (std::fabs(t) < 1e-4) {
        double t2 = t * t;
        return 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    }
    return (1.0 - std::cos(t)) / (t * t);
}
inline double jfac(double t) {
    if (std::fabs(t) < 1e-4) {
        double t2 = t * t;
        return 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
    }
    return (t - std::sin(t)) / (t * t * t);
}
}  // namespace detail

/// Apply the rotation exp([r]x) to v without forming the matrix:
/// v + sinc(|r|) r x v + cosc(|r|) r x (r x v). Exact for all angles.
inline Vec3 rotate(const Vec3& r, const Vec3& v) {
    double th = norm(r);
    Vec3 rv = cross(r, v);
    return v + detail::sinc(th) * rv + detail::cosc(th) * cross(r, rv);
}

/// Rotation matrix exp([r]x) by the Rodrigues formula.
inline Mat3 axis_angle_matrix(const Vec3& r) {
    double th = norm(r);
    double s = detail::sinc(th), c = detail::cosc(th);
    Mat3 R = Mat3::identity();
    // [r]x and [r]x^2 assembled componentwise.
    double xx = r.x * r.x, yy = r.y * r.y, zz = r.z * r.z;
    double xy = r.x * r.y, xz = r.x * r.z, yz = r.y * r.z;
    R.m[0][0] = 1.0 - c * (yy + zz);
    R.m[0][1] = -s * r.z + c * xy;
    R.m[0][2] = s * r.y + c * xz;
    R.m[1][0] = s * r.z + c * xy;
    R.m[1][1] = 1.0 - c * (xx + zz);
    R.m[1][2] = -s * r.x + c * yz;
    R.m[2][0] = -s * r.y + c * xz;
    R.m[2][1] = s * r.x + c * yz;
    R.m[2][2] = 1.0 - c * (xx + yy);
    return R;
}

/// Left Jacobian of the SO(3) exponential:
/// J_l(r) = I + cosc(|r|) [r]x + jfac(|r|) [r]x^2, so that
/// d/de exp([r + e dr]x)|_{e=0} = [J_l(r) dr]x exp([r]x).
inline Mat3 left_jacobian(const Vec3& r) {
    double th = norm(r);
    double c = detail::cosc(th), j = detail::jfac(th);
    double xx = r.x * r.x, yy = r.y * r.y, zz = r.z * r.z;
    double xy = r.x * r.y, xz = r.x * r.z, yz = r.y * r.z;
    Mat3 J = Mat3::identity();
    J.m[0][0] = 1.0 - j * (yy + zz);
    J.m[0][1] = -c * r.z + j * xy;
    J.m[0][2] = c * r.y + j * xz;
    J.m[1][0] = c * r.z + j * xy;
    J.m[1][1] = 1.0 - j * (xx + zz);
    J.m[1][2] = -c * r.x + j * yz;
    J.m[2][0] = -c * r.y + j * xz;
    J.m[2][1] = c * r.x + j * yz;
    J.m[2][2] = 1.0 - j * (xx + yy);
    return J;
}

}  // namespace pulses
