#ifndef EWAVE_VEC2_HPP
#define EWAVE_VEC2_HPP

#include <cmath>
#include <complex>

namespace ewave {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};

/** Plain 2-vector over the reals. */
struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    /** Counter-clockwise rotation by 90 degrees. */
    Vec2 perp() const { return {-y, x}; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline Vec2 unit_vector(double theta) { return {std::cos(theta), std::sin(theta)}; }

/** 2-vector over the complex numbers. */
struct CVec2 {
    cplx x{}, y{};

    CVec2() = default;
    CVec2(cplx a, cplx b) : x(a), y(b) {}
    CVec2(Vec2 v) : x(v.x), y(v.y) {}

    CVec2 operator+(CVec2 o) const { return {x + o.x, y + o.y}; }
    CVec2 operator-(CVec2 o) const { return {x - o.x, y - o.y}; }
    CVec2 operator-() const { return {-x, -y}; }
    CVec2 operator*(cplx s) const { return {x * s, y * s}; }
    /** Bilinear dot product (no conjugation). */
    cplx dot(CVec2 o) const { return x * o.x + y * o.y; }
    cplx dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(std::norm(x) + std::norm(y)); }
};

inline CVec2 operator*(cplx s, CVec2 v) { return v * s; }
inline cplx dot(CVec2 a, CVec2 b) { return a.dot(b); }

/** 2x2 real matrix, row major. */
struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;  // [[a, b], [c, d]]

    Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    CVec2 apply(CVec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 transpose() const { return {a, c, b, d}; }
    double det() const { return a * d - b * c; }
    Mat2 mul(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    double trace() const { return a + d; }
};

/** 2x2 complex matrix, row major. */
struct CMat2 {
    cplx a{}, b{}, c{}, d{};

    CVec2 apply(CVec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    CMat2 operator+(const CMat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    CMat2 operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }
};

}  // namespace ewave

#endif
