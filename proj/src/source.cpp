#include "ewave/source.hpp"

#include <cmath>

namespace ewave {

SourceModel SourceModel::polynomial_on_polygon(ConvexPolygon support, Vec2 x0, Vec2 f0, Mat2 G) {
    SourceModel s;
    s.support_kind_ = SupportKind::Polygon;
    s.polygon_ = std::move(support);
    s.value_ = [x0, f0, G](Vec2 x) { return f0 + G.apply(x - x0); };
    s.gradient_ = [G](Vec2) { return G; };
    s.regularity_ = Regularity::C1alpha;
    s.holder_constant_ = 0.0;
    return s;
}

SourceModel SourceModel::polynomial_on_sector(Sector support, Vec2 f0, Mat2 G) {
    SourceModel s;
    const Vec2 x0 = support.apex;
    s.support_kind_ = SupportKind::Sector;
    s.sector_ = support;
    s.value_ = [x0, f0, G](Vec2 x) { return f0 + G.apply(x - x0); };
    s.gradient_ = [G](Vec2) { return G; };
    s.regularity_ = Regularity::C1alpha;
    s.holder_constant_ = 0.0;
    return s;
}

SourceModel SourceModel::holder_on_sector(Sector support, Vec2 f0, Mat2 G, double alpha,
                                          double holder_constant, Vec2 direction) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("holder_on_sector: alpha must lie in (0, 1)");
    SourceModel s;
    const Vec2 x0 = support.apex;
    const Vec2 u = direction / direction.norm();
    const double c = holder_constant;
    s.support_kind_ = SupportKind::Sector;
    s.sector_ = support;
    s.value_ = [x0, f0, G, alpha, c, u](Vec2 x) {
        const Vec2 r = x - x0;
        return f0 + G.apply(r) + (c * std::pow(r.norm(), 1.0 + alpha)) * u;
    };
    s.gradient_ = [x0, G, alpha, c, u](Vec2 x) {
        const Vec2 r = x - x0;
        const double rn = r.norm();
        if (rn == 0.0) return G;
        const double w = c * (1.0 + alpha) * std::pow(rn, alpha - 1.0);
        return Mat2{G.a + w * u.x * r.x, G.b + w * u.x * r.y,
                    G.c + w * u.y * r.x, G.d + w * u.y * r.y};
    };
    s.regularity_ = Regularity::C1alpha;
    s.alpha_ = alpha;
    s.holder_constant_ = holder_constant;
    return s;
}

SourceModel SourceModel::on_disk(Vec2 center, double radius, std::function<Vec2(Vec2)> value,
                                 std::function<Mat2(Vec2)> gradient, Regularity reg, double alpha) {
    SourceModel s;
    s.support_kind_ = SupportKind::Disk;
    s.disk_center_ = center;
    s.disk_radius_ = radius;
    s.value_ = std::move(value);
    s.gradient_ = std::move(gradient);
    s.regularity_ = reg;
    s.alpha_ = alpha;
    return s;
}

bool SourceModel::in_support(Vec2 x) const {
    switch (support_kind_) {
        case SupportKind::Polygon:
            return polygon_->contains(x);
        case SupportKind::Sector:
            return sector_->contains(x);
        case SupportKind::Disk:
            return (x - disk_center_).norm() <= disk_radius_;
    }
    return false;
}

Vec2 SourceModel::value(Vec2 x) const {
    if (!in_support(x)) return {0.0, 0.0};
    return value_(x);
}

Mat2 SourceModel::gradient(Vec2 x) const {
    if (!in_support(x)) return {};
    return gradient_(x);
}

double SourceModel::support_radius() const {
    switch (support_kind_) {
        case SupportKind::Polygon:
            return polygon_->max_radius();
        case SupportKind::Sector:
            return sector_->apex.norm() + sector_->h;
        case SupportKind::Disk:
            return disk_center_.norm() + disk_radius_;
    }
    return 0.0;
}

// SmoothBump: g_i(x) = A_i q(t), t = |x - c|^2 / s^2, q(t) = (1 - t)^4.
// With y = x - c and u = |y|^2:
//   d_j g_i      = (2/s^2) A_i q' y_j
//   Lap g_i      = (4/s^2) A_i (q' + t q'')
//   (grad div g)_i = (4/s^4) q'' y_i (A.y) + (2/s^2) q' A_i

namespace {
inline double q0(double t) { const double s = 1 - t; return s * s * s * s; }
inline double q1(double t) { const double s = 1 - t; return -4 * s * s * s; }
inline double q2(double t) { const double s = 1 - t; return 12 * s * s; }
inline double q3(double t) { return -24 * (1 - t); }
}  // namespace

Vec2 SmoothBump::value(Vec2 x) const {
    const Vec2 y = x - center;
    const double t = y.norm2() / (radius * radius);
    if (t >= 1.0) return {0.0, 0.0};
    return q0(t) * amplitude;
}

Mat2 SmoothBump::jacobian(Vec2 x) const {
    const Vec2 y = x - center;
    const double s2 = radius * radius;
    const double t = y.norm2() / s2;
    if (t >= 1.0) return {};
    const double w = 2.0 * q1(t) / s2;
    return {w * amplitude.x * y.x, w * amplitude.x * y.y,
            w * amplitude.y * y.x, w * amplitude.y * y.y};
}

Vec2 SmoothBump::laplacian(Vec2 x) const {
    const Vec2 y = x - center;
    const double s2 = radius * radius;
    const double t = y.norm2() / s2;
    if (t >= 1.0) return {0.0, 0.0};
    return (4.0 / s2) * (q1(t) + t * q2(t)) * amplitude;
}

Vec2 SmoothBump::grad_div(Vec2 x) const {
    const Vec2 y = x - center;
    const double s2 = radius * radius;
    const double t = y.norm2() / s2;
    if (t >= 1.0) return {0.0, 0.0};
    const double ay = amplitude.dot(y);
    return (4.0 * q2(t) / (s2 * s2) * ay) * y + (2.0 * q1(t) / s2) * amplitude;
}

Vec2 SmoothBump::navier(Vec2 x, double lambda, double mu) const {
    return mu * laplacian(x) + (lambda + mu) * grad_div(x);
}

Mat2 SmoothBump::navier_gradient(Vec2 x, double lambda, double mu) const {
    const Vec2 y = x - center;
    const double s2 = radius * radius;
    const double t = y.norm2() / s2;
    if (t >= 1.0) return {};
    const double ay = amplitude.dot(y);
    Mat2 out{};
    // d_k Lap g_i = (4/s^2) A_i (2 q'' + t q''') (2 y_k / s^2)
    const double dl = (8.0 / (s2 * s2)) * (2.0 * q2(t) + t * q3(t));
    // d_k (grad div g)_i =
    //   (8/s^6) q''' y_i y_k (A.y) + (4/s^4) q'' (d_ik (A.y) + y_i A_k + y_k A_i)
    const double g3 = 8.0 * q3(t) / (s2 * s2 * s2);
    const double g2 = 4.0 * q2(t) / (s2 * s2);
    const double yv[2] = {y.x, y.y};
    const double av[2] = {amplitude.x, amplitude.y};
    double m[2][2];
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            const double lap_term = mu * dl * av[i] * yv[k];
            const double gd_term = (lambda + mu) * (g3 * yv[i] * yv[k] * ay +
                                                    g2 * ((i == k ? ay : 0.0) + yv[i] * av[k] + yv[k] * av[i]));
            m[i][k] = lap_term + gd_term;
        }
    out.a = m[0][0];
    out.b = m[0][1];
    out.c = m[1][0];
    out.d = m[1][1];
    return out;
}

}  // namespace ewave
