#include "ewave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ewave {

namespace {
constexpr double pi = std::numbers::pi;

double wrap_to(double angle, double lo) {
    while (angle < lo) angle += 2.0 * pi;
    while (angle >= lo + 2.0 * pi) angle -= 2.0 * pi;
    return angle;
}
}  // namespace

Sector::Sector(Vec2 apex_, double theta_m_, double theta_M_, double h_)
    : apex(apex_), theta_m(theta_m_), theta_M(theta_M_), h(h_) {
    const double open = theta_M - theta_m;
    if (!(open > 0.0 && open < pi))
        throw std::invalid_argument("Sector: opening must lie in (0, pi)");
    if (!(h > 0.0)) throw std::invalid_argument("Sector: truncation radius must be positive");
}

bool Sector::contains(Vec2 p) const {
    const Vec2 r = p - apex;
    const double rr = r.norm();
    if (rr == 0.0 || rr >= h) return false;
    const double t = wrap_to(std::atan2(r.y, r.x), theta_m);
    return t > theta_m && t < theta_M;
}

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vs) : vertices(std::move(vs)) {
    const std::size_t n = vertices.size();
    if (n < 3) throw std::invalid_argument("ConvexPolygon: need at least 3 vertices");
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
        const Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
        if (!(e0.cross(e1) > 0.0))
            throw std::invalid_argument("ConvexPolygon: vertices must be strictly convex CCW");
    }
}

bool ConvexPolygon::contains(Vec2 p) const {
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e = vertices[(i + 1) % n] - vertices[i];
        if (e.cross(p - vertices[i]) <= 0.0) return false;
    }
    return true;
}

double ConvexPolygon::max_radius() const {
    double r = 0.0;
    for (const auto& v : vertices) r = std::max(r, v.norm());
    return r;
}

Vec2 ConvexPolygon::centroid() const {
    Vec2 c{0.0, 0.0};
    for (const auto& v : vertices) c = c + v;
    return c / static_cast<double>(vertices.size());
}

Sector ConvexPolygon::vertex_sector(std::size_t i, double h) const {
    const std::size_t n = vertices.size();
    const Vec2 v = vertices[i % n];
    const Vec2 e_next = vertices[(i + 1) % n] - v;
    const Vec2 e_prev = vertices[(i + n - 1) % n] - v;
    const double tm = std::atan2(e_next.y, e_next.x);
    const double tM = wrap_to(std::atan2(e_prev.y, e_prev.x), tm);
    return Sector(v, tm, tM, h);
}

ProbeDirection choose_probe_direction(const Sector& sector, double margin) {
    if (!(margin >= 0.0 && margin < 1.0))
        throw std::invalid_argument("choose_probe_direction: margin must lie in [0, 1)");
    const double open = sector.opening();
    if (!(open > 0.0 && open < pi))
        throw std::invalid_argument("choose_probe_direction: opening not in (0, pi), no admissible direction");
    const double theta_d = wrap_to(sector.bisector_angle() + pi, 0.0);
    const double delta = std::cos(0.5 * open) * (1.0 - margin);
    return probe_from_angle(theta_d, delta);
}

ProbeDirection probe_from_angle(double theta_d, double delta) {
    ProbeDirection p;
    p.theta_d = theta_d;
    p.d = unit_vector(theta_d);
    p.d_perp = p.d.perp();
    p.delta = delta;
    return p;
}

}  // namespace ewave
