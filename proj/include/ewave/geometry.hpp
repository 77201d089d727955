#ifndef EWAVE_GEOMETRY_HPP
#define EWAVE_GEOMETRY_HPP

#include <stdexcept>
#include <vector>

#include "ewave/vec2.hpp"

namespace ewave {

/**
 * Truncated convex sector S_{x0,h}: points x0 + r*(cos t, sin t) with
 * 0 < r < h and theta_m < t < theta_M. The opening must lie in (0, pi).
 */
struct Sector {
    Vec2 apex;
    double theta_m;
    double theta_M;
    double h;

    Sector(Vec2 apex_, double theta_m_, double theta_M_, double h_);

    double opening() const { return theta_M - theta_m; }
    double bisector_angle() const { return 0.5 * (theta_m + theta_M); }
    /** Point at polar coordinates (r, theta) relative to the apex. */
    Vec2 at(double r, double theta) const { return apex + r * unit_vector(theta); }
    bool contains(Vec2 p) const;
};

/** Strictly convex polygon, vertices in counter-clockwise order. */
struct ConvexPolygon {
    std::vector<Vec2> vertices;

    explicit ConvexPolygon(std::vector<Vec2> vs);

    std::size_t size() const { return vertices.size(); }
    bool contains(Vec2 p) const;
    double max_radius() const;
    /** Corner sector at vertex i, truncated to radius h. */
    Sector vertex_sector(std::size_t i, double h) const;
    Vec2 centroid() const;
};

/**
 * Probe direction for a sector: unit d with -1 <= d . x_hat(t) <= -delta
 * for every direction t in [theta_m, theta_M]. d_perp is the CCW rotation
 * of d by 90 degrees, so (d, d_perp) is a right-handed frame.
 */
struct ProbeDirection {
    Vec2 d;
    Vec2 d_perp;
    double theta_d;
    double delta;
};

/**
 * Bisector construction: d opposes the sector's mid direction and
 * delta = cos(opening/2) * (1 - margin). Throws if the opening is >= pi
 * (no admissible direction exists).
 */
ProbeDirection choose_probe_direction(const Sector& sector, double margin);

/** Probe with an explicitly prescribed direction angle; delta is measured. */
ProbeDirection probe_from_angle(double theta_d, double delta);

}  // namespace ewave

#endif
