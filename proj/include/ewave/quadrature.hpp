#ifndef EWAVE_QUADRATURE_HPP
#define EWAVE_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "ewave/geometry.hpp"
#include "ewave/vec2.hpp"

namespace ewave {

/** Gauss-Legendre nodes/weights on [a, b]. Orders 1..30 are supported. */
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_rule(int order, double a, double b);

/**
 * Panels for [0, h] graded geometrically toward 0 with the given ratio:
 * breakpoints h, h r, h r^2, ..., down to n_panels pieces.
 */
std::vector<double> graded_breakpoints(double h, int n_panels, double ratio = 0.5);

/** Composite Gauss quadrature of a complex integrand over given breakpoints. */
cplx integrate_panels(const std::function<cplx(double)>& f,
                      const std::vector<double>& breakpoints, int order);

/** Adaptive Gauss-Kronrod quadrature of a complex integrand on [a, b]. */
cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                        double tol = 1e-13);

struct SectorQuadratureSpec {
    int radial_panels = 12;
    double radial_ratio = 0.5;
    int radial_order = 12;
    int angular_order = 24;
    int angular_panels = 1;
};

/**
 * Quadrature over the truncated sector in polar coordinates about the apex;
 * the integrand is sampled at absolute points x with the polar Jacobian
 * included in the weight. Radial panels are graded toward the apex to
 * resolve Laplace-type boundary layers.
 */
cplx integrate_sector(const Sector& sector, const SectorQuadratureSpec& spec,
                      const std::function<cplx(Vec2)>& f);

/**
 * Quadrature over a convex polygon: centroid fan of triangles, each mapped
 * from a tensor Gauss square (Duffy). Exact for moderate polynomial degree
 * and spectrally accurate for analytic integrands.
 */
cplx integrate_polygon(const ConvexPolygon& poly, int order,
                       const std::function<cplx(Vec2)>& f);

/** Least-squares slope of log|y| against log x, skipping non-finite pairs. */
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/** Linear fit y = a + b x; returns {a, b, R^2}. */
struct LinearFit {
    double intercept;
    double slope;
    double r2;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ewave

#endif
