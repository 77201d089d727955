#include "ewave/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace ewave {

namespace {

// Newton iteration on Legendre polynomials; nodes on (-1, 1).
void legendre_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace

GaussRule gauss_rule(int order, double a, double b) {
    if (order < 1 || order > 64) throw std::invalid_argument("gauss_rule: order out of range");
    std::vector<double> x, w;
    legendre_nodes(order, x, w);
    GaussRule r;
    r.nodes.resize(order);
    r.weights.resize(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < order; ++i) {
        r.nodes[i] = mid + half * x[i];
        r.weights[i] = half * w[i];
    }
    return r;
}

std::vector<double> graded_breakpoints(double h, int n_panels, double ratio) {
    std::vector<double> b(n_panels + 1);
    b[n_panels] = h;
    double t = h;
    for (int i = n_panels - 1; i >= 1; --i) {
        t *= ratio;
        b[i] = t;
    }
    b[0] = 0.0;
    return b;
}

cplx integrate_panels(const std::function<cplx(double)>& f,
                      const std::vector<double>& breakpoints, int order) {
    cplx acc = 0.0;
    for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
        const GaussRule r = gauss_rule(order, breakpoints[p], breakpoints[p + 1]);
        for (int i = 0; i < order; ++i) acc += r.weights[i] * f(r.nodes[i]);
    }
    return acc;
}

cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double tol) {
    using boost::math::quadrature::gauss_kronrod;
    const double re = gauss_kronrod<double, 31>::integrate(
        [&](double t) { return f(t).real(); }, a, b, 12, tol);
    const double im = gauss_kronrod<double, 31>::integrate(
        [&](double t) { return f(t).imag(); }, a, b, 12, tol);
    return {re, im};
}

cplx integrate_sector(const Sector& sector, const SectorQuadratureSpec& spec,
                      const std::function<cplx(Vec2)>& f) {
    const auto rbreaks = graded_breakpoints(sector.h, spec.radial_panels, spec.radial_ratio);
    cplx acc = 0.0;
    const double dtheta = sector.opening() / spec.angular_panels;
    for (int ap = 0; ap < spec.angular_panels; ++ap) {
        const GaussRule ang = gauss_rule(spec.angular_order, sector.theta_m + ap * dtheta,
                                         sector.theta_m + (ap + 1) * dtheta);
        for (int ia = 0; ia < spec.angular_order; ++ia) {
            const double theta = ang.nodes[ia];
            const Vec2 dir = unit_vector(theta);
            cplx radial = 0.0;
            for (std::size_t p = 0; p + 1 < rbreaks.size(); ++p) {
                const GaussRule rad = gauss_rule(spec.radial_order, rbreaks[p], rbreaks[p + 1]);
                for (int ir = 0; ir < spec.radial_order; ++ir) {
                    const double r = rad.nodes[ir];
                    radial += rad.weights[ir] * r * f(sector.apex + r * dir);
                }
            }
            acc += ang.weights[ia] * radial;
        }
    }
    return acc;
}

cplx integrate_polygon(const ConvexPolygon& poly, int order,
                       const std::function<cplx(Vec2)>& f) {
    const Vec2 c = poly.centroid();
    const GaussRule g = gauss_rule(order, 0.0, 1.0);
    cplx acc = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t e = 0; e < n; ++e) {
        const Vec2 a = poly.vertices[e] - c;
        const Vec2 b = poly.vertices[(e + 1) % n] - c;
        const double jac0 = a.cross(b);
        // Duffy map of the unit square onto triangle (0, a, b).
        for (int i = 0; i < order; ++i) {
            const double u = g.nodes[i];
            for (int j = 0; j < order; ++j) {
                const double v = g.nodes[j];
                const Vec2 x = c + u * (a + v * (b - a));
                acc += g.weights[i] * g.weights[j] * (jac0 * u) * f(x);
            }
        }
    }
    return acc;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(y[i])) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    return linear_fit(lx, ly).slope;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("linear_fit: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0.0;
    const double mean = sy / n;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fit = intercept + slope * x[i];
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return {intercept, slope, r2};
}

}  // namespace ewave
