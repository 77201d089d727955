#ifndef EWAVE_SOURCE_HPP
#define EWAVE_SOURCE_HPP

#include <functional>
#include <memory>
#include <optional>

#include "ewave/geometry.hpp"
#include "ewave/medium.hpp"
#include "ewave/vec2.hpp"

namespace ewave {

enum class Regularity { Calpha, C1alpha };

/**
 * Compactly supported vector source term. The value vanishes outside the
 * support; inside, value/gradient follow a user-supplied rule. For
 * C1alpha sources the expansion f(x) = f(x0) + grad f(x0) (x - x0) + df(x)
 * has |df| <= M |x - x0|^(1+alpha) near a corner x0.
 */
class SourceModel {
   public:
    enum class SupportKind { Polygon, Sector, Disk };

    /** f(x) = f0 + G (x - x0) on a polygon, zero outside. */
    static SourceModel polynomial_on_polygon(ConvexPolygon support, Vec2 x0, Vec2 f0, Mat2 G);

    /** f(x) = f0 + G (x - x0) on a truncated sector, zero outside. */
    static SourceModel polynomial_on_sector(Sector support, Vec2 f0, Mat2 G);

    /**
     * Polynomial plus an explicit Hoelder remainder
     * c |x - x0|^(1+alpha) u_hat on a sector.
     */
    static SourceModel holder_on_sector(Sector support, Vec2 f0, Mat2 G, double alpha,
                                        double holder_constant, Vec2 direction);

    /** Arbitrary smooth rule restricted to a disk |x - c| <= radius. */
    static SourceModel on_disk(Vec2 center, double radius,
                               std::function<Vec2(Vec2)> value,
                               std::function<Mat2(Vec2)> gradient,
                               Regularity reg, double alpha);

    Vec2 value(Vec2 x) const;
    Mat2 gradient(Vec2 x) const;
    bool in_support(Vec2 x) const;

    SupportKind support_kind() const { return support_kind_; }
    const std::optional<ConvexPolygon>& polygon() const { return polygon_; }
    const std::optional<Sector>& sector() const { return sector_; }
    Vec2 disk_center() const { return disk_center_; }
    double disk_radius() const { return disk_radius_; }
    /** Radius of a disk about the origin containing the support. */
    double support_radius() const;

    Regularity regularity() const { return regularity_; }
    double holder_exponent() const { return alpha_; }
    double holder_constant() const { return holder_constant_; }

   private:
    SourceModel() = default;
    SupportKind support_kind_ = SupportKind::Disk;
    std::optional<ConvexPolygon> polygon_;
    std::optional<Sector> sector_;
    Vec2 disk_center_{0.0, 0.0};
    double disk_radius_ = 0.0;
    std::function<Vec2(Vec2)> value_;
    std::function<Mat2(Vec2)> gradient_;
    Regularity regularity_ = Regularity::C1alpha;
    double alpha_ = 0.5;
    double holder_constant_ = 0.0;
};

/**
 * Smooth compactly supported vector field g(x) = A q(|x - c|^2 / s^2),
 * q(t) = (1 - t)^4 on [0, 1]. Provides the closed-form derivatives needed
 * to apply the Navier operator to it exactly.
 */
struct SmoothBump {
    Vec2 center;
    double radius;
    Vec2 amplitude;

    Vec2 value(Vec2 x) const;
    Mat2 jacobian(Vec2 x) const;
    Vec2 laplacian(Vec2 x) const;
    Vec2 grad_div(Vec2 x) const;
    /** (L g)(x) = mu laplacian + (lambda+mu) grad div. */
    Vec2 navier(Vec2 x, double lambda, double mu) const;
    /** Jacobian of (L g); the omega^2 rho g part is assembled by the caller. */
    Mat2 navier_gradient(Vec2 x, double lambda, double mu) const;
};

}  // namespace ewave

#endif
