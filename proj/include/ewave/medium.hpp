#ifndef EWAVE_MEDIUM_HPP
#define EWAVE_MEDIUM_HPP

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ewave/vec2.hpp"

namespace ewave {

/**
 * Density rho(x) of the medium, normalized so rho == 1 outside the disk
 * of radius R. Profiles are built to reach 1 at the seam with two
 * continuous derivatives.
 */
class DensityProfile {
   public:
    enum class Kind { ConstantOne, RadialBump, GridSampled };

    /** rho == 1 everywhere. */
    static DensityProfile constant_one();

    /**
     * rho(x) = 1 + a (1 - (|x|/R)^2)^3 inside |x| < R, 1 outside.
     * Requires a > -1 so that rho stays positive.
     */
    static DensityProfile radial_bump(double R, double amplitude);

    /** Bilinear interpolation of samples on a uniform grid over [-R, R]^2. */
    static DensityProfile grid_sampled(double R, int n, std::vector<double> samples);

    Kind kind() const { return kind_; }
    double support_radius() const { return R_; }
    double amplitude() const { return amplitude_; }

    double value(Vec2 x) const;
    Vec2 gradient(Vec2 x) const;

    /** Density as seen from a shifted origin: rho_shift(y) = rho(y + x0). */
    DensityProfile shifted(Vec2 x0) const;
    Vec2 shift() const { return shift_; }

   private:
    DensityProfile() = default;
    Kind kind_ = Kind::ConstantOne;
    double R_ = 0.0;
    double amplitude_ = 0.0;
    Vec2 shift_{0.0, 0.0};
    int n_ = 0;
    std::shared_ptr<const std::vector<double>> samples_;
};

/** Isotropic elastic background with variable density. */
struct ElasticMedium {
    double lambda;
    double mu;
    double omega;
    DensityProfile rho;

    ElasticMedium(double lambda_, double mu_, double omega_, DensityProfile rho_);

    double kp() const { return omega / std::sqrt(lambda + 2.0 * mu); }
    double ks() const { return omega / std::sqrt(mu); }
};

/** (kp, ks) = (omega/sqrt(lambda+2mu), omega/sqrt(mu)). */
std::pair<double, double> wavenumbers(const ElasticMedium& medium);

/**
 * Split a far-field value into its compressional (radial) and shear
 * (tangential) parts: up = (u . x_hat) x_hat, us = (x_hat_perp . u) x_hat_perp.
 */
std::pair<CVec2, CVec2> far_field_split(CVec2 u_inf, Vec2 x_hat);

}  // namespace ewave

#endif
