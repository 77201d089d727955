#ifndef EWAVE_KUPRADZE_HPP
#define EWAVE_KUPRADZE_HPP

#include <array>

#include "ewave/medium.hpp"
#include "ewave/vec2.hpp"

namespace ewave {

/** Hankel functions of the first kind, orders 0 and 1, real argument. */
cplx hankel1_0(double x);
cplx hankel1_1(double x);

/**
 * Kupradze fundamental matrix of L + omega^2:
 *   Gamma_ij(z) = -(i/4mu) d_ij H0(ks r)
 *                 -(i/4om^2) d_i d_j (H0(ks r) - H0(kp r)),
 * normalized so that (L + omega^2) Gamma = delta I. Even in z and
 * symmetric as a matrix; the log singularities of the two Hankel terms
 * cancel inside the second-derivative difference, leaving a weakly
 * singular kernel.
 */
class KupradzeMatrix {
   public:
    explicit KupradzeMatrix(const ElasticMedium& medium);

    CMat2 eval(Vec2 z) const;
    /** grad(z)[k] holds d Gamma_ij / d z_k as a matrix. */
    std::array<CMat2, 2> grad(Vec2 z) const;

    double kp() const { return kp_; }
    double ks() const { return ks_; }

    /**
     * Far-field normalization constants. From the large-argument form
     * H0(z) ~ sqrt(2/(pi z)) e^{i(z - pi/4)} and d_i -> i k x_hat_i applied
     * to Gamma(x - y) ~ (e^{i k r}/sqrt r) e^{-i k x_hat.y} (...):
     * the identity part combines with the ks-Hessian term through
     * ks^2/om^2 = 1/mu into the tangential projector, giving
     *   u_s^inf = cs P_perp Int e^{-i ks x_hat.y} F dy,
     *   cs = -(i/(4 mu)) sqrt(2/(pi ks)) e^{-i pi/4},
     * while the kp-Hessian term alone yields the radial projector with
     *   cp = -(i/(4 (lambda+2mu))) sqrt(2/(pi kp)) e^{-i pi/4}.
     */
    cplx farfield_cp() const;
    cplx farfield_cs() const;

   private:
    double lambda_, mu_, omega_, kp_, ks_;
};

}  // namespace ewave

#endif
