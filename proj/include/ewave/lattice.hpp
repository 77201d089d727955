#ifndef EWAVE_LATTICE_HPP
#define EWAVE_LATTICE_HPP

#include <vector>

#include "ewave/vec2.hpp"

namespace ewave {

/**
 * Dual lattice for the square S = (-R', R')^2 with the half-shifted first
 * component: alpha = ((m + 1/2) pi/R', n pi/R') for integer m, n in
 * [-N, N). The shift keeps alpha_1 away from zero: |alpha_1| >= pi/(2 R').
 */
class HalfShiftLattice {
   public:
    HalfShiftLattice(double R_prime, int N);

    double R_prime() const { return R_prime_; }
    int N() const { return N_; }
    /** Points per axis (= 2N). */
    int size() const { return 2 * N_; }

    double alpha1(int m) const { return (m + 0.5) * step_; }
    double alpha2(int n) const { return n * step_; }
    double step() const { return step_; }
    double min_abs_alpha1() const { return 0.5 * step_; }

    /** All (2N)^2 lattice points, m fastest. */
    std::vector<Vec2> points() const;

    /** Signed index for FFT bin k on a grid with 2N bins per axis. */
    int signed_index(int k) const { return k < N_ ? k : k - 2 * N_; }

   private:
    double R_prime_;
    int N_;
    double step_;
};

HalfShiftLattice build_lattice(double R_prime, int N);

/**
 * Diagonal Fourier multiplier c(alpha) = 1 / (alpha.alpha - 2i xi.alpha)
 * for xi = (-tau, i sqrt(tau^2 + k^2)). Construction asserts the
 * denominator bound |alpha.alpha - 2i xi.alpha| >= pi tau / R' on every
 * lattice point. Values are stored in FFT bin order (ky slowest).
 */
class SpectralMultiplier {
   public:
    SpectralMultiplier(const HalfShiftLattice& lattice, double tau, double k);

    double tau() const { return tau_; }
    double k() const { return k_; }
    const std::vector<cplx>& values() const { return c_; }
    cplx xi2() const { return xi2_; }

    /** max |c(alpha)|; bounded by R'/(pi tau). */
    double norm_P() const;
    /** max |alpha| |c(alpha)|; tau-independent plateau. */
    double norm_gradP() const;
    /** max |alpha|^2 |c(alpha)|; grows at most linearly in tau. */
    double norm_grad2P() const;

   private:
    double tau_;
    double k_;
    cplx xi2_;
    std::vector<cplx> c_;
    std::vector<double> abs_alpha_;
};

}  // namespace ewave

#endif
