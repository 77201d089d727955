#ifndef EWAVE_POTENTIAL_HPP
#define EWAVE_POTENTIAL_HPP

#include "ewave/field.hpp"
#include "ewave/lattice.hpp"
#include "ewave/vec2.hpp"

namespace ewave {

/**
 * Potential operator: coefficient-wise multiplication by
 * c(alpha) = 1/(alpha.alpha - 2i xi.alpha). This diagonal action equals
 * convolution with the lattice Green function normalized so that
 * e^(xi.x) g_xi(x) is a fundamental solution of Delta + k^2 with unit
 * delta strength.
 */
PeriodicField apply_P(const SpectralGrid& grid, const SpectralMultiplier& mult,
                      const PeriodicField& f);

/** Gradient components of P f via the i alpha multipliers. */
PeriodicField apply_P_derivative(const SpectralGrid& grid, const SpectralMultiplier& mult,
                                 const PeriodicField& f, int axis);

/**
 * Pointwise evaluation of the lattice series
 * g_xi(x) = sum_alpha c(alpha) e_alpha(x) and h_xi = e^(xi.x) g_xi.
 * A smooth spectral window (raised to window_power, starting at
 * window_start of the truncation radius) suppresses the Gibbs tail of the
 * sharp partial sum; window_start = 1 recovers the raw truncation.
 */
class SeriesEvaluator {
   public:
    SeriesEvaluator(const HalfShiftLattice& lattice, double tau, double k,
                    double window_start = 0.55, int window_power = 6);

    cplx g(Vec2 x) const;
    cplx h(Vec2 x) const;
    /** Raw partial sum with the lattice enumerated alpha -> -alpha. */
    cplx g_reflected(Vec2 x) const;

    double tau() const { return tau_; }
    double k() const { return k_; }

   private:
    double window(double abs_alpha) const;
    const HalfShiftLattice lattice_;
    double tau_, k_, root_;
    double cutoff_;
    double window_start_;
    int window_power_;
};

}  // namespace ewave

#endif
