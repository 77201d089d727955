#ifndef EWAVE_FIELD_HPP
#define EWAVE_FIELD_HPP

#include <string>
#include <vector>

#include "ewave/lattice.hpp"
#include "ewave/vec2.hpp"

namespace ewave {

/**
 * Complex samples on the uniform M x M grid over S = (-R', R')^2,
 * row-major with index iy * M + ix. The field is anti-periodic in x1
 * (half-shift basis) and periodic in x2.
 */
struct PeriodicField {
    int M = 0;
    double R_prime = 0.0;
    std::vector<cplx> v;

    PeriodicField() = default;
    PeriodicField(int M_, double R_prime_)
        : M(M_), R_prime(R_prime_), v(static_cast<std::size_t>(M_) * M_) {}

    cplx& at(int ix, int iy) { return v[static_cast<std::size_t>(iy) * M + ix]; }
    const cplx& at(int ix, int iy) const { return v[static_cast<std::size_t>(iy) * M + ix]; }

    double l2(double cell_area) const;
    /** L2 norm restricted to the disk |x| < radius. */
    double l2_disk(double radius, double cell_area) const;

    void dump_binary(const std::string& path) const;
    void dump_csv(const std::string& path) const;
    static PeriodicField load_binary(const std::string& path, int M, double R_prime);
};

/**
 * Catmull-Rom interpolation of grid samples at an arbitrary point,
 * honoring the half-shift structure: anti-periodic wrap in x1, periodic
 * in x2.
 */
cplx interpolate_bicubic(const PeriodicField& f, Vec2 xp);

/**
 * FFT-backed analysis/synthesis in the half-shift basis
 * e_alpha(x) = (1/2R') exp(i alpha.x). Coefficients are stored in FFT bin
 * order matching SpectralMultiplier. Round trips reproduce samples to
 * near machine precision.
 */
class SpectralGrid {
   public:
    SpectralGrid(const HalfShiftLattice& lattice);
    ~SpectralGrid();
    SpectralGrid(const SpectralGrid&) = delete;
    SpectralGrid& operator=(const SpectralGrid&) = delete;

    int M() const { return M_; }
    double R_prime() const { return lattice_.R_prime(); }
    const HalfShiftLattice& lattice() const { return lattice_; }
    double coord(int i) const { return -R_prime() + (2.0 * R_prime() / M_) * i; }
    double cell_area() const { return (2.0 * R_prime() / M_) * (2.0 * R_prime() / M_); }

    PeriodicField make_field() const { return {M_, R_prime()}; }

    void to_coeffs(const PeriodicField& samples, std::vector<cplx>& coeffs) const;
    void to_samples(const std::vector<cplx>& coeffs, PeriodicField& samples) const;

    /** Apply a diagonal multiplier in coefficient space: out = synth(mult . anal(in)). */
    void apply_multiplier(const PeriodicField& in, const std::vector<cplx>& mult,
                          PeriodicField& out) const;

    /** Spectral partial derivatives of the sample field. */
    void derivative(const PeriodicField& in, int axis, PeriodicField& out) const;

    double alpha1_of_bin(int kx) const { return lattice_.alpha1(lattice_.signed_index(kx)); }
    double alpha2_of_bin(int ky) const { return lattice_.alpha2(lattice_.signed_index(ky)); }

   private:
    HalfShiftLattice lattice_;
    int M_;
    void* plan_fwd_;
    void* plan_bwd_;
    mutable std::vector<cplx> buf_;
    std::vector<cplx> pre1_;   // exp(-i pi x1 / (2 R')) per ix
    std::vector<double> sgn_;  // (-1)^k per bin
};

}  // namespace ewave

#endif
