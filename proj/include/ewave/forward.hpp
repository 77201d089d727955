#ifndef EWAVE_FORWARD_HPP
#define EWAVE_FORWARD_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ewave/kupradze.hpp"
#include "ewave/medium.hpp"
#include "ewave/source.hpp"
#include "ewave/vec2.hpp"

namespace ewave {

/** Uniform cell-centered grid on the box [-L, L]^2. */
struct BoxGrid {
    int M;
    double L;

    double h() const { return 2.0 * L / M; }
    double coord(int i) const { return -L + h() * (i + 0.5); }
    std::size_t cells() const { return static_cast<std::size_t>(M) * M; }
    std::size_t idx(int ix, int iy) const { return static_cast<std::size_t>(iy) * M + ix; }
};

/**
 * Volume potential W[g](x) = Int Gamma(x - y) g(y) dy on the box grid,
 * applied through a padded FFT with the Fourier transform of the kernel
 * truncated at radius D > diam(box). The truncated-kernel transform is
 * known in closed form through Lommel cross-product integrals, so the
 * weakly singular diagonal needs no local weight surgery and smooth
 * densities are integrated with spectral accuracy.
 */
class VolumePotential {
   public:
    VolumePotential(const ElasticMedium& medium, const BoxGrid& grid);
    ~VolumePotential();
    VolumePotential(const VolumePotential&) = delete;
    VolumePotential& operator=(const VolumePotential&) = delete;

    const BoxGrid& grid() const { return grid_; }

    /** Apply to a two-component field sampled at cell centers. */
    void apply(const std::vector<cplx>& g1, const std::vector<cplx>& g2,
               std::vector<cplx>& out1, std::vector<cplx>& out2) const;

   private:
    BoxGrid grid_;
    int Mp_;
    double P_;
    std::vector<cplx> k11_, k12_, k22_;  // kernel transform, FFT bin order
    void* plan_fwd_;
    void* plan_bwd_;
    mutable std::vector<cplx> bufA_, bufB_;
};

/** Scalar truncated-kernel transform of (i/4) H0^(1)(k|z|), |z| < D. */
cplx helmholtz_kernel_hat(double k, double D, double rho);

struct ForwardOptions {
    int max_born = 60;
    int max_krylov = 400;
    double tol = 1e-9;
};

struct ForwardSolution {
    BoxGrid grid;
    std::vector<cplx> u1, u2;
    int born_iterations = 0;
    int krylov_iterations = 0;
    bool used_krylov = false;
    double residual = 0.0;

    CVec2 at(int ix, int iy) const { return {u1[grid.idx(ix, iy)], u2[grid.idx(ix, iy)]}; }
    /** L2 norm of u over cells selected by a mask callback. */
    double l2_where(const std::function<bool(Vec2)>& mask) const;
};

class ContrastError : public std::runtime_error {
   public:
    explicit ContrastError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * Outgoing solution of L u + omega^2 rho u = f through the
 * Lippmann-Schwinger equation u = W[f] + omega^2 W[(1 - rho) u].
 * Born iteration first; on stagnation the solve switches to BiCGSTAB on
 * the same matrix-free operator.
 */
ForwardSolution solve_forward(const SourceModel& f, const ElasticMedium& medium,
                              const BoxGrid& grid, const ForwardOptions& opts = {});

/** Far-field pattern sampled on the unit circle. */
struct FarFieldPattern {
    std::vector<double> angles;
    std::vector<CVec2> up;
    std::vector<CVec2> us;

    CVec2 total(std::size_t i) const { return up[i] + us[i]; }
    double max_amplitude() const;
    double energy_p() const;
    double energy_s() const;
    void export_csv(const std::string& path) const;
    void export_summary_json(const std::string& path) const;
};

/**
 * u_p^inf = cp x x^T S(kp), u_s^inf = cs t t^T S(ks) with
 * S(k) = Int e^{-i k x_hat.y} F(y) dy and F = f + omega^2 (1 - rho) u.
 */
FarFieldPattern far_field(const SourceModel& f, const ForwardSolution& u,
                          const ElasticMedium& medium, int n_directions);

/**
 * Relative L2 residual of L u + omega^2 rho u - f by centered stencils,
 * over interior cells whose neighborhood (margin cells wide) stays on one
 * side of the support boundary: the PDE holds classically there, and the
 * band-limited ringing of a discontinuous source is excluded.
 */
double forward_stencil_residual(const ForwardSolution& u, const SourceModel& f,
                                const ElasticMedium& medium, int margin = 3);

/**
 * f0 := (L + omega^2 rho) g for a smooth bump g. Radiates nothing:
 * its outgoing field is g itself, supported inside supp g.
 * The bump must sit strictly inside D_R.
 */
SourceModel make_nonradiating(const SmoothBump& g, const ElasticMedium& medium, double R_domain);

/** Displacement and traction sampled on the circle |x| = radius. */
struct CauchyData {
    double radius = 0.0;
    std::vector<double> angles;
    std::vector<CVec2> u;
    std::vector<CVec2> traction;

    void export_csv(const std::string& path) const;
    static CauchyData load_csv(const std::string& path);
};

/**
 * Cauchy data from a grid solution via the representation
 * u = W[F], evaluated off-grid with the pointwise Kupradze kernel.
 */
CauchyData cauchy_from_solution(const SourceModel& f, const ForwardSolution& u,
                                const ElasticMedium& medium, double radius, int n_points);

/**
 * Cauchy data for a constant source on a polygon in a homogeneous medium
 * (rho == 1), by high-order quadrature of the representation integral.
 * Each centroid-fan triangle is midpoint-subdivided `subdivision` times;
 * panel Gauss then converges geometrically even when the circle passes
 * close to the support.
 */
CauchyData cauchy_from_polygon_source(const ConvexPolygon& poly, Vec2 f_const,
                                      const ElasticMedium& medium, double radius,
                                      int n_points, int gauss_order = 16,
                                      int subdivision = 0);

/** Same representation-quadrature route for a smooth disk-supported source. */
CauchyData cauchy_from_disk_source(const SourceModel& f, const ElasticMedium& medium,
                                   double radius, int n_points, int gauss_order = 24);

}  // namespace ewave

#endif
