#ifndef EWAVE_CGO_HPP
#define EWAVE_CGO_HPP

#include <memory>
#include <stdexcept>
#include <string>

#include "ewave/field.hpp"
#include "ewave/geometry.hpp"
#include "ewave/lattice.hpp"
#include "ewave/medium.hpp"
#include "ewave/potential.hpp"

namespace ewave {

/**
 * Phase data of the CGO solution u0 = e^(zeta.x) (eta + R):
 *   zeta = tau d + i sqrt(tau^2 + ks^2) d_perp,
 *   eta  = -i sqrt(1 + ks^2/tau^2) d + d_perp,
 * together with the reference vectors xi = (-tau, i sqrt(tau^2 + ks^2)),
 * xi~ = (-tau, i sqrt(tau^2 + kp^2)) and the orthogonal Q with
 * zeta = Q^T xi, zeta~ = Q^T xi~. The bilinear identities
 * zeta.zeta = -ks^2, zeta~.zeta~ = -kp^2, zeta.eta = 0 hold exactly.
 */
struct CgoParams {
    double tau;
    ProbeDirection probe;
    double kp;
    double ks;
    CVec2 zeta;
    CVec2 zeta_tilde;
    CVec2 eta;
    Mat2 Q;           // solver frame: x' = Q x
    double kappa;     // sqrt(tau^2+kp^2) - sqrt(tau^2+ks^2); (zeta~-zeta).x = i kappa x2'
    double xi_gap;    // |xi~ - xi|

    Vec2 to_frame(Vec2 x) const { return Q.apply(x); }
    Vec2 from_frame(Vec2 xp) const { return Q.transpose().apply(xp); }
    /** e^(zeta.x); |.| = e^(tau d.x), safe where d.x <= 0. */
    cplx phase(Vec2 x) const;
};

CgoParams make_cgo_params(const ElasticMedium& medium, const ProbeDirection& probe, double tau);

/** Raised when the measured contraction norm exceeds the solver gate. */
class BelowCgoThreshold : public std::runtime_error {
   public:
    BelowCgoThreshold(double measured, double tau)
        : std::runtime_error("CGO solver: measured ||T|| = " + std::to_string(measured) +
                             " at tau = " + std::to_string(tau) +
                             " exceeds 0.5; tau is below the contraction threshold"),
          measured_norm(measured) {}
    double measured_norm;
};

struct CgoIterate {
    PeriodicField R1, R2;  // components of R in the physical frame
    PeriodicField v;
};

/**
 * The fixed-point system (R, v) = S(eta) + T(R, v) assembled on the solver
 * frame grid. T splits into the ks-multiplier potential acting on
 * (1 - rho)(eta + R) and three kp/ks mixed terms acting on
 * (1 - rho) v - grad(rho).(eta + R); the kp branch carries the unimodular
 * phase e^(i kappa x2').
 */
class CgoOperators {
   public:
    /**
     * taper_start (fraction of R'): the kp-branch phase e^(i kappa x2') is
     * not periodic on the square; it is blended to periodicity beyond this
     * radius so stored fields stay smooth on the torus. Field values are
     * phase-exact for |x2'| below taper_start * R', which must cover the
     * evaluation disk D_R1.
     */
    CgoOperators(const ElasticMedium& medium, const CgoParams& params,
                 const HalfShiftLattice& lattice, double taper_start = 0.85);

    const SpectralGrid& grid() const { return *grid_; }
    const CgoParams& params() const { return params_; }

    CgoIterate s_of_eta() const;
    CgoIterate apply_T(const CgoIterate& in) const;

    /** Full affine map S + T(in). */
    CgoIterate step(const CgoIterate& in) const;

    CgoIterate zero_iterate() const;

    /** Power-iteration estimate of the contraction factor (spectral
        radius); this is what gates and predicts the fixed-point
        convergence. Deterministic (fixed seed). */
    double measure_T_norm(int iterations = 6) const;

    /** One-application estimate of ||T||: max of ||T x||/||x|| over random
        and resonant-band probes. Scales like 1/tau. */
    double measure_T_apply(int samples = 3) const;

    /** Measured norms of the three mixed operators on random probes. */
    double measure_T1(int samples = 3) const;
    double measure_T2(int samples = 3) const;
    double measure_T3(int samples = 3) const;

    PeriodicField apply_T1_scalar(const PeriodicField& phi, int component) const;
    PeriodicField apply_T3_scalar(const PeriodicField& phi) const;
    void apply_T2_scalar(const PeriodicField& phi, PeriodicField& out1, PeriodicField& out2) const;

   private:
    PeriodicField ptilde_p(const PeriodicField& phi) const;
    void grad_kk(const PeriodicField& phi, PeriodicField& d1, PeriodicField& d2,
                 PeriodicField& kk) const;
    PeriodicField random_field(unsigned seed) const;

    const ElasticMedium medium_;
    CgoParams params_;
    std::shared_ptr<SpectralGrid> grid_;
    SpectralMultiplier mult_s_;
    SpectralMultiplier mult_p_;
    PeriodicField one_minus_rho_;
    PeriodicField grad_rho_1_, grad_rho_2_;  // physical-frame components
    std::vector<cplx> phase_plus_, phase_minus_;  // tapered e^(+-i Phi(x2')) per iy
    std::vector<double> phase_rate_;              // Phi'(x2') per iy
};

/** Converged CGO solution with its diagnostics. */
struct CgoSolution {
    CgoParams params;
    std::shared_ptr<SpectralGrid> grid;  // solver-frame grid
    PeriodicField R1, R2, v;
    int iterations = 0;
    double fixed_point_residual = 0.0;
    double measured_T_norm = 0.0;
    std::vector<double> residual_trace;

    double norm_R() const;        // L2 over D_R1 (disk radius set at solve time)
    double norm_gradR() const;
    double norm_grad2R() const;
    double disk_radius = 0.0;

    /** eta + R at a physical point (bicubic in the solver frame). */
    CVec2 w_at(Vec2 x) const;
    CVec2 R_at(Vec2 x) const;
    cplx v_at(Vec2 x) const;

    /** || e^(-zeta x) div u0 - v || over D_R1, should be <= 10 * solver tol. */
    double divergence_consistency() const;

    void export_json(const std::string& path) const;
};

struct CgoSolveOptions {
    double tol = 1e-10;
    int max_iter = 100;
    double contraction_gate = 0.5;
};

CgoSolution solve_cgo(const ElasticMedium& medium, const CgoParams& params,
                      const HalfShiftLattice& lattice, const CgoSolveOptions& opts = {});

/**
 * Relative L2 residual of L u0 + omega^2 rho u0 over the disk, computed on
 * the phase-stripped field to avoid the e^(tau) dynamic range. Passing
 * zero fields for R, v gives the residual of the bare plane wave.
 */
double navier_residual(const ElasticMedium& medium, const CgoParams& params,
                       const SpectralGrid& grid, const PeriodicField& R1,
                       const PeriodicField& R2, double disk_radius);

/**
 * Modified matrix fundamental solution associated with the CGO phase:
 * Psi_ij = (1/mu) delta_ij h_zeta + (1/omega^2) d_i d_j (h_zeta - h_zeta~),
 * evaluated by windowed lattice sums (unit-free 2R' normalization of the
 * raw series).
 */
class PsiEvaluator {
   public:
    PsiEvaluator(const ElasticMedium& medium, const CgoParams& params,
                 const HalfShiftLattice& lattice, double window_start = 0.55,
                 int window_power = 6);

    CMat2 psi(Vec2 x) const;
    /** h along zeta or zeta~ with second-derivative pair (i, j). */
    cplx h_second(Vec2 x, bool tilde, int i, int j) const;
    cplx h_plain(Vec2 x, bool tilde) const;

   private:
    double window(double abs_alpha) const;
    const ElasticMedium medium_;
    CgoParams params_;
    HalfShiftLattice lattice_;
    double cutoff_, window_start_;
    int window_power_;
};

}  // namespace ewave

#endif
