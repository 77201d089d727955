#ifndef EWAVE_CORNER_HPP
#define EWAVE_CORNER_HPP

#include <string>
#include <vector>

#include "ewave/cgo.hpp"
#include "ewave/forward.hpp"
#include "ewave/geometry.hpp"
#include "ewave/medium.hpp"
#include "ewave/quadrature.hpp"
#include "ewave/source.hpp"

namespace ewave {

/**
 * Trigonometric coefficients of the corner gradient relations. With
 * sigma = theta_M + theta_m and phi = theta_M - theta_m:
 *   A = sin s sin p (1 + 2 cos s cos p)
 *   B = sin p (-2 cos p cos^2 s + cos p + cos s)
 *   C = sin p ( 2 cos p cos^2 s - cos p + cos s)
 *   D = sin s sin p (-1 + 2 cos s cos p)
 * A right corner (0, pi/2) gives (1, 0, 0, -1): the relations collapse to
 * tr grad f = 0 and symmetry of grad f.
 */
struct CornerCoefficients {
    double A, B, C, D;
    double theta_m, theta_M;

    /** L1 = A a + B b - C c - D d for (a,b,c,d) = (d1f1, d2f1, d1f2, d2f2). */
    double relation1(const Mat2& grad) const {
        return A * grad.a + B * grad.b - C * grad.c - D * grad.d;
    }
    /** L2 = C a + D b + A c + B d. */
    double relation2(const Mat2& grad) const {
        return C * grad.a + D * grad.b + A * grad.c + B * grad.d;
    }
};

CornerCoefficients abcd(double theta_m, double theta_M);

/**
 * 2x4 matrix sending (a,b,c,d) to (Re, Im) of the angular moment
 * integral of e^{-3 i theta} g(theta), where
 * g = -i (a cos + b sin) + (c cos + d sin). Built by adaptive quadrature;
 * its null space coincides with that of [[A,B,-C,-D],[C,D,A,B]].
 */
struct MomentMatrix {
    double m[2][4];
};

MomentMatrix moment_matrix(double theta_m, double theta_M, double tol = 1e-13);

/** Moment integral for a concrete gradient. */
cplx moment_integral(double theta_m, double theta_M, const Mat2& grad, double tol = 1e-13);

/** sin of the largest principal angle between the two 2D null spaces. */
double nullspace_distance(const MomentMatrix& m, const CornerCoefficients& c);

/**
 * Laplace tail split: integral over (0, eps) of r^alpha e^{-mu r} equals
 * Gamma(alpha+1)/mu^(alpha+1) minus a remainder bounded by
 * (2/Re mu) e^{-(eps/2) Re mu}, valid for Re mu >= 2 alpha / e.
 */
struct LaplaceTail {
    cplx main;
    double tail_bound;
};

LaplaceTail laplace_tail(double alpha, cplx mu, double eps);

/** Oracle: adaptive quadrature of the finite integral. */
cplx laplace_tail_quadrature(double alpha, cplx mu, double eps, double tol = 1e-13);

/** J(tau) = integral over the sector of f . u0 with the full CGO probe. */
cplx sector_moment(const SourceModel& f, const CgoSolution& cgo, const Sector& sector,
                   const SectorQuadratureSpec& spec = {});

/** Same with the bare plane-wave probe e^{zeta.(x-x0)} eta (R == 0). */
cplx sector_moment_planewave(const SourceModel& f, const CgoParams& params, const Sector& sector,
                             const SectorQuadratureSpec& spec = {});

/**
 * Plane-wave moment with a refinement guard: doubling the radial panels
 * must reproduce the value to rtol, otherwise a runtime error reports
 * quadrature non-convergence.
 */
cplx sector_moment_checked(const SourceModel& f, const CgoParams& params, const Sector& sector,
                           const SectorQuadratureSpec& spec = {}, double rtol = 1e-8);

/**
 * Z(tau) = integral over the sector of e^{zeta.(x-x0)}: radial closed form
 * per angle, Gauss in the angle.
 */
cplx sector_phase_integral(const CgoParams& params, const Sector& sector, int angular_order = 48);

/** Real quadratic displacement field used to manufacture Betti tests. */
struct QuadraticDisplacement {
    Vec2 c{};
    Mat2 L{};
    double q1[3] = {0, 0, 0};  // v1 += q1[0] x^2 + q1[1] x y + q1[2] y^2
    double q2[3] = {0, 0, 0};

    Vec2 value(Vec2 x) const;
    Mat2 jacobian(Vec2 x) const;
    /** L v (constant + linear in x). */
    Vec2 navier(Vec2 x, double lambda, double mu) const;
};

/**
 * Relative gap of the Betti identity
 *   Int_S f.u0 = Int_dS (u0.T_nu v - v.T_nu u0)
 * for f = L v + omega^2 v and the plane-wave CGO probe, homogeneous
 * density. Boundary integrals use per-edge panel Gauss of the given order.
 */
double betti_gap(const QuadraticDisplacement& v, const Sector& sector,
                 const ElasticMedium& medium, const CgoParams& params, int panels,
                 int gauss_order);

/**
 * The arc part of the boundary integral alone. The probe modulus is
 * e^{tau h d.xhat} <= e^{-delta h tau} there, so this term dies
 * exponentially in tau (at most tau e^{-delta h tau}).
 */
cplx betti_arc_term(const QuadraticDisplacement& v, const Sector& sector,
                    const ElasticMedium& medium, const CgoParams& params, int panels,
                    int gauss_order);

struct ExtractionOptions {
    SectorQuadratureSpec quad;
    double probe_margin = 0.1;
    int lattice_N = 64;
    double solver_tol = 1e-10;
};

struct ExtractionResult {
    Vec2 estimate;
    std::vector<double> taus;
    std::vector<Vec2> per_tau;
    bool monotone = true;
};

/**
 * Estimate f(x0) from the ratio J(tau)/Z(tau): the probe polarization is
 * e^{-i theta_d}(-i, 1) up to O(1/tau^2), so e^{i theta_d} J/Z approaches
 * -i f1 + f2; a least-squares fit in 1/tau removes the gradient term.
 * The CGO is built for the density as seen from the apex.
 */
ExtractionResult extract_corner_value(const SourceModel& f, const Sector& sector,
                                      const ElasticMedium& medium,
                                      const std::vector<double>& tau_sweep,
                                      const ExtractionOptions& opts = {});

enum class CornerClass { RadiatingCertified, RelationsSatisfied, Inconclusive };

/**
 * Base tolerances anchor the relations-satisfied set; certification uses
 * certify_scale times the base, so loosening (raising certify_scale) can
 * only move candidates from certified into inconclusive, never into
 * relations-satisfied.
 */
struct CornerTolerances {
    double value_tol;
    double relation_tol;
    double certify_scale = 1.0;
};

struct CornerReport {
    Vec2 apex;
    Vec2 f0;
    Mat2 grad;
    double L1 = 0.0, L2 = 0.0;
    CornerClass cls = CornerClass::Inconclusive;
    CornerCoefficients coeffs{};

    void export_json(const std::string& path) const;
    static std::string class_name(CornerClass c);
};

CornerReport classify_corner(Vec2 apex, Vec2 f0, const Mat2& grad, double theta_m, double theta_M,
                             const CornerTolerances& tol);

struct ScanCandidate {
    Vec2 point;
    Vec2 direction;  // unit, pointing away from the suspected support
    std::string label;
};

struct ScanRow {
    ScanCandidate candidate;
    double score = 0.0;
    double slope_straight = 0.0;   // log-log fit of the straight probe
    double growth_plus = 0.0;      // |I(tau_last)| / |I(tau_first)|, +tilt
    double growth_minus = 0.0;
    double exp_rate = 0.0;         // d ln|I| / d tau of the straight probe
    double exp_r2 = 0.0;
    std::string classification;
    std::vector<double> taus;
    std::vector<double> magnitudes;  // straight probe |I(tau)|
};

struct ScanOptions {
    double tilt_degrees = 45.0;
    double tau_star = 0.0;          // 0: use the largest tau of the sweep
    double growth_gate = 3.0;       // growth above this flags the candidate
    double algebraic_floor = -3.5;  // log-log slope at or above: corner-like
};

/**
 * Betti-duality indicator scan: for each candidate (x0, d) the boundary
 * functional with probe e^{zeta.(x - x0)} eta is evaluated on the Cauchy
 * data over the tau sweep, for the straight direction and two tilted
 * directions. Supported corners show stable algebraic tau^-2 decay;
 * candidates whose half-plane cuts the support blow up exponentially in
 * at least one tilt (flagged, score 0); exterior candidates decay
 * exponentially. Scores are tau*^2 |I(tau*)|, ranked descending.
 */
std::vector<ScanRow> corner_scan(const CauchyData& data, const ElasticMedium& medium,
                                 const std::vector<ScanCandidate>& candidates,
                                 const std::vector<double>& tau_sweep,
                                 const ScanOptions& opts = {});

void export_scan_csv(const std::vector<ScanRow>& rows, const std::string& path);

/** Boundary Betti functional of a single probe against the Cauchy data. */
cplx scan_indicator(const CauchyData& data, const ElasticMedium& medium, Vec2 x0, Vec2 d,
                    double tau);

}  // namespace ewave

#endif
