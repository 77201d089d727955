#include "ewave/corner.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "json.hpp"

namespace ewave {

namespace {
constexpr double pi = std::numbers::pi;
}

CornerCoefficients abcd(double theta_m, double theta_M) {
    const double phi = theta_M - theta_m;
    if (!(phi > 0.0 && phi < pi))
        throw std::invalid_argument("abcd: opening must lie in (0, pi)");
    const double s = theta_M + theta_m;
    const double ss = std::sin(s), cs = std::cos(s);
    const double sp = std::sin(phi), cp = std::cos(phi);
    CornerCoefficients out;
    out.A = ss * sp * (1.0 + 2.0 * cs * cp);
    out.B = sp * (-2.0 * cp * cs * cs + cp + cs);
    out.C = sp * (2.0 * cp * cs * cs - cp + cs);
    out.D = ss * sp * (-1.0 + 2.0 * cs * cp);
    out.theta_m = theta_m;
    out.theta_M = theta_M;
    return out;
}

MomentMatrix moment_matrix(double theta_m, double theta_M, double tol) {
    if (!(theta_M - theta_m > 0.0 && theta_M - theta_m < pi))
        throw std::invalid_argument("moment_matrix: opening must lie in (0, pi)");
    MomentMatrix out;
    for (int col = 0; col < 4; ++col) {
        auto basis = [col](double t) -> cplx {
            switch (col) {
                case 0: return -I * std::cos(t);
                case 1: return -I * std::sin(t);
                case 2: return std::cos(t);
                default: return std::sin(t);
            }
        };
        const cplx val = integrate_adaptive(
            [&](double t) { return std::exp(cplx{0.0, -3.0 * t}) * basis(t); }, theta_m, theta_M,
            tol);
        out.m[0][col] = val.real();
        out.m[1][col] = val.imag();
    }
    return out;
}

cplx moment_integral(double theta_m, double theta_M, const Mat2& grad, double tol) {
    return integrate_adaptive(
        [&](double t) {
            const double c = std::cos(t), s = std::sin(t);
            const cplx g = -I * (grad.a * c + grad.b * s) + (grad.c * c + grad.d * s);
            return std::exp(cplx{0.0, -3.0 * t}) * g;
        },
        theta_m, theta_M, tol);
}

double nullspace_distance(const MomentMatrix& m, const CornerCoefficients& c) {
    Eigen::Matrix<double, 2, 4> A, B;
    for (int j = 0; j < 4; ++j) {
        A(0, j) = m.m[0][j];
        A(1, j) = m.m[1][j];
    }
    B << c.A, c.B, -c.C, -c.D, c.C, c.D, c.A, c.B;
    Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>> svdA(A, Eigen::ComputeFullV);
    Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>> svdB(B, Eigen::ComputeFullV);
    // generically rank 2; degenerate angle pairs are logged, not fatal
    if (svdA.singularValues()(1) <= 1e-12 * svdA.singularValues()(0) ||
        svdB.singularValues()(1) <= 1e-12 * svdB.singularValues()(0))
        std::fprintf(stderr, "nullspace_distance: rank drop at theta_m=%g theta_M=%g\n",
                     c.theta_m, c.theta_M);
    const Eigen::Matrix<double, 4, 2> NA = svdA.matrixV().rightCols(2);
    const Eigen::Matrix<double, 4, 2> NB = svdB.matrixV().rightCols(2);
    // sin of the largest principal angle, formed directly from the
    // projected residual so tiny angles are not lost to cancellation
    const Eigen::Matrix<double, 4, 2> P = NA - NB * (NB.transpose() * NA);
    Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>> sv(P);
    return sv.singularValues()(0);
}

LaplaceTail laplace_tail(double alpha, cplx mu, double eps) {
    if (!(alpha > 0.0)) throw std::invalid_argument("laplace_tail: alpha must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("laplace_tail: eps must be positive");
    if (!(mu.real() >= 2.0 * alpha / std::numbers::e))
        throw std::invalid_argument("laplace_tail: requires Re mu >= 2 alpha / e");
    LaplaceTail out;
    out.main = std::tgamma(alpha + 1.0) / std::pow(mu, alpha + 1.0);
    out.tail_bound = 2.0 / mu.real() * std::exp(-0.5 * eps * mu.real());
    return out;
}

cplx laplace_tail_quadrature(double alpha, cplx mu, double eps, double tol) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double re = integrator.integrate(
        [&](double r) { return std::pow(r, alpha) * (std::exp(-mu * r)).real(); }, 0.0, eps, tol);
    const double im = integrator.integrate(
        [&](double r) { return std::pow(r, alpha) * (std::exp(-mu * r)).imag(); }, 0.0, eps, tol);
    return {re, im};
}

cplx sector_moment(const SourceModel& f, const CgoSolution& cgo, const Sector& sector,
                   const SectorQuadratureSpec& spec) {
    const Vec2 apex = sector.apex;
    return integrate_sector(sector, spec, [&](Vec2 x) -> cplx {
        const Vec2 fv = f.value(x);
        if (fv.x == 0.0 && fv.y == 0.0) return 0.0;
        const Vec2 y = x - apex;
        const CVec2 w = cgo.w_at(y);
        return cgo.params.phase(y) * (fv.x * w.x + fv.y * w.y);
    });
}

cplx sector_moment_planewave(const SourceModel& f, const CgoParams& params, const Sector& sector,
                             const SectorQuadratureSpec& spec) {
    const Vec2 apex = sector.apex;
    return integrate_sector(sector, spec, [&](Vec2 x) -> cplx {
        const Vec2 fv = f.value(x);
        if (fv.x == 0.0 && fv.y == 0.0) return 0.0;
        const Vec2 y = x - apex;
        return params.phase(y) * (fv.x * params.eta.x + fv.y * params.eta.y);
    });
}

cplx sector_moment_checked(const SourceModel& f, const CgoParams& params, const Sector& sector,
                           const SectorQuadratureSpec& spec, double rtol) {
    const cplx coarse = sector_moment_planewave(f, params, sector, spec);
    SectorQuadratureSpec fine = spec;
    fine.radial_panels = 2 * spec.radial_panels;
    const cplx refined = sector_moment_planewave(f, params, sector, fine);
    const double scale = std::max(std::abs(refined), 1e-300);
    if (std::abs(refined - coarse) > rtol * scale)
        throw std::runtime_error("sector_moment: quadrature not converged under panel doubling");
    return refined;
}

cplx sector_phase_integral(const CgoParams& params, const Sector& sector, int angular_order) {
    const GaussRule ang = gauss_rule(angular_order, sector.theta_m, sector.theta_M);
    const double h = sector.h;
    cplx acc = 0.0;
    for (int i = 0; i < angular_order; ++i) {
        const Vec2 xh = unit_vector(ang.nodes[i]);
        const cplx c = params.zeta.dot(xh);
        // int_0^h r e^{c r} dr = (e^{c h}(c h - 1) + 1)/c^2
        const cplx inner = (std::exp(c * h) * (c * h - 1.0) + 1.0) / (c * c);
        acc += ang.weights[i] * inner;
    }
    return acc;
}

Vec2 QuadraticDisplacement::value(Vec2 x) const {
    return {c.x + L.a * x.x + L.b * x.y + q1[0] * x.x * x.x + q1[1] * x.x * x.y + q1[2] * x.y * x.y,
            c.y + L.c * x.x + L.d * x.y + q2[0] * x.x * x.x + q2[1] * x.x * x.y + q2[2] * x.y * x.y};
}

Mat2 QuadraticDisplacement::jacobian(Vec2 x) const {
    return {L.a + 2 * q1[0] * x.x + q1[1] * x.y, L.b + q1[1] * x.x + 2 * q1[2] * x.y,
            L.c + 2 * q2[0] * x.x + q2[1] * x.y, L.d + q2[1] * x.x + 2 * q2[2] * x.y};
}

Vec2 QuadraticDisplacement::navier(Vec2, double lambda, double mu) const {
    const Vec2 lap{2.0 * (q1[0] + q1[2]), 2.0 * (q2[0] + q2[2])};
    const Vec2 gdiv{2.0 * q1[0] + q2[1], q1[1] + 2.0 * q2[2]};
    return mu * lap + (lambda + mu) * gdiv;
}

namespace {

CVec2 traction_planewave(const CgoParams& p, double mu, Vec2 y, Vec2 nu) {
    const cplx ph = p.phase(y);
    const cplx zn = p.zeta.dot(nu);
    const cplx en = p.eta.dot(nu);
    return {mu * ph * (p.eta.x * zn + p.zeta.x * en), mu * ph * (p.eta.y * zn + p.zeta.y * en)};
}

// u0 . T_nu(v) - v . T_nu(u0) at a boundary point, plane-wave probe
cplx boundary_integrand(const QuadraticDisplacement& v, const ElasticMedium& medium,
                        const CgoParams& params, Vec2 apex, Vec2 x, Vec2 nu) {
    const double lambda = medium.lambda, mu = medium.mu;
    const Vec2 y = x - apex;
    const cplx ph = params.phase(y);
    const CVec2 u0{ph * params.eta.x, ph * params.eta.y};
    const Mat2 J = v.jacobian(x);
    const double div = J.a + J.d;
    const Vec2 tv{lambda * div * nu.x + mu * (2 * J.a * nu.x + (J.b + J.c) * nu.y),
                  lambda * div * nu.y + mu * ((J.c + J.b) * nu.x + 2 * J.d * nu.y)};
    const CVec2 tu0 = traction_planewave(params, mu, y, nu);
    const Vec2 vv = v.value(x);
    return u0.dot(tv) - tu0.dot(vv);
}

}  // namespace

cplx betti_arc_term(const QuadraticDisplacement& v, const Sector& sector,
                    const ElasticMedium& medium, const CgoParams& params, int panels,
                    int gauss_order) {
    if (medium.rho.kind() != DensityProfile::Kind::ConstantOne)
        throw std::invalid_argument("betti_arc_term: plane-wave probe requires rho == 1");
    cplx acc = 0.0;
    const double open = sector.opening();
    for (int p = 0; p < panels; ++p) {
        const GaussRule g = gauss_rule(gauss_order, sector.theta_m + open * p / panels,
                                       sector.theta_m + open * (p + 1) / panels);
        for (int i = 0; i < gauss_order; ++i) {
            const Vec2 xh = unit_vector(g.nodes[i]);
            acc += g.weights[i] * sector.h *
                   boundary_integrand(v, medium, params, sector.apex,
                                      sector.apex + sector.h * xh, xh);
        }
    }
    return acc;
}

double betti_gap(const QuadraticDisplacement& v, const Sector& sector,
                 const ElasticMedium& medium, const CgoParams& params, int panels,
                 int gauss_order) {
    if (medium.rho.kind() != DensityProfile::Kind::ConstantOne)
        throw std::invalid_argument("betti_gap: plane-wave probe requires rho == 1");
    const double lambda = medium.lambda, mu = medium.mu;
    const double om2 = medium.omega * medium.omega;
    const Vec2 apex = sector.apex;

    // Volume side with a generously accurate sector rule.
    SectorQuadratureSpec spec;
    spec.radial_panels = 14;
    spec.radial_order = 14;
    spec.angular_order = 32;
    const cplx lhs = integrate_sector(sector, spec, [&](Vec2 x) -> cplx {
        const Vec2 fv = v.navier(x, lambda, mu) + om2 * v.value(x);
        const Vec2 y = x - apex;
        const cplx ph = params.phase(y);
        return ph * (fv.x * params.eta.x + fv.y * params.eta.y);
    });

    auto edge_term = [&](Vec2 x, Vec2 nu) -> cplx {
        return boundary_integrand(v, medium, params, apex, x, nu);
    };

    cplx rhs = 0.0;
    {
        // radial edge at theta_m; outward normal turns clockwise off the sector
        const Vec2 dir = unit_vector(sector.theta_m);
        const Vec2 nu{std::sin(sector.theta_m), -std::cos(sector.theta_m)};
        for (int p = 0; p < panels; ++p) {
            const GaussRule g = gauss_rule(gauss_order, sector.h * p / panels,
                                           sector.h * (p + 1) / panels);
            for (int i = 0; i < gauss_order; ++i)
                rhs += g.weights[i] * edge_term(apex + g.nodes[i] * dir, nu);
        }
    }
    {
        const Vec2 dir = unit_vector(sector.theta_M);
        const Vec2 nu{-std::sin(sector.theta_M), std::cos(sector.theta_M)};
        for (int p = 0; p < panels; ++p) {
            const GaussRule g = gauss_rule(gauss_order, sector.h * p / panels,
                                           sector.h * (p + 1) / panels);
            for (int i = 0; i < gauss_order; ++i)
                rhs += g.weights[i] * edge_term(apex + g.nodes[i] * dir, nu);
        }
    }
    rhs += betti_arc_term(v, sector, medium, params, panels, gauss_order);

    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return std::abs(lhs - rhs) / scale;
}

ExtractionResult extract_corner_value(const SourceModel& f, const Sector& sector,
                                      const ElasticMedium& medium,
                                      const std::vector<double>& tau_sweep,
                                      const ExtractionOptions& opts) {
    const ProbeDirection probe = choose_probe_direction(sector, opts.probe_margin);
    const bool homogeneous = medium.rho.kind() == DensityProfile::Kind::ConstantOne;

    ExtractionResult out;
    out.taus = tau_sweep;
    for (double tau : tau_sweep) {
        CgoParams params = make_cgo_params(medium, probe, tau);
        cplx J;
        if (homogeneous) {
            J = sector_moment_planewave(f, params, sector, opts.quad);
        } else {
            // Build the CGO for the density as seen from the apex.
            const double r1 = medium.rho.support_radius() + sector.apex.norm() + 0.05;
            const double rp = 1.25 * std::max(r1, sector.h + 0.05);
            ElasticMedium shifted(medium.lambda, medium.mu, medium.omega,
                                  medium.rho.shifted(sector.apex));
            HalfShiftLattice lattice(rp, opts.lattice_N);
            CgoSolveOptions sopts;
            sopts.tol = opts.solver_tol;
            CgoSolution sol = solve_cgo(shifted, params, lattice, sopts);
            Sector local(Vec2{0.0, 0.0}, sector.theta_m, sector.theta_M, sector.h);
            const Vec2 apex = sector.apex;
            J = integrate_sector(local, opts.quad, [&](Vec2 y) -> cplx {
                const Vec2 fv = f.value(apex + y);
                if (fv.x == 0.0 && fv.y == 0.0) return 0.0;
                const CVec2 w = sol.w_at(y);
                return params.phase(y) * (fv.x * w.x + fv.y * w.y);
            });
        }
        const cplx Z = sector_phase_integral(params, sector);
        const cplx m = J / Z;
        const cplx e = std::exp(cplx{0.0, probe.theta_d}) * m;
        out.per_tau.push_back({-e.imag(), e.real()});
    }

    // Least squares fit est(tau) = f_inf + c / tau per component.
    const std::size_t n = tau_sweep.size();
    auto fit = [&](auto comp) {
        double s11 = n, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = 1.0 / tau_sweep[i];
            s12 += w;
            s22 += w * w;
            b1 += comp(out.per_tau[i]);
            b2 += w * comp(out.per_tau[i]);
        }
        const double det = s11 * s22 - s12 * s12;
        return (s22 * b1 - s12 * b2) / det;
    };
    if (n >= 2) {
        out.estimate = {fit([](Vec2 v) { return v.x; }), fit([](Vec2 v) { return v.y; })};
    } else if (n == 1) {
        out.estimate = out.per_tau[0];
    }

    // Monotone approach to the fitted limit (20% slack).
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double d0 = (out.per_tau[i] - out.estimate).norm();
        const double d1 = (out.per_tau[i + 1] - out.estimate).norm();
        if (d1 > 1.3 * d0 + 1e-12) out.monotone = false;
    }
    return out;
}

CornerReport classify_corner(Vec2 apex, Vec2 f0, const Mat2& grad, double theta_m, double theta_M,
                             const CornerTolerances& tol) {
    if (!(tol.value_tol > 0.0 && tol.relation_tol > 0.0 && tol.certify_scale >= 1.0))
        throw std::invalid_argument("classify_corner: tolerances must be positive, scale >= 1");
    CornerReport r;
    r.apex = apex;
    r.f0 = f0;
    r.grad = grad;
    r.coeffs = abcd(theta_m, theta_M);
    r.L1 = r.coeffs.relation1(grad);
    r.L2 = r.coeffs.relation2(grad);
    const double fmag = f0.norm();
    const bool over_hi = fmag > tol.certify_scale * tol.value_tol ||
                         std::abs(r.L1) > tol.certify_scale * tol.relation_tol ||
                         std::abs(r.L2) > tol.certify_scale * tol.relation_tol;
    const bool under_lo = fmag <= tol.value_tol && std::abs(r.L1) <= tol.relation_tol &&
                          std::abs(r.L2) <= tol.relation_tol;
    r.cls = over_hi ? CornerClass::RadiatingCertified
                    : (under_lo ? CornerClass::RelationsSatisfied : CornerClass::Inconclusive);
    return r;
}

std::string CornerReport::class_name(CornerClass c) {
    switch (c) {
        case CornerClass::RadiatingCertified: return "radiating-certified";
        case CornerClass::RelationsSatisfied: return "relations-satisfied";
        default: return "inconclusive";
    }
}

void CornerReport::export_json(const std::string& path) const {
    nlohmann::json j;
    j["apex"] = {apex.x, apex.y};
    j["f0"] = {f0.x, f0.y};
    j["grad"] = {{grad.a, grad.b}, {grad.c, grad.d}};
    j["L1"] = L1;
    j["L2"] = L2;
    j["A"] = coeffs.A;
    j["B"] = coeffs.B;
    j["C"] = coeffs.C;
    j["D"] = coeffs.D;
    j["classification"] = class_name(cls);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("CornerReport: cannot open " + path);
    out << j.dump(2) << "\n";
}

cplx scan_indicator(const CauchyData& data, const ElasticMedium& medium, Vec2 x0, Vec2 d,
                    double tau) {
    const ProbeDirection probe = probe_from_angle(std::atan2(d.y, d.x), 0.0);
    const CgoParams params = make_cgo_params(medium, probe, tau);
    const double mu = medium.mu;
    const std::size_t n = data.angles.size();
    const double w = 2.0 * pi * data.radius / n;  // uniform trapezoid
    cplx acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 x = data.radius * unit_vector(data.angles[i]);
        const Vec2 nu = unit_vector(data.angles[i]);
        const Vec2 y = x - x0;
        const cplx ph = params.phase(y);
        const CVec2 u0{ph * params.eta.x, ph * params.eta.y};
        const cplx zn = params.zeta.dot(nu);
        const cplx en = params.eta.dot(nu);
        const CVec2 tu0{mu * ph * (params.eta.x * zn + params.zeta.x * en),
                        mu * ph * (params.eta.y * zn + params.zeta.y * en)};
        acc += w * (u0.dot(data.traction[i]) - tu0.dot(data.u[i]));
    }
    return acc;
}

std::vector<ScanRow> corner_scan(const CauchyData& data, const ElasticMedium& medium,
                                 const std::vector<ScanCandidate>& candidates,
                                 const std::vector<double>& tau_sweep, const ScanOptions& opts) {
    if (tau_sweep.size() < 2) throw std::invalid_argument("corner_scan: need at least two taus");
    const double tilt = opts.tilt_degrees * pi / 180.0;
    const double tau_star = opts.tau_star > 0.0 ? opts.tau_star : tau_sweep.back();

    std::vector<ScanRow> rows;
    rows.reserve(candidates.size());
    for (const auto& cand : candidates) {
        ScanRow row;
        row.candidate = cand;
        row.taus = tau_sweep;

        auto sweep = [&](double angle_offset) {
            const double base = std::atan2(cand.direction.y, cand.direction.x);
            const Vec2 d = unit_vector(base + angle_offset);
            std::vector<double> mags;
            mags.reserve(tau_sweep.size());
            for (double tau : tau_sweep)
                mags.push_back(std::abs(scan_indicator(data, medium, cand.point, d, tau)));
            return mags;
        };

        row.magnitudes = sweep(0.0);
        const std::vector<double> mp = sweep(tilt);
        const std::vector<double> mm = sweep(-tilt);

        row.slope_straight = loglog_slope(tau_sweep, row.magnitudes);
        const double eps = 1e-300;
        row.growth_plus = mp.back() / std::max(mp.front(), eps);
        row.growth_minus = mm.back() / std::max(mm.front(), eps);
        std::vector<double> lnmag;
        for (double m : row.magnitudes) lnmag.push_back(std::log(std::max(m, eps)));
        const LinearFit ef = linear_fit(tau_sweep, lnmag);
        row.exp_rate = ef.slope;
        row.exp_r2 = ef.r2;

        double istar = 0.0;
        {
            const Vec2 d = cand.direction;
            istar = std::abs(scan_indicator(data, medium, cand.point, d, tau_star));
        }

        const bool grows = row.growth_plus > opts.growth_gate ||
                           row.growth_minus > opts.growth_gate ||
                           row.magnitudes.back() > opts.growth_gate * row.magnitudes.front();
        if (grows) {
            row.classification = "overlapping";
            row.score = 0.0;
        } else if (row.slope_straight >= opts.algebraic_floor) {
            row.classification = "corner";
            row.score = tau_star * tau_star * istar;
        } else {
            row.classification = "exterior";
            row.score = tau_star * tau_star * istar;
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ScanRow& a, const ScanRow& b) { return a.score > b.score; });
    return rows;
}

void export_scan_csv(const std::vector<ScanRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_scan_csv: cannot open " + path);
    out << "label,x,y,dx,dy,score,slope,growth_plus,growth_minus,exp_rate,exp_r2,class";
    if (!rows.empty())
        for (std::size_t i = 0; i < rows.front().taus.size(); ++i)
            out << ",mag_tau" << rows.front().taus[i];
    out << "\n";
    char buf[64];
    for (const auto& r : rows) {
        out << r.candidate.label;
        const double vals[] = {r.candidate.point.x, r.candidate.point.y, r.candidate.direction.x,
                               r.candidate.direction.y, r.score, r.slope_straight, r.growth_plus,
                               r.growth_minus, r.exp_rate, r.exp_r2};
        for (double v : vals) {
            std::snprintf(buf, sizeof(buf), ",%.17g", v);
            out << buf;
        }
        out << "," << r.classification;
        for (double m : r.magnitudes) {
            std::snprintf(buf, sizeof(buf), ",%.17g", m);
            out << buf;
        }
        out << "\n";
    }
}

}  // namespace ewave
