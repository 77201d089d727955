#include "ewave/cgo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "json.hpp"

namespace ewave {

namespace {

double iterate_norm(const CgoIterate& it, double cell_area) {
    const double a = it.R1.l2(cell_area), b = it.R2.l2(cell_area), c = it.v.l2(cell_area);
    return std::sqrt(a * a + b * b + c * c);
}

}  // namespace

cplx CgoParams::phase(Vec2 x) const {
    const double root = std::sqrt(tau * tau + ks * ks);
    return std::exp(cplx{tau * probe.d.dot(x), root * probe.d_perp.dot(x)});
}

CgoParams make_cgo_params(const ElasticMedium& medium, const ProbeDirection& probe, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("make_cgo_params: tau must be positive");
    CgoParams p;
    p.tau = tau;
    p.probe = probe;
    p.kp = medium.kp();
    p.ks = medium.ks();
    const double root_s = std::sqrt(tau * tau + p.ks * p.ks);
    const double root_p = std::sqrt(tau * tau + p.kp * p.kp);
    const Vec2 d = probe.d, dp = probe.d_perp;
    p.zeta = CVec2{cplx{tau * d.x, root_s * dp.x}, cplx{tau * d.y, root_s * dp.y}};
    p.zeta_tilde = CVec2{cplx{tau * d.x, root_p * dp.x}, cplx{tau * d.y, root_p * dp.y}};
    const double es = std::sqrt(1.0 + p.ks * p.ks / (tau * tau));
    p.eta = CVec2{cplx{dp.x, -es * d.x}, cplx{dp.y, -es * d.y}};
    // x' = Q x maps d -> -e1 and d_perp -> e2, so zeta = Q^T xi with
    // xi = (-tau, i root_s). Q is orthogonal (a reflection for the
    // right-handed d_perp convention).
    p.Q = Mat2{-d.x, -d.y, dp.x, dp.y};
    p.kappa = root_p - root_s;
    p.xi_gap = std::abs(root_p - root_s);
    return p;
}

CgoOperators::CgoOperators(const ElasticMedium& medium, const CgoParams& params,
                           const HalfShiftLattice& lattice, double taper_start)
    : medium_(medium),
      params_(params),
      grid_(std::make_shared<SpectralGrid>(lattice)),
      mult_s_(lattice, params.tau, medium.ks()),
      mult_p_(lattice, params.tau, medium.kp()) {
    const int M = grid_->M();
    one_minus_rho_ = grid_->make_field();
    grad_rho_1_ = grid_->make_field();
    grad_rho_2_ = grid_->make_field();
    for (int iy = 0; iy < M; ++iy)
        for (int ix = 0; ix < M; ++ix) {
            const Vec2 xp{grid_->coord(ix), grid_->coord(iy)};
            const Vec2 x = params_.from_frame(xp);
            one_minus_rho_.at(ix, iy) = 1.0 - medium_.rho.value(x);
            const Vec2 g = medium_.rho.gradient(x);
            grad_rho_1_.at(ix, iy) = g.x;
            grad_rho_2_.at(ix, iy) = g.y;
        }
    // Phase Phi(x2') = kappa x2' s(t): quintic blend s from 1 to 0 across
    // [taper_start R', R'] makes e^(i Phi) periodic while leaving it exact
    // on the inner region.
    phase_plus_.resize(M);
    phase_minus_.resize(M);
    phase_rate_.resize(M);
    const double Rp = grid_->R_prime();
    const double t0 = taper_start * Rp;
    for (int iy = 0; iy < M; ++iy) {
        const double x2 = grid_->coord(iy);
        double phi, rate;
        const double ax = std::abs(x2);
        if (ax <= t0) {
            phi = params_.kappa * x2;
            rate = params_.kappa;
        } else {
            const double t = (ax - t0) / (Rp - t0);
            const double s = 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
            const double ds = -30.0 * t * t * (1.0 - t) * (1.0 - t) / (Rp - t0);
            phi = params_.kappa * x2 * s;
            rate = params_.kappa * (s + x2 * (x2 > 0 ? ds : -ds));
        }
        phase_plus_[iy] = std::exp(cplx{0.0, phi});
        phase_minus_[iy] = std::conj(phase_plus_[iy]);
        phase_rate_[iy] = rate;
    }
}

CgoIterate CgoOperators::zero_iterate() const {
    return {grid_->make_field(), grid_->make_field(), grid_->make_field()};
}

PeriodicField CgoOperators::ptilde_p(const PeriodicField& phi) const {
    const int M = grid_->M();
    PeriodicField u = grid_->make_field();
    for (int iy = 0; iy < M; ++iy)
        for (int ix = 0; ix < M; ++ix) u.at(ix, iy) = phase_minus_[iy] * phi.at(ix, iy);
    PeriodicField out = apply_P(*grid_, mult_p_, u);
    for (int iy = 0; iy < M; ++iy)
        for (int ix = 0; ix < M; ++ix) out.at(ix, iy) *= phase_plus_[iy];
    return out;
}

// kk = (P_s - e^{i kappa x2} P_p e^{-i kappa y2}) phi, with its solver-frame
// gradient; shares the two analysis transforms between all outputs.
void CgoOperators::grad_kk(const PeriodicField& phi, PeriodicField& d1, PeriodicField& d2,
                           PeriodicField& kk) const {
    const int M = grid_->M();
    PeriodicField u = grid_->make_field();
    for (int iy = 0; iy < M; ++iy)
        for (int ix = 0; ix < M; ++ix) u.at(ix, iy) = phase_minus_[iy] * phi.at(ix, iy);

    std::vector<cplx> cu, cphi;
    grid_->to_coeffs(u, cu);
    grid_->to_coeffs(phi, cphi);

    auto synth = [&](const std::vector<cplx>& base, const SpectralMultiplier& m, int deriv,
                     PeriodicField& out) {
        std::vector<cplx> c(base.size());
        const auto& mv = m.values();
        for (int ky = 0; ky < M; ++ky)
            for (int kx = 0; kx < M; ++kx) {
                const std::size_t i = static_cast<std::size_t>(ky) * M + kx;
                cplx f = base[i] * mv[i];
                if (deriv == 1) f *= cplx{0.0, grid_->alpha1_of_bin(kx)};
                if (deriv == 2) f *= cplx{0.0, grid_->alpha2_of_bin(ky)};
                c[i] = f;
            }
        grid_->to_samples(c, out);
    };

    PeriodicField pp = grid_->make_field(), pp1 = grid_->make_field(), pp2 = grid_->make_field();
    PeriodicField ps = grid_->make_field(), ps1 = grid_->make_field(), ps2 = grid_->make_field();
    synth(cu, mult_p_, 0, pp);
    synth(cu, mult_p_, 1, pp1);
    synth(cu, mult_p_, 2, pp2);
    synth(cphi, mult_s_, 0, ps);
    synth(cphi, mult_s_, 1, ps1);
    synth(cphi, mult_s_, 2, ps2);

    kk = grid_->make_field();
    d1 = grid_->make_field();
    d2 = grid_->make_field();
    for (int iy = 0; iy < M; ++iy) {
        const cplx irate{0.0, phase_rate_[iy]};
        for (int ix = 0; ix < M; ++ix) {
            const cplx ph = phase_plus_[iy];
            kk.at(ix, iy) = ps.at(ix, iy) - ph * pp.at(ix, iy);
            d1.at(ix, iy) = ps1.at(ix, iy) - ph * pp1.at(ix, iy);
            d2.at(ix, iy) = ps2.at(ix, iy) - ph * (pp2.at(ix, iy) + irate * pp.at(ix, iy));
        }
    }
}

PeriodicField CgoOperators::apply_T1_scalar(const PeriodicField& phi, int component) const {
    PeriodicField d1, d2, kk;
    grad_kk(phi, d1, d2, kk);
    const cplx z = component == 0 ? params_.zeta.x : params_.zeta.y;
    for (auto& v : kk.v) v *= -z;
    return kk;
}

void CgoOperators::apply_T2_scalar(const PeriodicField& phi, PeriodicField& out1,
                                   PeriodicField& out2) const {
    PeriodicField d1, d2, kk;
    grad_kk(phi, d1, d2, kk);
    const Mat2 Qt = params_.Q.transpose();
    out1 = grid_->make_field();
    out2 = grid_->make_field();
    for (std::size_t i = 0; i < kk.v.size(); ++i) {
        out1.v[i] = -(Qt.a * d1.v[i] + Qt.b * d2.v[i]);
        out2.v[i] = -(Qt.c * d1.v[i] + Qt.d * d2.v[i]);
    }
}

PeriodicField CgoOperators::apply_T3_scalar(const PeriodicField& phi) const {
    PeriodicField out = ptilde_p(phi);
    const double kp2 = medium_.kp() * medium_.kp();
    for (auto& v : out.v) v *= -kp2;
    return out;
}

CgoIterate CgoOperators::apply_T(const CgoIterate& in) const {
    const int M = grid_->M();
    const double om2mu = medium_.omega * medium_.omega / medium_.mu;
    const double kp2 = medium_.kp() * medium_.kp();

    PeriodicField psi = grid_->make_field(), w1 = grid_->make_field(), w2 = grid_->make_field();
    for (int iy = 0; iy < M; ++iy)
        for (int ix = 0; ix < M; ++ix) {
            const cplx om_rho = one_minus_rho_.at(ix, iy);
            const cplx r1 = in.R1.at(ix, iy), r2 = in.R2.at(ix, iy);
            psi.at(ix, iy) = om_rho * in.v.at(ix, iy) -
                             (grad_rho_1_.at(ix, iy) * r1 + grad_rho_2_.at(ix, iy) * r2);
            w1.at(ix, iy) = om_rho * r1;
            w2.at(ix, iy) = om_rho * r2;
        }

    PeriodicField d1, d2, kk;
    grad_kk(psi, d1, d2, kk);
    PeriodicField psw1 = apply_P(*grid_, mult_s_, w1);
    PeriodicField psw2 = apply_P(*grid_, mult_s_, w2);
    PeriodicField t3 = ptilde_p(psi);

    const Mat2 Qt = params_.Q.transpose();
    CgoIterate out = zero_iterate();
    for (std::size_t i = 0; i < psi.v.size(); ++i) {
        const cplx gx1 = Qt.a * d1.v[i] + Qt.b * d2.v[i];
        const cplx gx2 = Qt.c * d1.v[i] + Qt.d * d2.v[i];
        out.R1.v[i] = -om2mu * psw1.v[i] - params_.zeta.x * kk.v[i] - gx1;
        out.R2.v[i] = -om2mu * psw2.v[i] - params_.zeta.y * kk.v[i] - gx2;
        out.v.v[i] = -kp2 * t3.v[i];
    }
    return out;
}

CgoIterate CgoOperators::step(const CgoIterate& in) const {
    // Same assembly with eta added to R inside the density factors; this
    // realizes S(eta) + T(in) in one pass.
    CgoIterate shifted{in.R1, in.R2, in.v};
    for (std::size_t i = 0; i < shifted.R1.v.size(); ++i) {
        shifted.R1.v[i] += params_.eta.x;
        shifted.R2.v[i] += params_.eta.y;
    }
    return apply_T(shifted);
}

CgoIterate CgoOperators::s_of_eta() const { return step(zero_iterate()); }

PeriodicField CgoOperators::random_field(unsigned seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    PeriodicField f = grid_->make_field();
    for (auto& v : f.v) v = cplx{gauss(rng), gauss(rng)};
    return f;
}

double CgoOperators::measure_T_norm(int iterations) const {
    CgoIterate it{random_field(12345), random_field(23456), random_field(34567)};
    const double area = grid_->cell_area();
    double ratio = 0.0;
    double n0 = iterate_norm(it, area);
    for (int k = 0; k < iterations; ++k) {
        CgoIterate next = apply_T(it);
        const double n1 = iterate_norm(next, area);
        ratio = n1 / n0;
        if (n1 == 0.0) return 0.0;
        const double inv = 1.0 / n1;
        for (auto& v : next.R1.v) v *= inv;
        for (auto& v : next.R2.v) v *= inv;
        for (auto& v : next.v.v) v *= inv;
        it = std::move(next);
        n0 = 1.0;
    }
    return ratio;
}

namespace {

// Single spectral mode selected by a weight on the multiplier table; random
// probes alone only sample the mean response, the sup lives on the
// resonant band.
PeriodicField peak_mode(const SpectralGrid& grid, const SpectralMultiplier& mult,
                        bool weight_by_alpha) {
    const int M = grid.M();
    const auto& c = mult.values();
    std::size_t best = 0;
    double best_val = -1.0;
    for (int ky = 0; ky < M; ++ky)
        for (int kx = 0; kx < M; ++kx) {
            const std::size_t i = static_cast<std::size_t>(ky) * M + kx;
            const double a = std::hypot(grid.alpha1_of_bin(kx), grid.alpha2_of_bin(ky));
            const double v = std::abs(c[i]) * (weight_by_alpha ? a : 1.0);
            if (v > best_val) {
                best_val = v;
                best = i;
            }
        }
    std::vector<cplx> coeffs(c.size(), cplx{0.0, 0.0});
    coeffs[best] = 1.0;
    PeriodicField f = grid.make_field();
    grid.to_samples(coeffs, f);
    return f;
}

}  // namespace

double CgoOperators::measure_T_apply(int samples) const {
    const double area = grid_->cell_area();
    double worst = 0.0;
    auto probe = [&](PeriodicField&& f, int slot) {
        CgoIterate in = zero_iterate();
        if (slot == 0) in.R1 = std::move(f);
        else if (slot == 1) in.R2 = std::move(f);
        else in.v = std::move(f);
        const double nin = iterate_norm(in, area);
        const CgoIterate out = apply_T(in);
        worst = std::max(worst, iterate_norm(out, area) / nin);
    };
    for (int s = 0; s < samples; ++s) probe(random_field(4000 + s), s % 3);
    probe(peak_mode(*grid_, mult_s_, false), 0);
    probe(peak_mode(*grid_, mult_p_, false), 2);
    return worst;
}

double CgoOperators::measure_T1(int samples) const {
    const double area = grid_->cell_area();
    double worst = 0.0;
    auto probe = [&](const PeriodicField& phi) {
        const double nin = phi.l2(area);
        PeriodicField a = apply_T1_scalar(phi, 0);
        PeriodicField b = apply_T1_scalar(phi, 1);
        const double na = a.l2(area), nb = b.l2(area);
        worst = std::max(worst, std::sqrt(na * na + nb * nb) / nin);
    };
    for (int s = 0; s < samples; ++s) probe(random_field(1000 + s));
    probe(peak_mode(*grid_, mult_s_, false));
    probe(peak_mode(*grid_, mult_p_, false));
    return worst;
}

double CgoOperators::measure_T2(int samples) const {
    const double area = grid_->cell_area();
    double worst = 0.0;
    auto probe = [&](const PeriodicField& phi) {
        PeriodicField a, b;
        apply_T2_scalar(phi, a, b);
        const double na = a.l2(area), nb = b.l2(area);
        worst = std::max(worst, std::sqrt(na * na + nb * nb) / phi.l2(area));
    };
    for (int s = 0; s < samples; ++s) probe(random_field(2000 + s));
    probe(peak_mode(*grid_, mult_s_, true));
    probe(peak_mode(*grid_, mult_p_, true));
    return worst;
}

double CgoOperators::measure_T3(int) const {
    // Multiplication by the unimodular phase is an L2 isometry, so the
    // operator norm is exactly kp^2 max |c_p|.
    const double kp2 = medium_.kp() * medium_.kp();
    return kp2 * mult_p_.norm_P();
}

CgoSolution solve_cgo(const ElasticMedium& medium, const CgoParams& params,
                      const HalfShiftLattice& lattice, const CgoSolveOptions& opts) {
    CgoOperators ops(medium, params, lattice);
    const double tnorm = ops.measure_T_norm();
    if (tnorm > opts.contraction_gate) throw BelowCgoThreshold(tnorm, params.tau);

    const double area = ops.grid().cell_area();
    CgoIterate cur = ops.s_of_eta();
    double resid = iterate_norm(cur, area);
    int iters = 1;
    std::vector<double> trace;
    for (; iters <= opts.max_iter; ++iters) {
        CgoIterate next = ops.step(cur);
        CgoIterate diff{next.R1, next.R2, next.v};
        for (std::size_t i = 0; i < diff.R1.v.size(); ++i) {
            diff.R1.v[i] -= cur.R1.v[i];
            diff.R2.v[i] -= cur.R2.v[i];
            diff.v.v[i] -= cur.v.v[i];
        }
        const double dn = iterate_norm(diff, area);
        const double sn = std::max(iterate_norm(next, area), 1e-300);
        cur = std::move(next);
        resid = dn / sn;
        trace.push_back(resid);
        if (resid <= opts.tol) break;
    }

    CgoSolution sol;
    sol.params = params;
    sol.grid = std::make_shared<SpectralGrid>(lattice);
    sol.R1 = std::move(cur.R1);
    sol.R2 = std::move(cur.R2);
    sol.v = std::move(cur.v);
    sol.iterations = iters;
    sol.fixed_point_residual = resid;
    sol.measured_T_norm = tnorm;
    sol.residual_trace = std::move(trace);
    sol.disk_radius = 0.8 * lattice.R_prime();
    return sol;
}

double CgoSolution::norm_R() const {
    const double area = grid->cell_area();
    const double a = R1.l2_disk(disk_radius, area), b = R2.l2_disk(disk_radius, area);
    return std::sqrt(a * a + b * b);
}

double CgoSolution::norm_gradR() const {
    const double area = grid->cell_area();
    double total = 0.0;
    for (const PeriodicField* f : {&R1, &R2}) {
        PeriodicField d1 = grid->make_field(), d2 = grid->make_field();
        grid->derivative(*f, 0, d1);
        grid->derivative(*f, 1, d2);
        const double a = d1.l2_disk(disk_radius, area), b = d2.l2_disk(disk_radius, area);
        total += a * a + b * b;
    }
    return std::sqrt(total);
}

double CgoSolution::norm_grad2R() const {
    const int M = grid->M();
    const double area = grid->cell_area();
    double total = 0.0;
    for (const PeriodicField* f : {&R1, &R2}) {
        std::vector<cplx> c;
        grid->to_coeffs(*f, c);
        // Hessian entries via -alpha_a alpha_b; Frobenius norm is frame
        // invariant so the solver-frame Hessian suffices.
        for (int pass = 0; pass < 3; ++pass) {
            std::vector<cplx> cc(c.size());
            for (int ky = 0; ky < M; ++ky)
                for (int kx = 0; kx < M; ++kx) {
                    const std::size_t i = static_cast<std::size_t>(ky) * M + kx;
                    const double a1 = grid->alpha1_of_bin(kx);
                    const double a2 = grid->alpha2_of_bin(ky);
                    const double w = pass == 0 ? a1 * a1 : (pass == 1 ? a2 * a2 : a1 * a2);
                    cc[i] = -w * c[i];
                }
            PeriodicField h = grid->make_field();
            grid->to_samples(cc, h);
            const double n = h.l2_disk(disk_radius, area);
            total += (pass == 2 ? 2.0 : 1.0) * n * n;
        }
    }
    return std::sqrt(total);
}

CVec2 CgoSolution::R_at(Vec2 x) const {
    const Vec2 xp = params.to_frame(x);
    return {interpolate_bicubic(R1, xp), interpolate_bicubic(R2, xp)};
}

CVec2 CgoSolution::w_at(Vec2 x) const {
    const CVec2 r = R_at(x);
    return {params.eta.x + r.x, params.eta.y + r.y};
}

cplx CgoSolution::v_at(Vec2 x) const { return interpolate_bicubic(v, params.to_frame(x)); }

double CgoSolution::divergence_consistency() const {
    const int M = grid->M();
    const double area = grid->cell_area();
    PeriodicField d11 = grid->make_field(), d21 = grid->make_field();
    PeriodicField d12 = grid->make_field(), d22 = grid->make_field();
    grid->derivative(R1, 0, d11);
    grid->derivative(R1, 1, d21);
    grid->derivative(R2, 0, d12);
    grid->derivative(R2, 1, d22);
    const Mat2 Q = params.Q;
    PeriodicField diff = grid->make_field();
    for (int iy = 0; iy < M; ++iy)
        for (int ix = 0; ix < M; ++ix) {
            // d/dx_i = sum_j Q_ji d/dx'_j
            const cplx divR = Q.a * d11.at(ix, iy) + Q.c * d21.at(ix, iy) +
                              Q.b * d12.at(ix, iy) + Q.d * d22.at(ix, iy);
            const cplx vc = divR + params.zeta.x * R1.at(ix, iy) + params.zeta.y * R2.at(ix, iy);
            diff.at(ix, iy) = vc - v.at(ix, iy);
        }
    const double dv = diff.l2_disk(disk_radius, area);
    const double nv = v.l2_disk(disk_radius, area);
    return nv > 1e-30 ? dv / nv : dv;
}

void CgoSolution::export_json(const std::string& path) const {
    nlohmann::json j;
    j["tau"] = params.tau;
    j["theta_d"] = params.probe.theta_d;
    j["delta"] = params.probe.delta;
    j["kp"] = params.kp;
    j["ks"] = params.ks;
    j["iterations"] = iterations;
    j["fixed_point_residual"] = fixed_point_residual;
    j["residual_trace"] = residual_trace;
    j["measured_T_norm"] = measured_T_norm;
    j["norm_R"] = norm_R();
    j["norm_gradR"] = norm_gradR();
    j["norm_grad2R"] = norm_grad2R();
    j["divergence_consistency"] = divergence_consistency();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_json: cannot open " + path);
    out << j.dump(2) << "\n";
}

double navier_residual(const ElasticMedium& medium, const CgoParams& params,
                       const SpectralGrid& grid, const PeriodicField& R1,
                       const PeriodicField& R2, double disk_radius) {
    const int M = grid.M();
    const double area = grid.cell_area();
    const double mu = medium.mu, lam = medium.lambda, om2 = medium.omega * medium.omega;
    const cplx xi1{-params.tau, 0.0};
    const cplx xi2{0.0, std::sqrt(params.tau * params.tau + params.ks * params.ks)};
    const Mat2 Q = params.Q;
    const Mat2 Qt = Q.transpose();

    auto lap = [&](const PeriodicField& f, PeriodicField& out) {
        std::vector<cplx> c;
        grid.to_coeffs(f, c);
        for (int ky = 0; ky < M; ++ky)
            for (int kx = 0; kx < M; ++kx) {
                const std::size_t i = static_cast<std::size_t>(ky) * M + kx;
                const double a1 = grid.alpha1_of_bin(kx), a2 = grid.alpha2_of_bin(ky);
                c[i] *= -(a1 * a1 + a2 * a2);
            }
        grid.to_samples(c, out);
    };

    PeriodicField l1 = grid.make_field(), l2_ = grid.make_field();
    PeriodicField d11 = grid.make_field(), d21 = grid.make_field();
    PeriodicField d12 = grid.make_field(), d22 = grid.make_field();
    lap(R1, l1);
    lap(R2, l2_);
    grid.derivative(R1, 0, d11);
    grid.derivative(R1, 1, d21);
    grid.derivative(R2, 0, d12);
    grid.derivative(R2, 1, d22);

    // s = div R + zeta . R in the physical frame
    PeriodicField s = grid.make_field();
    for (int iy = 0; iy < M; ++iy)
        for (int ix = 0; ix < M; ++ix) {
            const cplx divR = Q.a * d11.at(ix, iy) + Q.c * d21.at(ix, iy) +
                              Q.b * d12.at(ix, iy) + Q.d * d22.at(ix, iy);
            s.at(ix, iy) = divR + params.zeta.x * R1.at(ix, iy) + params.zeta.y * R2.at(ix, iy);
        }
    PeriodicField s1 = grid.make_field(), s2 = grid.make_field();
    grid.derivative(s, 0, s1);
    grid.derivative(s, 1, s2);

    double num = 0.0, den = 0.0;
    const double h = 2.0 * grid.R_prime() / M;
    for (int iy = 0; iy < M; ++iy) {
        const double x2p = -grid.R_prime() + h * iy;
        for (int ix = 0; ix < M; ++ix) {
            const double x1p = -grid.R_prime() + h * ix;
            if (x1p * x1p + x2p * x2p >= disk_radius * disk_radius) continue;
            const Vec2 x = params.from_frame({x1p, x2p});
            const double rho = medium.rho.value(x);
            const cplx r1 = R1.at(ix, iy), r2 = R2.at(ix, iy);
            const cplx xg1 = xi1 * d11.at(ix, iy) + xi2 * d21.at(ix, iy);
            const cplx xg2 = xi1 * d12.at(ix, iy) + xi2 * d22.at(ix, iy);
            const cplx sv = s.at(ix, iy);
            const cplx gs1 = Qt.a * s1.at(ix, iy) + Qt.b * s2.at(ix, iy);
            const cplx gs2 = Qt.c * s1.at(ix, iy) + Qt.d * s2.at(ix, iy);
            const cplx e1 = mu * (l1.at(ix, iy) + 2.0 * xg1) - om2 * r1 +
                            (lam + mu) * (gs1 + params.zeta.x * sv) + om2 * rho * r1 +
                            om2 * (rho - 1.0) * params.eta.x;
            const cplx e2 = mu * (l2_.at(ix, iy) + 2.0 * xg2) - om2 * r2 +
                            (lam + mu) * (gs2 + params.zeta.y * sv) + om2 * rho * r2 +
                            om2 * (rho - 1.0) * params.eta.y;
            num += std::norm(e1) + std::norm(e2);
            const cplx u1 = om2 * rho * (params.eta.x + r1);
            const cplx u2 = om2 * rho * (params.eta.y + r2);
            den += std::norm(u1) + std::norm(u2);
        }
    }
    return std::sqrt(num * area) / std::max(std::sqrt(den * area), 1e-300);
}

PsiEvaluator::PsiEvaluator(const ElasticMedium& medium, const CgoParams& params,
                           const HalfShiftLattice& lattice, double window_start,
                           int window_power)
    : medium_(medium), params_(params), lattice_(lattice), window_start_(window_start),
      window_power_(window_power) {
    cutoff_ = lattice_.N() * lattice_.step();
}

double PsiEvaluator::window(double abs_alpha) const {
    const double t = abs_alpha / cutoff_;
    if (t <= window_start_) return 1.0;
    if (t >= 1.0) return 0.0;
    const double u = (t - window_start_) / (1.0 - window_start_);
    return std::exp(-16.0 * std::pow(u, window_power_));
}

cplx PsiEvaluator::h_second(Vec2 x, bool tilde, int i, int j) const {
    const int N = lattice_.N();
    const double inv2R = 1.0 / (2.0 * lattice_.R_prime());
    const double tau = params_.tau;
    const double k = tilde ? params_.kp : params_.ks;
    const double root = std::sqrt(tau * tau + k * k);
    const CVec2 zeta = tilde ? params_.zeta_tilde : params_.zeta;
    const Mat2 Qt = params_.Q.transpose();
    cplx acc = 0.0;
    for (int n = -N; n < N; ++n)
        for (int m = -N; m < N; ++m) {
            const double a1 = lattice_.alpha1(m), a2 = lattice_.alpha2(n);
            const double w = window(std::hypot(a1, a2));
            if (w == 0.0) continue;
            const cplx denom{a1 * a1 + a2 * a2 + 2.0 * root * a2, 2.0 * tau * a1};
            const Vec2 beta = Qt.apply(Vec2{a1, a2});  // physical-frame frequency
            const cplx f1 = zeta.x + cplx{0.0, beta.x};
            const cplx f2 = zeta.y + cplx{0.0, beta.y};
            const cplx fi = i == 0 ? f1 : f2;
            const cplx fj = j == 0 ? f1 : f2;
            const cplx expo = f1 * x.x + f2 * x.y;
            acc += (w / denom) * fi * fj * std::exp(expo);
        }
    return acc * inv2R;
}

cplx PsiEvaluator::h_plain(Vec2 x, bool tilde) const {
    const int N = lattice_.N();
    const double inv2R = 1.0 / (2.0 * lattice_.R_prime());
    const double tau = params_.tau;
    const double k = tilde ? params_.kp : params_.ks;
    const double root = std::sqrt(tau * tau + k * k);
    const CVec2 zeta = tilde ? params_.zeta_tilde : params_.zeta;
    const Mat2 Qt = params_.Q.transpose();
    cplx acc = 0.0;
    for (int n = -N; n < N; ++n)
        for (int m = -N; m < N; ++m) {
            const double a1 = lattice_.alpha1(m), a2 = lattice_.alpha2(n);
            const double w = window(std::hypot(a1, a2));
            if (w == 0.0) continue;
            const cplx denom{a1 * a1 + a2 * a2 + 2.0 * root * a2, 2.0 * tau * a1};
            const Vec2 beta = Qt.apply(Vec2{a1, a2});
            const cplx expo = (zeta.x + cplx{0.0, beta.x}) * x.x + (zeta.y + cplx{0.0, beta.y}) * x.y;
            acc += (w / denom) * std::exp(expo);
        }
    return acc * inv2R;
}

CMat2 PsiEvaluator::psi(Vec2 x) const {
    const double om2 = medium_.omega * medium_.omega;
    const cplx hz = h_plain(x, false);
    CMat2 m;
    const cplx d11 = h_second(x, false, 0, 0) - h_second(x, true, 0, 0);
    const cplx d12 = h_second(x, false, 0, 1) - h_second(x, true, 0, 1);
    const cplx d21 = h_second(x, false, 1, 0) - h_second(x, true, 1, 0);
    const cplx d22 = h_second(x, false, 1, 1) - h_second(x, true, 1, 1);
    m.a = hz / medium_.mu + d11 / om2;
    m.b = d12 / om2;
    m.c = d21 / om2;
    m.d = hz / medium_.mu + d22 / om2;
    return m;
}

}  // namespace ewave
