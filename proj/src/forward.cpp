#include "ewave/forward.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "ewave/quadrature.hpp"
#include "json.hpp"

namespace ewave {

namespace {
constexpr double pi = std::numbers::pi;

double bessel_j(int nu, double x) { return std::cyl_bessel_j(nu, x); }

void write_csv_line(std::ofstream& out, const std::vector<double>& vals) {
    char buf[64];
    for (std::size_t i = 0; i < vals.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", vals[i]);
        out << buf << (i + 1 < vals.size() ? "," : "\n");
    }
}
}  // namespace

cplx helmholtz_kernel_hat(double k, double D, double rho) {
    // N(rho) = -1 + (i pi D / 2) (k J0(rho D) H1(kD) - rho J1(rho D) H0(kD)),
    // G_hat = N(rho) / (k^2 - rho^2); N(k) = 0 by the Bessel cross-product
    // identity, so the pole is removable.
    const cplx h0 = hankel1_0(k * D);
    const cplx h1 = hankel1_1(k * D);
    const cplx ipd2{0.0, 0.5 * pi * D};
    const double gap = std::abs(rho - k) * std::max(D, 1.0);
    if (gap > 1e-4) {
        const cplx N = -1.0 + ipd2 * (k * bessel_j(0, rho * D) * h1 - rho * bessel_j(1, rho * D) * h0);
        return N / ((k - rho) * (k + rho));
    }
    // Two-term Taylor of N about rho = k:
    //   N'(rho)  = (i pi D/2) (-k D J1(rho D) H1(kD) - rho D J0(rho D) H0(kD))
    //   N''(rho) = (i pi D/2) (-k D^2 (J0 - J1/(rho D)) H1 - D J0 H0 + rho D^2 J1 H0)
    const double j0 = bessel_j(0, k * D), j1 = bessel_j(1, k * D);
    const cplx N1 = ipd2 * (-k * D * j1 * h1 - k * D * j0 * h0);
    const cplx N2 = ipd2 * (-k * D * D * (j0 - j1 / (k * D)) * h1 - D * j0 * h0 + k * D * D * j1 * h0);
    const double d = rho - k;
    return -(N1 + 0.5 * N2 * d) / (k + rho);
}

VolumePotential::VolumePotential(const ElasticMedium& medium, const BoxGrid& grid)
    : grid_(grid) {
    if (grid.M % 2 != 0) throw std::invalid_argument("VolumePotential: M must be even");
    Mp_ = (5 * grid.M) / 2;
    P_ = 5.0 * grid.L;
    const double D = 2.9 * grid.L;  // > 2 sqrt(2) L, and P - 2L >= D
    const double om2 = medium.omega * medium.omega;
    const double kp = medium.kp(), ks = medium.ks();

    const std::size_t n = static_cast<std::size_t>(Mp_) * Mp_;
    k11_.resize(n);
    k12_.resize(n);
    k22_.resize(n);
    const double dp = 2.0 * pi / P_;
    for (int ky = 0; ky < Mp_; ++ky) {
        const int sy = ky < Mp_ / 2 ? ky : ky - Mp_;
        const double p2 = dp * sy;
        for (int kx = 0; kx < Mp_; ++kx) {
            const int sx = kx < Mp_ / 2 ? kx : kx - Mp_;
            const double p1 = dp * sx;
            const double rho = std::hypot(p1, p2);
            const cplx phat_s = helmholtz_kernel_hat(ks, D, rho);
            const cplx phat_p = helmholtz_kernel_hat(kp, D, rho);
            const cplx diff = phat_s - phat_p;
            const std::size_t i = static_cast<std::size_t>(ky) * Mp_ + kx;
            // The mixed symbol p1 p2 is odd at the unpaired Nyquist lines;
            // zero it there so the discrete kernel stays even.
            const double q1 = kx == Mp_ / 2 ? 0.0 : p1;
            const double q2 = ky == Mp_ / 2 ? 0.0 : p2;
            k11_[i] = -phat_s / medium.mu + p1 * p1 / om2 * diff;
            k12_[i] = q1 * q2 / om2 * diff;
            k22_[i] = -phat_s / medium.mu + p2 * p2 / om2 * diff;
        }
    }

    bufA_.resize(n);
    bufB_.resize(n);
    auto* a = reinterpret_cast<fftw_complex*>(bufA_.data());
    plan_fwd_ = fftw_plan_dft_2d(Mp_, Mp_, a, a, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_2d(Mp_, Mp_, a, a, FFTW_BACKWARD, FFTW_ESTIMATE);
}

VolumePotential::~VolumePotential() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void VolumePotential::apply(const std::vector<cplx>& g1, const std::vector<cplx>& g2,
                            std::vector<cplx>& out1, std::vector<cplx>& out2) const {
    const int M = grid_.M;
    const std::size_t n = static_cast<std::size_t>(Mp_) * Mp_;
    const double scale = grid_.h() * grid_.h() / (P_ * P_);

    auto run = [&](const std::vector<cplx>& gin, std::vector<cplx>& ghat) {
        std::fill(bufA_.begin(), bufA_.end(), cplx{0.0, 0.0});
        for (int iy = 0; iy < M; ++iy)
            for (int ix = 0; ix < M; ++ix)
                bufA_[static_cast<std::size_t>(iy) * Mp_ + ix] = gin[grid_.idx(ix, iy)];
        fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                         reinterpret_cast<fftw_complex*>(bufA_.data()),
                         reinterpret_cast<fftw_complex*>(bufA_.data()));
        ghat = bufA_;
    };

    std::vector<cplx> g1hat, g2hat;
    run(g1, g1hat);
    run(g2, g2hat);

    auto back = [&](std::vector<cplx>& spec, std::vector<cplx>& out) {
        bufA_ = spec;
        fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                         reinterpret_cast<fftw_complex*>(bufA_.data()),
                         reinterpret_cast<fftw_complex*>(bufA_.data()));
        out.resize(grid_.cells());
        for (int iy = 0; iy < M; ++iy)
            for (int ix = 0; ix < M; ++ix)
                out[grid_.idx(ix, iy)] = bufA_[static_cast<std::size_t>(iy) * Mp_ + ix] * scale;
    };

    std::vector<cplx> s1(n), s2(n);
    for (std::size_t i = 0; i < n; ++i) {
        s1[i] = k11_[i] * g1hat[i] + k12_[i] * g2hat[i];
        s2[i] = k12_[i] * g1hat[i] + k22_[i] * g2hat[i];
    }
    back(s1, out1);
    back(s2, out2);
}

double ForwardSolution::l2_where(const std::function<bool(Vec2)>& mask) const {
    double s = 0.0;
    for (int iy = 0; iy < grid.M; ++iy)
        for (int ix = 0; ix < grid.M; ++ix) {
            const Vec2 x{grid.coord(ix), grid.coord(iy)};
            if (mask(x)) s += std::norm(u1[grid.idx(ix, iy)]) + std::norm(u2[grid.idx(ix, iy)]);
        }
    return std::sqrt(s * grid.h() * grid.h());
}

namespace {

struct LsOperator {
    const VolumePotential& W;
    const ElasticMedium& medium;
    std::vector<double> one_minus_rho;

    LsOperator(const VolumePotential& w, const ElasticMedium& m) : W(w), medium(m) {
        const BoxGrid& g = w.grid();
        one_minus_rho.resize(g.cells());
        for (int iy = 0; iy < g.M; ++iy)
            for (int ix = 0; ix < g.M; ++ix)
                one_minus_rho[g.idx(ix, iy)] =
                    1.0 - medium.rho.value({g.coord(ix), g.coord(iy)});
    }

    // y = u - om^2 W[(1-rho) u]
    void apply(const std::vector<cplx>& u1, const std::vector<cplx>& u2,
               std::vector<cplx>& y1, std::vector<cplx>& y2) const {
        const double om2 = medium.omega * medium.omega;
        std::vector<cplx> w1(u1.size()), w2(u2.size());
        for (std::size_t i = 0; i < u1.size(); ++i) {
            w1[i] = one_minus_rho[i] * u1[i];
            w2[i] = one_minus_rho[i] * u2[i];
        }
        W.apply(w1, w2, y1, y2);
        for (std::size_t i = 0; i < u1.size(); ++i) {
            y1[i] = u1[i] - om2 * y1[i];
            y2[i] = u2[i] - om2 * y2[i];
        }
    }
};

double vec_norm(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i]) + std::norm(b[i]);
    return std::sqrt(s);
}

cplx vec_dot(const std::vector<cplx>& a1, const std::vector<cplx>& a2,
             const std::vector<cplx>& b1, const std::vector<cplx>& b2) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a1.size(); ++i)
        s += std::conj(a1[i]) * b1[i] + std::conj(a2[i]) * b2[i];
    return s;
}

}  // namespace

ForwardSolution solve_forward(const SourceModel& f, const ElasticMedium& medium,
                              const BoxGrid& grid, const ForwardOptions& opts) {
    // Resolution rule of thumb: at least 6 cells per shear wavelength.
    const double cells_per_wavelength = 2.0 * pi / medium.ks() / grid.h();
    if (cells_per_wavelength < 6.0)
        throw std::invalid_argument("solve_forward: grid too coarse for the shear wavelength");

    VolumePotential W(medium, grid);
    const std::size_t n = grid.cells();
    std::vector<cplx> f1(n), f2(n);
    for (int iy = 0; iy < grid.M; ++iy)
        for (int ix = 0; ix < grid.M; ++ix) {
            const Vec2 v = f.value({grid.coord(ix), grid.coord(iy)});
            f1[grid.idx(ix, iy)] = v.x;
            f2[grid.idx(ix, iy)] = v.y;
        }

    std::vector<cplx> rhs1, rhs2;
    W.apply(f1, f2, rhs1, rhs2);
    const double rhs_norm = std::max(vec_norm(rhs1, rhs2), 1e-300);

    LsOperator A(W, medium);
    ForwardSolution sol;
    sol.grid = grid;
    sol.u1 = rhs1;
    sol.u2 = rhs2;

    // Born iteration u <- rhs + om^2 W[(1-rho) u]
    const double om2 = medium.omega * medium.omega;
    double prev_delta = std::numeric_limits<double>::infinity();
    int stall = 0;
    bool converged = false;
    std::vector<cplx> t1, t2, w1(n), w2(n);
    for (int it = 1; it <= opts.max_born; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            w1[i] = A.one_minus_rho[i] * sol.u1[i];
            w2[i] = A.one_minus_rho[i] * sol.u2[i];
        }
        W.apply(w1, w2, t1, t2);
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx n1 = rhs1[i] + om2 * t1[i];
            const cplx n2 = rhs2[i] + om2 * t2[i];
            delta += std::norm(n1 - sol.u1[i]) + std::norm(n2 - sol.u2[i]);
            sol.u1[i] = n1;
            sol.u2[i] = n2;
        }
        delta = std::sqrt(delta) / rhs_norm;
        sol.born_iterations = it;
        if (delta <= opts.tol) {
            converged = true;
            sol.residual = delta;
            break;
        }
        if (delta > prev_delta) {
            if (++stall >= 2) break;  // diverging; hand off to Krylov
        } else {
            stall = 0;
        }
        prev_delta = delta;
    }

    if (!converged) {
        // BiCGSTAB on (I - om^2 W (1-rho)) u = rhs, matrix-free.
        sol.used_krylov = true;
        std::vector<cplx>&x1 = sol.u1, &x2 = sol.u2;
        x1 = rhs1;
        x2 = rhs2;
        std::vector<cplx> r1(n), r2(n), ax1, ax2;
        A.apply(x1, x2, ax1, ax2);
        for (std::size_t i = 0; i < n; ++i) {
            r1[i] = rhs1[i] - ax1[i];
            r2[i] = rhs2[i] - ax2[i];
        }
        std::vector<cplx> rh1 = r1, rh2 = r2;
        std::vector<cplx> p1(n), p2(n), v1(n), v2(n), s1(n), s2(n), t1b, t2b;
        cplx rho_prev = 1.0, alpha = 1.0, omega_b = 1.0;
        std::fill(p1.begin(), p1.end(), cplx{0, 0});
        std::fill(p2.begin(), p2.end(), cplx{0, 0});
        std::fill(v1.begin(), v1.end(), cplx{0, 0});
        std::fill(v2.begin(), v2.end(), cplx{0, 0});
        bool ok = false;
        for (int it = 1; it <= opts.max_krylov; ++it) {
            const cplx rho_k = vec_dot(rh1, rh2, r1, r2);
            if (std::abs(rho_k) < 1e-300) break;
            const cplx beta = (rho_k / rho_prev) * (alpha / omega_b);
            for (std::size_t i = 0; i < n; ++i) {
                p1[i] = r1[i] + beta * (p1[i] - omega_b * v1[i]);
                p2[i] = r2[i] + beta * (p2[i] - omega_b * v2[i]);
            }
            A.apply(p1, p2, v1, v2);
            alpha = rho_k / vec_dot(rh1, rh2, v1, v2);
            for (std::size_t i = 0; i < n; ++i) {
                s1[i] = r1[i] - alpha * v1[i];
                s2[i] = r2[i] - alpha * v2[i];
            }
            if (vec_norm(s1, s2) / rhs_norm <= opts.tol) {
                for (std::size_t i = 0; i < n; ++i) {
                    x1[i] += alpha * p1[i];
                    x2[i] += alpha * p2[i];
                }
                sol.krylov_iterations = it;
                sol.residual = vec_norm(s1, s2) / rhs_norm;
                ok = true;
                break;
            }
            A.apply(s1, s2, t1b, t2b);
            omega_b = vec_dot(t1b, t2b, s1, s2) / vec_dot(t1b, t2b, t1b, t2b);
            for (std::size_t i = 0; i < n; ++i) {
                x1[i] += alpha * p1[i] + omega_b * s1[i];
                x2[i] += alpha * p2[i] + omega_b * s2[i];
                r1[i] = s1[i] - omega_b * t1b[i];
                r2[i] = s2[i] - omega_b * t2b[i];
            }
            const double rn = vec_norm(r1, r2) / rhs_norm;
            sol.krylov_iterations = it;
            sol.residual = rn;
            if (rn <= opts.tol) {
                ok = true;
                break;
            }
            rho_prev = rho_k;
        }
        if (!ok && sol.residual > 1e-6)
            throw ContrastError("solve_forward: iteration failed at this contrast (residual " +
                                std::to_string(sol.residual) + ")");
    }
    return sol;
}

double FarFieldPattern::max_amplitude() const {
    double m = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i) m = std::max(m, total(i).norm());
    return m;
}

double FarFieldPattern::energy_p() const {
    double s = 0.0;
    for (const auto& v : up) s += v.norm() * v.norm();
    return s * 2.0 * pi / angles.size();
}

double FarFieldPattern::energy_s() const {
    double s = 0.0;
    for (const auto& v : us) s += v.norm() * v.norm();
    return s * 2.0 * pi / angles.size();
}

void FarFieldPattern::export_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("FarFieldPattern: cannot open " + path);
    out << "angle,re_up1,im_up1,re_up2,im_up2,re_us1,im_us1,re_us2,im_us2\n";
    for (std::size_t i = 0; i < angles.size(); ++i)
        write_csv_line(out, {angles[i], up[i].x.real(), up[i].x.imag(), up[i].y.real(),
                             up[i].y.imag(), us[i].x.real(), us[i].x.imag(), us[i].y.real(),
                             us[i].y.imag()});
}

void FarFieldPattern::export_summary_json(const std::string& path) const {
    nlohmann::json j;
    j["max_amplitude"] = max_amplitude();
    j["energy_p"] = energy_p();
    j["energy_s"] = energy_s();
    j["directions"] = angles.size();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("FarFieldPattern: cannot open " + path);
    out << j.dump(2) << "\n";
}

FarFieldPattern far_field(const SourceModel& f, const ForwardSolution& u,
                          const ElasticMedium& medium, int n_directions) {
    const BoxGrid& g = u.grid;
    const double om2 = medium.omega * medium.omega;
    const double kp = medium.kp(), ks = medium.ks();
    const KupradzeMatrix K(medium);
    const cplx cp = K.farfield_cp(), cs = K.farfield_cs();

    // F = f + om^2 (1 - rho) u at cell centers
    const std::size_t n = g.cells();
    std::vector<cplx> F1(n), F2(n);
    for (int iy = 0; iy < g.M; ++iy)
        for (int ix = 0; ix < g.M; ++ix) {
            const Vec2 x{g.coord(ix), g.coord(iy)};
            const Vec2 fv = f.value(x);
            const double omr = 1.0 - medium.rho.value(x);
            const std::size_t i = g.idx(ix, iy);
            F1[i] = fv.x + om2 * omr * u.u1[i];
            F2[i] = fv.y + om2 * omr * u.u2[i];
        }

    FarFieldPattern out;
    out.angles.resize(n_directions);
    out.up.resize(n_directions);
    out.us.resize(n_directions);
    const double h2 = g.h() * g.h();
    for (int d = 0; d < n_directions; ++d) {
        const double phi = 2.0 * pi * d / n_directions;
        const Vec2 xh = unit_vector(phi);
        const Vec2 th = xh.perp();
        cplx sp1 = 0, sp2 = 0, ss1 = 0, ss2 = 0;
        for (int iy = 0; iy < g.M; ++iy)
            for (int ix = 0; ix < g.M; ++ix) {
                const std::size_t i = g.idx(ix, iy);
                if (F1[i] == cplx{0, 0} && F2[i] == cplx{0, 0}) continue;
                const Vec2 y{g.coord(ix), g.coord(iy)};
                const cplx ep = std::exp(cplx{0.0, -kp * xh.dot(y)});
                const cplx es = std::exp(cplx{0.0, -ks * xh.dot(y)});
                sp1 += ep * F1[i];
                sp2 += ep * F2[i];
                ss1 += es * F1[i];
                ss2 += es * F2[i];
            }
        const cplx radial = (sp1 * xh.x + sp2 * xh.y) * h2;
        const cplx tangent = (ss1 * th.x + ss2 * th.y) * h2;
        out.angles[d] = phi;
        out.up[d] = CVec2{cp * radial * xh.x, cp * radial * xh.y};
        out.us[d] = CVec2{cs * tangent * th.x, cs * tangent * th.y};
    }
    return out;
}

double forward_stencil_residual(const ForwardSolution& sol, const SourceModel& f,
                                const ElasticMedium& medium, int margin) {
    const BoxGrid& g = sol.grid;
    const double h = g.h(), h2 = h * h;
    const double om2 = medium.omega * medium.omega;
    const double lam = medium.lambda, mu = medium.mu;
    double num = 0.0;
    for (int iy = margin + 1; iy < g.M - margin - 1; ++iy)
        for (int ix = margin + 1; ix < g.M - margin - 1; ++ix) {
            const Vec2 x{g.coord(ix), g.coord(iy)};
            bool mixed = false;
            const bool inside = f.in_support(x);
            for (int dy = -margin; dy <= margin && !mixed; ++dy)
                for (int dx = -margin; dx <= margin; ++dx)
                    if (f.in_support({g.coord(ix + dx), g.coord(iy + dy)}) != inside) {
                        mixed = true;
                        break;
                    }
            if (mixed) continue;
            auto u1 = [&](int a, int b) { return sol.u1[g.idx(a, b)]; };
            auto u2 = [&](int a, int b) { return sol.u2[g.idx(a, b)]; };
            const cplx lap1 = (u1(ix + 1, iy) + u1(ix - 1, iy) + u1(ix, iy + 1) + u1(ix, iy - 1) -
                               4.0 * u1(ix, iy)) / h2;
            const cplx lap2 = (u2(ix + 1, iy) + u2(ix - 1, iy) + u2(ix, iy + 1) + u2(ix, iy - 1) -
                               4.0 * u2(ix, iy)) / h2;
            const cplx d11u1 = (u1(ix + 1, iy) - 2.0 * u1(ix, iy) + u1(ix - 1, iy)) / h2;
            const cplx d22u2 = (u2(ix, iy + 1) - 2.0 * u2(ix, iy) + u2(ix, iy - 1)) / h2;
            const cplx d12u1 = (u1(ix + 1, iy + 1) - u1(ix + 1, iy - 1) - u1(ix - 1, iy + 1) +
                                u1(ix - 1, iy - 1)) / (4.0 * h2);
            const cplx d12u2 = (u2(ix + 1, iy + 1) - u2(ix + 1, iy - 1) - u2(ix - 1, iy + 1) +
                                u2(ix - 1, iy - 1)) / (4.0 * h2);
            const double rho = medium.rho.value(x);
            const Vec2 fv = f.value(x);
            const cplx e1 = mu * lap1 + (lam + mu) * (d11u1 + d12u2) + om2 * rho * u1(ix, iy) - fv.x;
            const cplx e2 = mu * lap2 + (lam + mu) * (d12u1 + d22u2) + om2 * rho * u2(ix, iy) - fv.y;
            num += std::norm(e1) + std::norm(e2);
        }
    double fden = 0.0;
    for (int iy = 0; iy < g.M; ++iy)
        for (int ix = 0; ix < g.M; ++ix) {
            const Vec2 fv = f.value({g.coord(ix), g.coord(iy)});
            fden += fv.x * fv.x + fv.y * fv.y;
        }
    return std::sqrt(num) / std::max(std::sqrt(fden), 1e-300);
}

SourceModel make_nonradiating(const SmoothBump& g, const ElasticMedium& medium, double R_domain) {
    if (!(g.center.norm() + g.radius < R_domain))
        throw std::invalid_argument("make_nonradiating: bump support must sit strictly inside D_R");
    const double lambda = medium.lambda, mu = medium.mu;
    const double om2 = medium.omega * medium.omega;
    const DensityProfile rho = medium.rho;
    auto value = [g, lambda, mu, om2, rho](Vec2 x) {
        return g.navier(x, lambda, mu) + om2 * rho.value(x) * g.value(x);
    };
    auto gradient = [g, lambda, mu, om2, rho](Vec2 x) {
        const Mat2 base = g.navier_gradient(x, lambda, mu);
        const Mat2 J = g.jacobian(x);
        const Vec2 gr = rho.gradient(x);
        const Vec2 gv = g.value(x);
        const double r = rho.value(x);
        return Mat2{base.a + om2 * (gr.x * gv.x + r * J.a), base.b + om2 * (gr.y * gv.x + r * J.b),
                    base.c + om2 * (gr.x * gv.y + r * J.c), base.d + om2 * (gr.y * gv.y + r * J.d)};
    };
    return SourceModel::on_disk(g.center, g.radius, value, gradient, Regularity::C1alpha, 0.9);
}

namespace {

void cauchy_export_rows(std::ofstream& out, const CauchyData& c) {
    out << "angle,re_u1,im_u1,re_u2,im_u2,re_t1,im_t1,re_t2,im_t2\n";
    for (std::size_t i = 0; i < c.angles.size(); ++i)
        write_csv_line(out, {c.angles[i], c.u[i].x.real(), c.u[i].x.imag(), c.u[i].y.real(),
                             c.u[i].y.imag(), c.traction[i].x.real(), c.traction[i].x.imag(),
                             c.traction[i].y.real(), c.traction[i].y.imag()});
}

CVec2 traction_from_jacobian(const CMat2& J, cplx div, Vec2 nu, double lambda, double mu) {
    // T_nu u = lambda (div u) nu + mu (J + J^T) nu
    const cplx t1 = lambda * div * nu.x + mu * ((J.a + J.a) * nu.x + (J.b + J.c) * nu.y);
    const cplx t2 = lambda * div * nu.y + mu * ((J.c + J.b) * nu.x + (J.d + J.d) * nu.y);
    return {t1, t2};
}

}  // namespace

void CauchyData::export_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("CauchyData: cannot open " + path);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "# radius %.17g\n", radius);
    out << buf;
    cauchy_export_rows(out, *this);
}

CauchyData CauchyData::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("CauchyData: cannot open " + path);
    CauchyData c;
    std::string line;
    std::getline(in, line);
    if (line.rfind("# radius ", 0) == 0) c.radius = std::stod(line.substr(9));
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::vector<double> vals;
        std::string tok;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        if (vals.size() != 9) throw std::runtime_error("CauchyData: malformed row");
        c.angles.push_back(vals[0]);
        c.u.push_back({cplx{vals[1], vals[2]}, cplx{vals[3], vals[4]}});
        c.traction.push_back({cplx{vals[5], vals[6]}, cplx{vals[7], vals[8]}});
    }
    return c;
}

CauchyData cauchy_from_solution(const SourceModel& f, const ForwardSolution& sol,
                                const ElasticMedium& medium, double radius, int n_points) {
    const BoxGrid& g = sol.grid;
    const double om2 = medium.omega * medium.omega;
    const KupradzeMatrix K(medium);

    const std::size_t n = g.cells();
    std::vector<cplx> F1(n), F2(n);
    std::vector<Vec2> pts(n);
    for (int iy = 0; iy < g.M; ++iy)
        for (int ix = 0; ix < g.M; ++ix) {
            const Vec2 x{g.coord(ix), g.coord(iy)};
            const Vec2 fv = f.value(x);
            const double omr = 1.0 - medium.rho.value(x);
            const std::size_t i = g.idx(ix, iy);
            F1[i] = fv.x + om2 * omr * sol.u1[i];
            F2[i] = fv.y + om2 * omr * sol.u2[i];
            pts[i] = x;
        }

    CauchyData c;
    c.radius = radius;
    c.angles.resize(n_points);
    c.u.resize(n_points);
    c.traction.resize(n_points);
    const double h2 = g.h() * g.h();
    for (int p = 0; p < n_points; ++p) {
        const double phi = 2.0 * pi * p / n_points;
        const Vec2 x = radius * unit_vector(phi);
        CVec2 u{0.0, 0.0};
        CMat2 J{};
        for (std::size_t i = 0; i < n; ++i) {
            if (F1[i] == cplx{0, 0} && F2[i] == cplx{0, 0}) continue;
            const Vec2 z = x - pts[i];
            const CMat2 G = K.eval(z);
            const auto dG = K.grad(z);
            const CVec2 Fv{F1[i], F2[i]};
            const CVec2 gu = G.apply(Fv);
            u.x += gu.x;
            u.y += gu.y;
            const CVec2 d1 = dG[0].apply(Fv);
            const CVec2 d2 = dG[1].apply(Fv);
            J.a += d1.x;
            J.b += d2.x;
            J.c += d1.y;
            J.d += d2.y;
        }
        u.x *= h2;
        u.y *= h2;
        J.a *= h2;
        J.b *= h2;
        J.c *= h2;
        J.d *= h2;
        c.angles[p] = phi;
        c.u[p] = u;
        c.traction[p] = traction_from_jacobian(J, J.a + J.d, unit_vector(phi), medium.lambda,
                                               medium.mu);
    }
    return c;
}

namespace {

template <typename Density>
CauchyData cauchy_from_quadrature(const ElasticMedium& medium, double radius, int n_points,
                                  const std::vector<Vec2>& nodes,
                                  const std::vector<double>& weights, Density&& density) {
    const KupradzeMatrix K(medium);
    CauchyData c;
    c.radius = radius;
    c.angles.resize(n_points);
    c.u.resize(n_points);
    c.traction.resize(n_points);
    for (int p = 0; p < n_points; ++p) {
        const double phi = 2.0 * pi * p / n_points;
        const Vec2 x = radius * unit_vector(phi);
        CVec2 u{0.0, 0.0};
        CMat2 J{};
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            const Vec2 fv = density(nodes[q]);
            if (fv.x == 0.0 && fv.y == 0.0) continue;
            const Vec2 z = x - nodes[q];
            const CMat2 G = K.eval(z);
            const auto dG = K.grad(z);
            const CVec2 Fv{fv.x, fv.y};
            const CVec2 gu = G.apply(Fv);
            const CVec2 d1 = dG[0].apply(Fv);
            const CVec2 d2 = dG[1].apply(Fv);
            u.x += weights[q] * gu.x;
            u.y += weights[q] * gu.y;
            J.a += weights[q] * d1.x;
            J.b += weights[q] * d2.x;
            J.c += weights[q] * d1.y;
            J.d += weights[q] * d2.y;
        }
        c.angles[p] = phi;
        c.u[p] = u;
        c.traction[p] = traction_from_jacobian(J, J.a + J.d, unit_vector(phi), medium.lambda,
                                               medium.mu);
    }
    return c;
}

}  // namespace

namespace {

void triangle_nodes(Vec2 p0, Vec2 p1, Vec2 p2, const GaussRule& g, int depth,
                    std::vector<Vec2>& nodes, std::vector<double>& weights) {
    if (depth > 0) {
        const Vec2 m01 = 0.5 * (p0 + p1), m12 = 0.5 * (p1 + p2), m20 = 0.5 * (p2 + p0);
        triangle_nodes(p0, m01, m20, g, depth - 1, nodes, weights);
        triangle_nodes(m01, p1, m12, g, depth - 1, nodes, weights);
        triangle_nodes(m20, m12, p2, g, depth - 1, nodes, weights);
        triangle_nodes(m01, m12, m20, g, depth - 1, nodes, weights);
        return;
    }
    const Vec2 a = p1 - p0, b = p2 - p0;
    const double jac0 = a.cross(b);
    const int n = static_cast<int>(g.nodes.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double u = g.nodes[i], v = g.nodes[j];
            nodes.push_back(p0 + u * (a + v * (b - a)));
            weights.push_back(g.weights[i] * g.weights[j] * jac0 * u);
        }
}

}  // namespace

CauchyData cauchy_from_polygon_source(const ConvexPolygon& poly, Vec2 f_const,
                                      const ElasticMedium& medium, double radius, int n_points,
                                      int gauss_order, int subdivision) {
    if (medium.rho.kind() != DensityProfile::Kind::ConstantOne)
        throw std::invalid_argument("cauchy_from_polygon_source: requires rho == 1");
    if (!(radius > poly.max_radius()))
        throw std::invalid_argument("cauchy_from_polygon_source: circle intersects the support");
    std::vector<Vec2> nodes;
    std::vector<double> weights;
    const Vec2 c = poly.centroid();
    const GaussRule g = gauss_rule(gauss_order, 0.0, 1.0);
    for (std::size_t e = 0; e < poly.size(); ++e)
        triangle_nodes(c, poly.vertices[e], poly.vertices[(e + 1) % poly.size()], g, subdivision,
                       nodes, weights);
    return cauchy_from_quadrature(medium, radius, n_points, nodes, weights,
                                  [f_const](Vec2) { return f_const; });
}

CauchyData cauchy_from_disk_source(const SourceModel& f, const ElasticMedium& medium,
                                   double radius, int n_points, int gauss_order) {
    if (medium.rho.kind() != DensityProfile::Kind::ConstantOne)
        throw std::invalid_argument("cauchy_from_disk_source: requires rho == 1");
    if (!(radius > f.disk_center().norm() + f.disk_radius()))
        throw std::invalid_argument("cauchy_from_disk_source: circle intersects the support");
    // Polar Gauss grid over the support disk.
    std::vector<Vec2> nodes;
    std::vector<double> weights;
    const GaussRule rad = gauss_rule(gauss_order, 0.0, f.disk_radius());
    const int n_ang = 4 * gauss_order;
    for (int ir = 0; ir < gauss_order; ++ir)
        for (int ia = 0; ia < n_ang; ++ia) {
            const double r = rad.nodes[ir];
            const double phi = 2.0 * pi * ia / n_ang;
            nodes.push_back(f.disk_center() + r * unit_vector(phi));
            weights.push_back(rad.weights[ir] * r * (2.0 * pi / n_ang));
        }
    return cauchy_from_quadrature(medium, radius, n_points, nodes, weights,
                                  [&f](Vec2 x) { return f.value(x); });
}

}  // namespace ewave
