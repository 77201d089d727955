#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ewave/forward.hpp"
#include "ewave/quadrature.hpp"

using namespace ewave;

namespace {
constexpr double pi = std::numbers::pi;

// omega sized so D_R spans a bit over two shear wavelengths
ElasticMedium forward_medium(double a = 0.3) {
    const DensityProfile rho =
        a == 0.0 ? DensityProfile::constant_one() : DensityProfile::radial_bump(0.8, a);
    return {1.0, 1.0, 2.0 * pi, rho};
}
}  // namespace

TEST_CASE("Kupradze matrix: symmetry, evenness, and the Navier PDE") {
    const ElasticMedium medium = forward_medium(0.0);
    const KupradzeMatrix K(medium);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const Vec2 z{u(rng), u(rng)};
        if (z.norm() < 0.1) continue;
        const CMat2 g = K.eval(z);
        const CMat2 gm = K.eval(-z);
        CHECK(std::abs(g.b - g.c) < 1e-13);
        CHECK(std::abs(g.a - gm.a) < 1e-13);
        CHECK(std::abs(g.b - gm.b) < 1e-13);
    }

    // grad matches finite differences of eval
    const Vec2 z0{0.4, -0.3};
    const auto dG = K.grad(z0);
    const double h = 1e-5;
    auto fd = [&](int k, int i, int j) {
        const Vec2 e = k == 0 ? Vec2{h, 0.0} : Vec2{0.0, h};
        const CMat2 a = K.eval(z0 + e), b = K.eval(z0 - e);
        const cplx va = i == 0 ? (j == 0 ? a.a : a.b) : (j == 0 ? a.c : a.d);
        const cplx vb = i == 0 ? (j == 0 ? b.a : b.b) : (j == 0 ? b.c : b.d);
        return (va - vb) / (2.0 * h);
    };
    for (int k = 0; k < 2; ++k) {
        const CMat2& m = dG[k];
        CHECK(std::abs(m.a - fd(k, 0, 0)) < 1e-7);
        CHECK(std::abs(m.b - fd(k, 0, 1)) < 1e-7);
        CHECK(std::abs(m.c - fd(k, 1, 0)) < 1e-7);
        CHECK(std::abs(m.d - fd(k, 1, 1)) < 1e-7);
    }

    // (L + omega^2) Gamma = 0 away from the origin: centered stencils on
    // each column converge at second order in the step
    const double om2 = medium.omega * medium.omega;
    auto navier_resid = [&](Vec2 x, double hs) {
        double worst = 0.0;
        for (int col = 0; col < 2; ++col) {
            auto cv = [&](double dx, double dy) -> CVec2 {
                const CMat2 m = K.eval({x.x + dx, x.y + dy});
                return col == 0 ? CVec2{m.a, m.c} : CVec2{m.b, m.d};
            };
            const CVec2 c0 = cv(0, 0);
            const cplx lap1 = (cv(hs, 0).x + cv(-hs, 0).x + cv(0, hs).x + cv(0, -hs).x -
                               4.0 * c0.x) / (hs * hs);
            const cplx lap2 = (cv(hs, 0).y + cv(-hs, 0).y + cv(0, hs).y + cv(0, -hs).y -
                               4.0 * c0.y) / (hs * hs);
            const cplx d11 = (cv(hs, 0).x - 2.0 * c0.x + cv(-hs, 0).x) / (hs * hs);
            const cplx d22 = (cv(0, hs).y - 2.0 * c0.y + cv(0, -hs).y) / (hs * hs);
            const cplx d12x = (cv(hs, hs).y - cv(hs, -hs).y - cv(-hs, hs).y + cv(-hs, -hs).y) /
                              (4.0 * hs * hs);
            const cplx d12y = (cv(hs, hs).x - cv(hs, -hs).x - cv(-hs, hs).x + cv(-hs, -hs).x) /
                              (4.0 * hs * hs);
            const cplx e1 = medium.mu * lap1 + (medium.lambda + medium.mu) * (d11 + d12x) +
                            om2 * c0.x;
            const cplx e2 = medium.mu * lap2 + (medium.lambda + medium.mu) * (d12y + d22) +
                            om2 * c0.y;
            worst = std::max(worst, std::sqrt(std::norm(e1) + std::norm(e2)));
        }
        return worst;
    };
    const Vec2 x{0.5, 0.35};
    const double r1 = navier_resid(x, 2e-3);
    const double r2 = navier_resid(x, 1e-3);
    CHECK(r2 < r1);
    CHECK(r2 / r1 == doctest::Approx(0.25).epsilon(0.35));
    CHECK(r2 < 1e-2);
}

TEST_CASE("truncated-kernel transform is continuous across the Taylor seam") {
    // The removable pole at rho = k switches to a series branch below a
    // small gap; both branches must agree there.
    for (double k : {2.0, 6.283185307179586}) {
        const double D = 2.61;
        const double seam = 1e-4 / std::max(D, 1.0);
        for (double sgn : {-1.0, 1.0}) {
            const cplx a = helmholtz_kernel_hat(k, D, k + sgn * seam * 1.0001);
            const cplx b = helmholtz_kernel_hat(k, D, k + sgn * seam * 0.9999);
            CHECK(std::abs(a - b) <= 1e-7 * std::max(1.0, std::abs(a)));
        }
        // exact-on-ring evaluation is finite
        const cplx on_ring = helmholtz_kernel_hat(k, D, k);
        CHECK(std::isfinite(on_ring.real()));
        CHECK(std::isfinite(on_ring.imag()));
    }
}

TEST_CASE("volume potential matches direct kernel evaluation away from the source") {
    const ElasticMedium medium = forward_medium(0.0);
    const BoxGrid grid{96, 0.9};
    VolumePotential W(medium, grid);

    // point-like bump at the origin
    const SmoothBump bump{{0.0, 0.0}, 0.12, {1.0, -0.5}};
    std::vector<cplx> g1(grid.cells()), g2(grid.cells());
    for (int iy = 0; iy < grid.M; ++iy)
        for (int ix = 0; ix < grid.M; ++ix) {
            const Vec2 v = bump.value({grid.coord(ix), grid.coord(iy)});
            g1[grid.idx(ix, iy)] = v.x;
            g2[grid.idx(ix, iy)] = v.y;
        }
    std::vector<cplx> o1, o2;
    W.apply(g1, g2, o1, o2);

    const KupradzeMatrix K(medium);
    const GaussRule rad = gauss_rule(20, 0.0, bump.radius);
    double worst = 0.0, scale = 0.0;
    for (const Vec2 xt : {Vec2{0.5, 0.3}, Vec2{-0.4, 0.45}, Vec2{0.0, -0.6}}) {
        // nearest grid point, then direct polar quadrature reference there
        const int ix = static_cast<int>(std::round((xt.x + grid.L) / grid.h() - 0.5));
        const int iy = static_cast<int>(std::round((xt.y + grid.L) / grid.h() - 0.5));
        const Vec2 xg{grid.coord(ix), grid.coord(iy)};
        CVec2 refg{0.0, 0.0};
        const int n_ang = 64;
        for (int ir = 0; ir < 20; ++ir)
            for (int ia = 0; ia < n_ang; ++ia) {
                const double r = rad.nodes[ir];
                const double phi = 2.0 * pi * ia / n_ang;
                const Vec2 y = bump.center + r * unit_vector(phi);
                const Vec2 fv = bump.value(y);
                const CMat2 G = K.eval(xg - y);
                const double w = rad.weights[ir] * r * (2.0 * pi / n_ang);
                refg.x += w * (G.a * fv.x + G.b * fv.y);
                refg.y += w * (G.c * fv.x + G.d * fv.y);
            }
        const CVec2 got{o1[grid.idx(ix, iy)], o2[grid.idx(ix, iy)]};
        worst = std::max(worst, (CVec2{got.x - refg.x, got.y - refg.y}).norm());
        scale = std::max(scale, refg.norm());
    }
    CHECK(worst <= 0.01 * scale);

    // zero source gives zero
    std::fill(g1.begin(), g1.end(), cplx{0, 0});
    std::fill(g2.begin(), g2.end(), cplx{0, 0});
    W.apply(g1, g2, o1, o2);
    double z = 0.0;
    for (const auto& v : o1) z = std::max(z, std::abs(v));
    CHECK(z == 0.0);
}

TEST_CASE("volume potential is symmetric: <Wg, h> = <g, Wh>") {
    const ElasticMedium medium = forward_medium(0.0);
    const BoxGrid grid{64, 0.9};
    VolumePotential W(medium, grid);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss;
    std::vector<cplx> g1(grid.cells()), g2(grid.cells()), h1(grid.cells()), h2(grid.cells());
    for (std::size_t i = 0; i < grid.cells(); ++i) {
        g1[i] = gauss(rng);
        g2[i] = gauss(rng);
        h1[i] = gauss(rng);
        h2[i] = gauss(rng);
    }
    std::vector<cplx> wg1, wg2, wh1, wh2;
    W.apply(g1, g2, wg1, wg2);
    W.apply(h1, h2, wh1, wh2);
    cplx a = 0.0, b = 0.0;  // unconjugated pairing matches kernel symmetry
    for (std::size_t i = 0; i < grid.cells(); ++i) {
        a += wg1[i] * h1[i] + wg2[i] * h2[i];
        b += g1[i] * wh1[i] + g2[i] * wh2[i];
    }
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
}

TEST_CASE("homogeneous solve is one application of W and satisfies the PDE") {
    const ElasticMedium medium = forward_medium(0.0);
    const BoxGrid grid{128, 0.9};
    const SmoothBump bump{{0.1, -0.05}, 0.3, {1.0, 2.0}};
    const SourceModel f = SourceModel::on_disk(
        bump.center, bump.radius, [bump](Vec2 x) { return bump.value(x); },
        [bump](Vec2 x) { return bump.jacobian(x); }, Regularity::C1alpha, 0.9);
    const ForwardSolution sol = solve_forward(f, medium, grid);
    CHECK(sol.born_iterations <= 2);
    // fewer than 6 cells per shear wavelength is rejected
    CHECK_THROWS_AS(solve_forward(f, medium, BoxGrid{8, 0.9}), std::invalid_argument);
    CHECK(!sol.used_krylov);
    const double res = forward_stencil_residual(sol, f, medium);
    CHECK(res <= 1e-2);
}

TEST_CASE("bump-density solve converges and satisfies the PDE") {
    const ElasticMedium medium = forward_medium(0.3);
    const BoxGrid grid{128, 0.9};
    ConvexPolygon tri({{0.45, -0.1}, {0.1, 0.5}, {-0.4, -0.35}});
    const SourceModel f = SourceModel::polynomial_on_polygon(tri, {0, 0}, {1.0, 0.5}, Mat2{});
    const ForwardSolution sol = solve_forward(f, medium, grid);
    CHECK(sol.residual <= 1e-9);

    // far-field split invariant: up is radial, us is tangential
    const FarFieldPattern ff = far_field(f, sol, medium, 64);
    for (std::size_t i = 0; i < ff.angles.size(); ++i) {
        const Vec2 xh = unit_vector(ff.angles[i]);
        CHECK(std::abs(ff.up[i].dot(xh.perp())) <= 1e-13 * (1.0 + ff.up[i].norm()));
        CHECK(std::abs(ff.us[i].dot(xh)) <= 1e-13 * (1.0 + ff.us[i].norm()));
    }

    // refinement stability: far-field energy within a couple percent and
    // off-grid Cauchy data self-convergent (a discontinuous source rules
    // out interior stencil checks; the boundary trace is the clean probe)
    const BoxGrid fine{160, 0.9};
    const ForwardSolution sol2 = solve_forward(f, medium, fine);
    const FarFieldPattern ff2 = far_field(f, sol2, medium, 64);
    const double e1 = ff.energy_p() + ff.energy_s();
    const double e2 = ff2.energy_p() + ff2.energy_s();
    CHECK(std::abs(e1 - e2) <= 0.02 * e2);

    const CauchyData c1 = cauchy_from_solution(f, sol, medium, 0.85, 32);
    const CauchyData c2 = cauchy_from_solution(f, sol2, medium, 0.85, 32);
    double gap = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < c1.angles.size(); ++i) {
        gap = std::max(gap, (CVec2{c1.u[i].x - c2.u[i].x, c1.u[i].y - c2.u[i].y}).norm());
        scale = std::max(scale, c2.u[i].norm());
    }
    CHECK(gap <= 5e-3 * scale);
}

TEST_CASE("far field cross-validates against the radiated field on big circles") {
    const ElasticMedium medium = forward_medium(0.0);
    const BoxGrid grid{128, 0.9};
    const SmoothBump bump{{0.0, 0.0}, 0.3, {1.0, 2.0}};
    const SourceModel f = SourceModel::on_disk(
        bump.center, bump.radius, [bump](Vec2 x) { return bump.value(x); },
        [bump](Vec2 x) { return bump.jacobian(x); }, Regularity::C1alpha, 0.9);
    const ForwardSolution sol = solve_forward(f, medium, grid);
    const FarFieldPattern ff = far_field(f, sol, medium, 8);

    const KupradzeMatrix K(medium);
    const double kp = medium.kp(), ks = medium.ks();
    // u(r x) ~ e^{i kp r}/sqrt(r) up + e^{i ks r}/sqrt(r) us + O(r^{-3/2})
    std::vector<double> radii{10.0, 20.0, 40.0}, gaps;
    const GaussRule rad = gauss_rule(24, 0.0, bump.radius);
    for (double r : radii) {
        double worst = 0.0;
        for (std::size_t d = 0; d < ff.angles.size(); ++d) {
            const Vec2 xh = unit_vector(ff.angles[d]);
            const Vec2 x = r * xh;
            CVec2 uu{0.0, 0.0};
            const int n_ang = 48;
            for (int ir = 0; ir < 24; ++ir)
                for (int ia = 0; ia < n_ang; ++ia) {
                    const double rr = rad.nodes[ir];
                    const double phi = 2.0 * pi * ia / n_ang;
                    const Vec2 y = bump.center + rr * unit_vector(phi);
                    const Vec2 fv = bump.value(y);
                    const CMat2 G = K.eval(x - y);
                    const double w = rad.weights[ir] * rr * (2.0 * pi / n_ang);
                    uu.x += w * (G.a * fv.x + G.b * fv.y);
                    uu.y += w * (G.c * fv.x + G.d * fv.y);
                }
            const cplx pp = std::exp(cplx{0.0, kp * r});
            const cplx ss = std::exp(cplx{0.0, ks * r});
            const CVec2 model{(pp * ff.up[d].x + ss * ff.us[d].x) / std::sqrt(r),
                              (pp * ff.up[d].y + ss * ff.us[d].y) / std::sqrt(r)};
            worst = std::max(worst, (CVec2{uu.x - model.x, uu.y - model.y}).norm() * std::sqrt(r));
        }
        gaps.push_back(worst);
    }
    // gap * sqrt(r) decays like 1/r
    CHECK(gaps[2] < gaps[0]);
    CHECK(loglog_slope(radii, gaps) == doctest::Approx(-1.0).epsilon(0.3));
}

TEST_CASE("manufactured non-radiating source: invisible and recovers its potential") {
    const ElasticMedium medium = forward_medium(0.3);
    const SmoothBump g{{0.05, 0.1}, 0.45, {1.0, -0.8}};
    const SourceModel f0 = make_nonradiating(g, medium, 0.8);
    CHECK_THROWS_AS(make_nonradiating(SmoothBump{{0.5, 0.5}, 0.5, {1, 0}}, medium, 0.8),
                    std::invalid_argument);

    const BoxGrid grid{128, 0.9};
    const ForwardSolution sol = solve_forward(f0, medium, grid);

    // u == g inside the support, 0 outside
    double in_gap = 0.0, in_scale = 0.0, out_max = 0.0;
    for (int iy = 0; iy < grid.M; ++iy)
        for (int ix = 0; ix < grid.M; ++ix) {
            const Vec2 x{grid.coord(ix), grid.coord(iy)};
            const CVec2 u = sol.at(ix, iy);
            const Vec2 gv = g.value(x);
            if ((x - g.center).norm() <= g.radius) {
                in_gap = std::max(in_gap, (CVec2{u.x - gv.x, u.y - gv.y}).norm());
                in_scale = std::max(in_scale, u.norm());
            } else {
                out_max = std::max(out_max, u.norm());
            }
        }
    CHECK(in_gap <= 1e-4 * in_scale);
    CHECK(out_max <= 1e-3 * in_scale);

    // smooth source: interior stencil residual honors the PDE; the bound
    // is fourth-derivative limited, so use a gentler bump and one
    // refinement step
    const SmoothBump g2{{0.0, 0.05}, 0.7, {1.0, -0.8}};
    const SourceModel f2 = make_nonradiating(g2, medium, 0.8);
    const BoxGrid grid256{256, 0.9};
    const ForwardSolution sol256 = solve_forward(f2, medium, grid256);
    const double r256 = forward_stencil_residual(sol256, f2, medium);
    CHECK(r256 <= 1e-2);
    const ForwardSolution sol128b = solve_forward(f2, medium, grid);
    CHECK(r256 < forward_stencil_residual(sol128b, f2, medium));

    // and its far field is dead: compare against a same-energy radiator
    const FarFieldPattern ff0 = far_field(f0, sol, medium, 64);
    double e_f0 = 0.0, e_ref = 0.0;
    for (int iy = 0; iy < grid.M; ++iy)
        for (int ix = 0; ix < grid.M; ++ix) {
            const Vec2 fv = f0.value({grid.coord(ix), grid.coord(iy)});
            e_f0 += fv.norm2();
        }
    ConvexPolygon tri({{0.45, -0.1}, {0.1, 0.5}, {-0.4, -0.35}});
    SourceModel ref = SourceModel::polynomial_on_polygon(tri, {0, 0}, {1.0, 0.0}, Mat2{});
    for (int iy = 0; iy < grid.M; ++iy)
        for (int ix = 0; ix < grid.M; ++ix) {
            const Vec2 fv = ref.value({grid.coord(ix), grid.coord(iy)});
            e_ref += fv.norm2();
        }
    // scale the reference to the same L2 energy
    const double s = std::sqrt(e_f0 / e_ref);
    ref = SourceModel::polynomial_on_polygon(tri, {0, 0}, {s, 0.0}, Mat2{});
    const ForwardSolution sol_ref = solve_forward(ref, medium, grid);
    const FarFieldPattern ff_ref = far_field(ref, sol_ref, medium, 64);
    CHECK(ff0.max_amplitude() <= 1e-3 * ff_ref.max_amplitude());
}

TEST_CASE("far field of a radial source shows the kernel isotropy") {
    // For f = A q(|y|) the p-projection integral is a radial transform, so
    // u_p^inf(xhat).xhat divided by xhat.A is one direction-independent
    // constant; likewise the shear part against the tangential component.
    const ElasticMedium medium = forward_medium(0.0);
    const BoxGrid grid{128, 0.9};
    const SmoothBump bump{{0.0, 0.0}, 0.3, {1.0, 2.0}};
    const SourceModel f = SourceModel::on_disk(
        bump.center, bump.radius, [bump](Vec2 x) { return bump.value(x); },
        [bump](Vec2 x) { return bump.jacobian(x); }, Regularity::C1alpha, 0.9);
    const ForwardSolution sol = solve_forward(f, medium, grid);
    const FarFieldPattern ff = far_field(f, sol, medium, 32);
    cplx ref_p{0, 0}, ref_s{0, 0};
    const Vec2 A = bump.amplitude;
    for (std::size_t i = 0; i < ff.angles.size(); ++i) {
        const Vec2 xh = unit_vector(ff.angles[i]);
        const double ax = xh.dot(A), at = xh.perp().dot(A);
        if (std::abs(ax) > 0.3) {
            const cplx cp = ff.up[i].dot(xh) / ax;
            if (ref_p == cplx{0, 0}) ref_p = cp;
            CHECK(std::abs(cp - ref_p) <= 1e-6 * std::abs(ref_p));
        }
        if (std::abs(at) > 0.3) {
            const cplx cs = ff.us[i].dot(xh.perp()) / at;
            if (ref_s == cplx{0, 0}) ref_s = cs;
            CHECK(std::abs(cs - ref_s) <= 1e-6 * std::abs(ref_s));
        }
    }
}

TEST_CASE("zero bump produces the zero source") {
    const ElasticMedium medium = forward_medium(0.3);
    const SmoothBump g{{0.0, 0.0}, 0.3, {0.0, 0.0}};
    const SourceModel f0 = make_nonradiating(g, medium, 0.8);
    CHECK(f0.value({0.1, 0.05}).norm() == 0.0);
    CHECK(f0.value({0.0, 0.0}).norm() == 0.0);
}

TEST_CASE("Cauchy data export/import round trip") {
    const ElasticMedium medium = forward_medium(0.0);
    ConvexPolygon tri({{0.3, -0.05}, {0.05, 0.3}, {-0.25, -0.2}});
    const CauchyData cd = cauchy_from_polygon_source(tri, {1.0, 2.0}, medium, 0.6, 32, 8);
    cd.export_csv("/tmp/ewave_cauchy.csv");
    const CauchyData back = CauchyData::load_csv("/tmp/ewave_cauchy.csv");
    REQUIRE(back.angles.size() == cd.angles.size());
    CHECK(back.radius == doctest::Approx(cd.radius));
    for (std::size_t i = 0; i < cd.angles.size(); ++i) {
        CHECK(std::abs(back.u[i].x - cd.u[i].x) <= 1e-15);
        CHECK(std::abs(back.traction[i].y - cd.traction[i].y) <= 1e-15);
    }
}
