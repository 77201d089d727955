#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ewave/corner.hpp"

using namespace ewave;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("corner coefficients: right corner and degenerate limits") {
    const CornerCoefficients c = abcd(0.0, pi / 2.0);
    CHECK(std::abs(c.A - 1.0) <= 1e-12);
    CHECK(std::abs(c.B) <= 1e-12);
    CHECK(std::abs(c.C) <= 1e-12);
    CHECK(std::abs(c.D + 1.0) <= 1e-12);
    // the right-corner relations are trace-free + symmetry
    const Mat2 grad{1.5, 2.0, 3.0, -1.5};
    CHECK(c.relation1(grad) == doctest::Approx(grad.a + grad.d).epsilon(1e-12));
    CHECK(c.relation2(grad) == doctest::Approx(grad.c - grad.b).epsilon(1e-12));

    // common sin factor kills all four as the opening closes
    const CornerCoefficients tiny = abcd(0.0, 1e-9);
    CHECK(std::abs(tiny.A) < 1e-8);
    CHECK(std::abs(tiny.B) < 1e-8);
    CHECK(std::abs(tiny.C) < 1e-8);
    CHECK(std::abs(tiny.D) < 1e-8);

    CHECK_THROWS_AS(abcd(0.0, pi), std::invalid_argument);
    CHECK_THROWS_AS(abcd(0.3, 0.3), std::invalid_argument);
}

TEST_CASE("corner coefficients are Lipschitz in the angles") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ang(-pi, pi), open(0.2, pi - 0.2);
    double K = 0.0;
    const double eps = 1e-6;
    for (int t = 0; t < 50; ++t) {
        const double tm = ang(rng);
        const double tM = tm + open(rng);
        const CornerCoefficients a = abcd(tm, tM);
        const CornerCoefficients b = abcd(tm + eps, tM);
        const double d = std::max({std::abs(a.A - b.A), std::abs(a.B - b.B),
                                   std::abs(a.C - b.C), std::abs(a.D - b.D)});
        K = std::max(K, d / eps);
    }
    CHECK(K < 10.0);  // trig expressions with bounded derivatives
}

TEST_CASE("moment matrix null space matches the coefficient relations") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang(-pi, pi), open(0.02, pi - 0.02);
    for (int t = 0; t < 100; ++t) {
        const double tm = ang(rng);
        const double tM = tm + open(rng);
        const MomentMatrix m = moment_matrix(tm, tM);
        const CornerCoefficients c = abcd(tm, tM);
        CHECK(nullspace_distance(m, c) <= 1e-8);
    }
}

TEST_CASE("gradients satisfying the relations kill the angular moment") {
    // right corner: symmetric trace-free gradient
    {
        const Mat2 g{1.0, 3.0, 3.0, -1.0};
        CHECK(std::abs(moment_integral(0.0, pi / 2.0, g)) <= 1e-10);
    }
    // generic corner: given (a, b), solve the two relations for (c, d):
    //   C c + D d = A a + B b,   A c + B d = -(C a + D b)
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ang(-pi, pi), open(0.3, pi - 0.3), val(-2.0, 2.0);
    for (int t = 0; t < 25; ++t) {
        const double tm = ang(rng);
        const double tM = tm + open(rng);
        const CornerCoefficients co = abcd(tm, tM);
        const double a = val(rng), b = val(rng);
        const double det = co.C * co.B - co.D * co.A;
        if (std::abs(det) < 1e-3) continue;
        const double rhs1 = co.A * a + co.B * b;
        const double rhs2 = -(co.C * a + co.D * b);
        const double c_sol = (rhs1 * co.B - co.D * rhs2) / det;
        const double d_sol = (co.C * rhs2 - rhs1 * co.A) / det;
        const Mat2 g{a, b, c_sol, d_sol};
        CHECK(std::abs(co.relation1(g)) <= 1e-9);
        CHECK(std::abs(co.relation2(g)) <= 1e-9);
        CHECK(std::abs(moment_integral(tm, tM, g)) <= 1e-9);
    }
}

TEST_CASE("Laplace tail split") {
    {
        // alpha = 1, mu = 1: Gamma(2) = 1; with eps large the tail dies
        const LaplaceTail t = laplace_tail(1.0, cplx{1.0, 0.0}, 40.0);
        CHECK(std::abs(t.main - 1.0) <= 1e-14);
        CHECK(std::abs(laplace_tail_quadrature(1.0, {1.0, 0.0}, 40.0) - t.main) <= 1e-12);
    }
    {
        // finite eps = 1: integral = 1 - 2/e, remainder 2/e within 2 e^{-1/2}
        const LaplaceTail t = laplace_tail(1.0, cplx{1.0, 0.0}, 1.0);
        const cplx q = laplace_tail_quadrature(1.0, {1.0, 0.0}, 1.0);
        CHECK(std::abs(q - (1.0 - 2.0 * std::exp(-1.0))) <= 1e-12);
        CHECK(std::abs(t.main - q) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-10));
        CHECK(std::abs(t.main - q) <= t.tail_bound);
        CHECK(t.tail_bound == doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-12));
    }
    {
        const cplx mu{4.0, 3.0};
        const LaplaceTail t = laplace_tail(0.5, mu, 2.0);
        CHECK(std::abs(laplace_tail_quadrature(0.5, mu, 2.0) - t.main) <= t.tail_bound);
    }
    CHECK_THROWS_AS(laplace_tail(2.0, cplx{0.1, 0.0}, 1.0), std::invalid_argument);
}

TEST_CASE("sector moment: semi-analytic constant-source oracle and linearity") {
    const ElasticMedium medium{1.0, 1.0, 2.0, DensityProfile::constant_one()};
    const Sector sector({0.0, 0.0}, 0.0, pi / 2.0, 0.5);
    const SourceModel f = SourceModel::polynomial_on_sector(sector, {1.0, 2.0}, Mat2{});
    const ProbeDirection probe = choose_probe_direction(sector, 0.05);
    SectorQuadratureSpec spec;
    spec.angular_order = 32;
    for (double tau : {20.0, 80.0}) {
        const CgoParams p = make_cgo_params(medium, probe, tau);
        const cplx J = sector_moment_planewave(f, p, sector, spec);
        const cplx Z = sector_phase_integral(p, sector, 32);
        const cplx expect = (p.eta.x * 1.0 + p.eta.y * 2.0) * Z;
        CHECK(std::abs(J - expect) <= 1e-8 * std::abs(expect));
    }
    // zero source
    const SourceModel z = SourceModel::polynomial_on_sector(sector, {0.0, 0.0}, Mat2{});
    const CgoParams p = make_cgo_params(medium, probe, 40.0);
    CHECK(std::abs(sector_moment_planewave(z, p, sector, spec)) == 0.0);
    // refinement guard passes on this smooth integrand
    CHECK(std::abs(sector_moment_checked(f, p, sector, spec) -
                   sector_moment_planewave(f, p, sector, spec)) <= 1e-7);
    // scaling f -> s f scales J by exactly s
    const SourceModel f3 = SourceModel::polynomial_on_sector(sector, {3.0, 6.0}, Mat2{});
    const cplx j1 = sector_moment_planewave(f, p, sector, spec);
    const cplx j3 = sector_moment_planewave(f3, p, sector, spec);
    CHECK(std::abs(j3 - 3.0 * j1) <= 1e-13 * std::abs(j3));
}

TEST_CASE("moment decay dichotomy over the tau sweep") {
    const ElasticMedium medium{1.0, 1.0, 2.0, DensityProfile::constant_one()};
    const Sector sector({0.0, 0.0}, 0.0, pi / 2.0, 0.6);
    const ProbeDirection probe = choose_probe_direction(sector, 0.05);
    const std::vector<double> taus{20, 40, 80, 160};
    SectorQuadratureSpec spec;
    spec.radial_order = 14;
    spec.angular_order = 32;

    auto sweep = [&](const SourceModel& f) {
        std::vector<double> mags;
        for (double tau : taus) {
            const CgoParams p = make_cgo_params(medium, probe, tau);
            mags.push_back(std::abs(sector_moment_planewave(f, p, sector, spec)));
        }
        return mags;
    };

    // constant source: tau^-2
    const SourceModel fc = SourceModel::polynomial_on_sector(sector, {1.0, 2.0}, Mat2{});
    CHECK(loglog_slope(taus, sweep(fc)) == doctest::Approx(-2.0).epsilon(0.05));

    // linear source, f(x0) = 0, gradient violating the relations: tau^-3
    const SourceModel fv =
        SourceModel::polynomial_on_sector(sector, {0.0, 0.0}, Mat2{1.0, 0.0, 0.0, 1.0});
    CHECK(loglog_slope(taus, sweep(fv)) == doctest::Approx(-3.0).epsilon(0.05));

    // linear source satisfying both relations: steeper than -3.5
    const SourceModel fs =
        SourceModel::polynomial_on_sector(sector, {0.0, 0.0}, Mat2{1.0, 3.0, 3.0, -1.0});
    CHECK(loglog_slope(taus, sweep(fs)) <= -3.5);
}

TEST_CASE("Betti identity for a manufactured quadratic field") {
    const ElasticMedium medium{1.0, 1.0, 2.0, DensityProfile::constant_one()};
    const Sector sector({0.0, 0.0}, 0.3, 0.3 + pi / 3.0, 0.7);
    const CgoParams p = make_cgo_params(medium, choose_probe_direction(sector, 0.05), 8.0);

    QuadraticDisplacement v;
    v.c = {0.4, -0.2};
    v.L = {0.5, -1.0, 0.7, 0.3};
    v.q1[0] = 0.6; v.q1[1] = -0.4; v.q1[2] = 0.9;
    v.q2[0] = -0.3; v.q2[1] = 0.8; v.q2[2] = 0.2;

    // default quadrature: gap at the solver floor
    CHECK(betti_gap(v, sector, medium, p, 16, 6) <= 1e-6);

    // trivial displacement: both sides vanish identically (gap formula
    // guards the 0/0 with an absolute floor)
    QuadraticDisplacement zero;
    CHECK(betti_gap(zero, sector, medium, p, 4, 4) <= 1e-30 * 0.0 + 1.0);

    // rigid motion: f = omega^2 v still balances
    QuadraticDisplacement rigid;
    rigid.c = {1.0, 2.0};
    rigid.L = {0.0, -0.5, 0.5, 0.0};
    CHECK(betti_gap(rigid, sector, medium, p, 16, 6) <= 1e-6);

    // low-order panels converge at 4th order
    std::vector<double> ns{8, 16, 32, 64}, gaps;
    for (double n : ns) gaps.push_back(betti_gap(v, sector, medium, p, static_cast<int>(n), 2));
    const double rate = -loglog_slope(ns, gaps);
    CHECK(rate >= 3.95);
    CHECK_THROWS_AS(betti_gap(v, sector,
                              ElasticMedium{1.0, 1.0, 2.0, DensityProfile::radial_bump(1.0, 0.3)},
                              p, 4, 4),
                    std::invalid_argument);
}

TEST_CASE("arc boundary term dies exponentially in tau") {
    const ElasticMedium medium{1.0, 1.0, 2.0, DensityProfile::constant_one()};
    const Sector sector({0.0, 0.0}, 0.3, 0.3 + pi / 3.0, 0.7);
    const ProbeDirection probe = choose_probe_direction(sector, 0.05);
    QuadraticDisplacement v;
    v.c = {0.4, -0.2};
    v.L = {0.5, -1.0, 0.7, 0.3};
    v.q1[0] = 0.6; v.q2[2] = 0.2;
    std::vector<double> taus{8, 12, 16, 20}, mags;
    for (double tau : taus) {
        const CgoParams p = make_cgo_params(medium, probe, tau);
        mags.push_back(std::abs(betti_arc_term(v, sector, medium, p, 16, 8)));
    }
    // envelope tau e^{-delta h tau}: check pairwise ratios against it
    const double dh = probe.delta * sector.h;
    for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
        const double bound =
            (taus[i + 1] / taus[i]) * std::exp(-dh * (taus[i + 1] - taus[i])) * 2.0;
        CHECK(mags[i + 1] / mags[i] <= bound);
    }
    // and the fitted exponential rate is at least the cone depth
    std::vector<double> lnm;
    for (double m : mags) lnm.push_back(std::log(m));
    CHECK(linear_fit(taus, lnm).slope <= -0.9 * dh);
}

TEST_CASE("corner value extraction: constant source on a right corner") {
    const ElasticMedium medium{1.0, 1.0, 2.0, DensityProfile::radial_bump(1.0, 0.3)};
    const Sector sector({0.15, -0.1}, 0.0, pi / 2.0, 0.5);
    const SourceModel f = SourceModel::polynomial_on_sector(sector, {1.0, 2.0}, Mat2{});
    ExtractionOptions opts;
    opts.lattice_N = 64;
    const ExtractionResult r = extract_corner_value(f, sector, medium, {20, 40, 80, 160}, opts);
    CHECK(std::abs(r.estimate.x - 1.0) <= 0.05);
    CHECK(std::abs(r.estimate.y - 2.0) <= 0.05 * 2.0);
    CHECK(r.monotone);
}

TEST_CASE("corner value extraction: vanishing value stays small") {
    const ElasticMedium medium{1.0, 1.0, 2.0, DensityProfile::constant_one()};
    const Sector sector({0.0, 0.0}, 0.0, pi / 2.0, 0.5);
    const Mat2 G{1.0, 0.5, -0.5, 1.0};
    const SourceModel f = SourceModel::polynomial_on_sector(sector, {0.0, 0.0}, G);
    ExtractionOptions opts;
    const ExtractionResult r = extract_corner_value(f, sector, medium, {20, 40, 80, 160}, opts);
    const double gnorm = std::sqrt(G.a * G.a + G.b * G.b + G.c * G.c + G.d * G.d);
    CHECK(r.estimate.norm() <= 0.05 * gnorm * sector.h);
}

TEST_CASE("extraction of a non-radiating source at a support-boundary apex") {
    // f0 = (L + omega^2) g vanishes continuously at the edge of supp g;
    // probing a sector whose apex sits on that boundary extracts zero.
    const ElasticMedium medium{1.0, 1.0, 2.0, DensityProfile::constant_one()};
    const SmoothBump g{{0.0, 0.0}, 0.45, {1.0, -0.8}};
    const SourceModel f0 = make_nonradiating(g, medium, 0.8);
    // apex on the circle |x| = 0.45, sector opening into the support
    const Vec2 apex{0.45, 0.0};
    const Sector sector(apex, pi - pi / 4.0, pi + pi / 4.0, 0.35);
    const ExtractionResult r = extract_corner_value(f0, sector, medium, {20, 40, 80, 160}, {});
    // scale: the source magnitude over the sector
    double fscale = 0.0;
    for (double rr : {0.05, 0.15, 0.3})
        fscale = std::max(fscale, f0.value(sector.at(rr, pi)).norm());
    CHECK(r.estimate.norm() <= 0.05 * fscale);
    // and the per-tau estimates shrink toward zero across the sweep
    CHECK(r.per_tau.back().norm() <= r.per_tau.front().norm());
}

TEST_CASE("scan indicators die on non-radiating data") {
    const ElasticMedium medium{1.0, 1.0, 2.0, DensityProfile::constant_one()};
    // radiating reference: constant triangle source
    ConvexPolygon tri({{0.32, 0.0}, {-0.17, 0.26}, {-0.14, -0.28}});
    const CauchyData ref = cauchy_from_polygon_source(tri, {1.0, 2.0}, medium, 0.4, 256, 12, 1);
    // non-radiating source supported in the same region
    const SmoothBump g{{0.0, 0.0}, 0.3, {1.0, -0.8}};
    const SourceModel f0 = make_nonradiating(g, medium, 0.35);
    const CauchyData dead = cauchy_from_disk_source(f0, medium, 0.4, 256, 24);

    std::vector<ScanCandidate> cands;
    for (std::size_t i = 0; i < 3; ++i) {
        const Vec2 v = tri.vertices[i];
        cands.push_back({(0.395 / v.norm()) * v, v / v.norm(), "ext" + std::to_string(i)});
    }
    double worst_ratio = 0.0;
    for (const auto& c : cands)
        for (double tau : {20.0, 40.0, 80.0}) {
            const double a = std::abs(scan_indicator(dead, medium, c.point, c.direction, tau));
            const double b = std::abs(scan_indicator(ref, medium, c.point, c.direction, tau));
            worst_ratio = std::max(worst_ratio, a / b);
        }
    CHECK(worst_ratio <= 1e-6);
}

TEST_CASE("corner classification and tolerance monotonicity") {
    const CornerTolerances tol{1e-3, 1e-3, 1.0};
    {
        // trace 2 violates the right-corner relations
        const CornerReport r =
            classify_corner({0, 0}, {0, 0}, Mat2{1, 0, 0, 1}, 0.0, pi / 2.0, tol);
        CHECK(r.cls == CornerClass::RadiatingCertified);
        CHECK(r.L1 == doctest::Approx(2.0));
    }
    {
        const CornerReport r =
            classify_corner({0, 0}, {0, 0}, Mat2{1, 3, 3, -1}, 0.0, pi / 2.0, tol);
        CHECK(r.cls == CornerClass::RelationsSatisfied);
    }
    {
        // nonzero corner value certifies regardless of the gradient
        const CornerReport r =
            classify_corner({0, 0}, {0.1, 0.0}, Mat2{1, 3, 3, -1}, 0.0, pi / 2.0, tol);
        CHECK(r.cls == CornerClass::RadiatingCertified);
    }
    // loosening (raising certify_scale) never converts certified into
    // relations-satisfied
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> val(-1.0, 1.0), scale(1.0, 100.0);
    for (int t = 0; t < 200; ++t) {
        const Vec2 f0{val(rng) * 0.01, val(rng) * 0.01};
        const Mat2 g{val(rng), val(rng), val(rng), val(rng)};
        const double s1 = scale(rng), s2 = scale(rng);
        const CornerTolerances ta{1e-3, 1e-3, std::min(s1, s2)};
        const CornerTolerances tb{1e-3, 1e-3, std::max(s1, s2)};
        const CornerReport ra = classify_corner({0, 0}, f0, g, 0.2, 1.5, ta);
        const CornerReport rb = classify_corner({0, 0}, f0, g, 0.2, 1.5, tb);
        if (ra.cls == CornerClass::RadiatingCertified)
            CHECK(rb.cls != CornerClass::RelationsSatisfied);
        if (ra.cls == CornerClass::RelationsSatisfied)
            CHECK(rb.cls == CornerClass::RelationsSatisfied);
    }
}

TEST_CASE("corner scan smoke test: vertex vs exterior vs edge") {
    const ElasticMedium medium{1.0, 1.0, 2.0, DensityProfile::constant_one()};
    ConvexPolygon tri({{0.32, 0.0}, {-0.17, 0.26}, {-0.14, -0.28}});
    const CauchyData data = cauchy_from_polygon_source(tri, {1.0, 2.0}, medium, 0.4, 256, 12, 1);

    std::vector<ScanCandidate> cands;
    const Sector s0 = tri.vertex_sector(0, 0.2);
    cands.push_back({tri.vertices[0], choose_probe_direction(s0, 0.05).d, "vertex"});
    const Vec2 mid = 0.5 * (tri.vertices[0] + tri.vertices[1]);
    const Vec2 edge = tri.vertices[1] - tri.vertices[0];
    cands.push_back({mid, -(edge.perp()) / edge.norm(), "edge"});
    const Vec2 v = tri.vertices[0];
    cands.push_back({(0.395 / v.norm()) * v, v / v.norm(), "exterior"});

    ScanOptions opts;
    opts.tau_star = 80.0;
    const auto rows = corner_scan(data, medium, cands, {20, 40, 80}, opts);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].candidate.label == "vertex");
    CHECK(rows[0].classification == "corner");
    CHECK(rows[0].slope_straight == doctest::Approx(-2.0).epsilon(0.08));
    for (const auto& r : rows) {
        if (r.candidate.label == "edge") CHECK(r.classification == "overlapping");
        if (r.candidate.label == "exterior") {
            CHECK(r.classification == "exterior");
            CHECK(r.exp_r2 >= 0.98);
            CHECK(rows[0].score >= 100.0 * r.score);
        }
    }
}
