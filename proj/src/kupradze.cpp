#include "ewave/kupradze.hpp"

#include <cmath>
#include <numbers>

namespace ewave {

cplx hankel1_0(double x) { return {std::cyl_bessel_j(0, x), std::cyl_neumann(0, x)}; }
cplx hankel1_1(double x) { return {std::cyl_bessel_j(1, x), std::cyl_neumann(1, x)}; }

namespace {

// Radial pieces of the Hessian of H0(k r):
//   d_i d_j H0(kr) = d_ij a_k(r) + zhat_i zhat_j b_k(r),
//   a_k = -k H1(kr)/r,  b_k = 2k H1(kr)/r - k^2 H0(kr).
struct Radial {
    cplx a, b, da, db;  // values and r-derivatives
};

Radial radial_parts(double k, double r) {
    const cplx h0 = hankel1_0(k * r);
    const cplx h1 = hankel1_1(k * r);
    Radial out;
    out.a = -k * h1 / r;
    out.b = 2.0 * k * h1 / r - k * k * h0;
    out.da = -k * k * h0 / r + 2.0 * k * h1 / (r * r);
    out.db = 2.0 * k * k * h0 / r - 4.0 * k * h1 / (r * r) + k * k * k * h1;
    return out;
}

}  // namespace

KupradzeMatrix::KupradzeMatrix(const ElasticMedium& medium)
    : lambda_(medium.lambda), mu_(medium.mu), omega_(medium.omega),
      kp_(medium.kp()), ks_(medium.ks()) {}

CMat2 KupradzeMatrix::eval(Vec2 z) const {
    const double r = z.norm();
    const Vec2 zh = z / r;
    const cplx i4{0.0, 0.25};
    const double om2 = omega_ * omega_;
    const Radial s = radial_parts(ks_, r);
    const Radial p = radial_parts(kp_, r);
    const cplx diag = -i4 / mu_ * hankel1_0(ks_ * r) - i4 / om2 * (s.a - p.a);
    const cplx bb = -i4 / om2 * (s.b - p.b);
    CMat2 g;
    g.a = diag + bb * zh.x * zh.x;
    g.b = bb * zh.x * zh.y;
    g.c = bb * zh.y * zh.x;
    g.d = diag + bb * zh.y * zh.y;
    return g;
}

std::array<CMat2, 2> KupradzeMatrix::grad(Vec2 z) const {
    const double r = z.norm();
    const Vec2 zh = z / r;
    const cplx i4{0.0, 0.25};
    const double om2 = omega_ * omega_;
    const Radial s = radial_parts(ks_, r);
    const Radial p = radial_parts(kp_, r);
    // Gamma_ij = d_ij Ad(r) + zhat_i zhat_j Bd(r)
    const cplx dAd = i4 / mu_ * ks_ * hankel1_1(ks_ * r) - i4 / om2 * (s.da - p.da);
    const cplx Bd = -i4 / om2 * (s.b - p.b);
    const cplx dBd = -i4 / om2 * (s.db - p.db);
    const double zv[2] = {zh.x, zh.y};
    std::array<CMat2, 2> out;
    for (int k = 0; k < 2; ++k) {
        cplx m[2][2];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                cplx t = (i == j ? dAd * zv[k] : cplx{0.0, 0.0});
                t += dBd * zv[i] * zv[j] * zv[k];
                t += Bd / r * ((i == k ? zv[j] : cplx{0.0, 0.0}) +
                               (j == k ? zv[i] : cplx{0.0, 0.0}) -
                               2.0 * zv[i] * zv[j] * zv[k]);
                m[i][j] = t;
            }
        out[k].a = m[0][0];
        out[k].b = m[0][1];
        out[k].c = m[1][0];
        out[k].d = m[1][1];
    }
    return out;
}

cplx KupradzeMatrix::farfield_cp() const {
    const cplx pref = -I / (4.0 * (lambda_ + 2.0 * mu_));
    return pref * std::sqrt(2.0 / (std::numbers::pi * kp_)) *
           std::exp(cplx{0.0, -std::numbers::pi / 4.0});
}

cplx KupradzeMatrix::farfield_cs() const {
    const cplx pref = -I / (4.0 * mu_);
    return pref * std::sqrt(2.0 / (std::numbers::pi * ks_)) *
           std::exp(cplx{0.0, -std::numbers::pi / 4.0});
}

}  // namespace ewave
