#include "ewave/medium.hpp"

#include <algorithm>
#include <cmath>

namespace ewave {

DensityProfile DensityProfile::constant_one() {
    DensityProfile p;
    p.kind_ = Kind::ConstantOne;
    return p;
}

DensityProfile DensityProfile::radial_bump(double R, double amplitude) {
    if (!(R > 0.0)) throw std::invalid_argument("radial_bump: R must be positive");
    if (!(amplitude > -1.0)) throw std::invalid_argument("radial_bump: amplitude must exceed -1");
    DensityProfile p;
    p.kind_ = Kind::RadialBump;
    p.R_ = R;
    p.amplitude_ = amplitude;
    return p;
}

DensityProfile DensityProfile::grid_sampled(double R, int n, std::vector<double> samples) {
    if (!(R > 0.0) || n < 2) throw std::invalid_argument("grid_sampled: bad grid");
    if (samples.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("grid_sampled: sample count mismatch");
    for (double s : samples)
        if (!(s > 0.0)) throw std::invalid_argument("grid_sampled: density must be positive");
    DensityProfile p;
    p.kind_ = Kind::GridSampled;
    p.R_ = R;
    p.n_ = n;
    p.samples_ = std::make_shared<const std::vector<double>>(std::move(samples));
    return p;
}

DensityProfile DensityProfile::shifted(Vec2 x0) const {
    DensityProfile p = *this;
    p.shift_ = shift_ + x0;
    return p;
}

double DensityProfile::value(Vec2 x) const {
    x = x + shift_;
    switch (kind_) {
        case Kind::ConstantOne:
            return 1.0;
        case Kind::RadialBump: {
            const double t = x.norm2() / (R_ * R_);
            if (t >= 1.0) return 1.0;
            const double s = 1.0 - t;
            return 1.0 + amplitude_ * s * s * s;
        }
        case Kind::GridSampled: {
            const auto& v = *samples_;
            const double hx = 2.0 * R_ / (n_ - 1);
            double fx = (x.x + R_) / hx, fy = (x.y + R_) / hx;
            if (fx < 0.0 || fy < 0.0 || fx > n_ - 1 || fy > n_ - 1) return 1.0;
            const int i = std::min(static_cast<int>(fx), n_ - 2);
            const int j = std::min(static_cast<int>(fy), n_ - 2);
            const double ax = fx - i, ay = fy - j;
            auto at = [&](int a, int b) { return v[static_cast<std::size_t>(b) * n_ + a]; };
            return (1 - ax) * (1 - ay) * at(i, j) + ax * (1 - ay) * at(i + 1, j) +
                   (1 - ax) * ay * at(i, j + 1) + ax * ay * at(i + 1, j + 1);
        }
    }
    return 1.0;
}

Vec2 DensityProfile::gradient(Vec2 x) const {
    x = x + shift_;
    switch (kind_) {
        case Kind::ConstantOne:
            return {0.0, 0.0};
        case Kind::RadialBump: {
            const double t = x.norm2() / (R_ * R_);
            if (t >= 1.0) return {0.0, 0.0};
            const double s = 1.0 - t;
            return (-6.0 * amplitude_ * s * s / (R_ * R_)) * x;
        }
        case Kind::GridSampled: {
            // Centered differences of the interpolant; adequate for the
            // import/export path, not used by the spectral machinery.
            const double h = R_ / (n_ - 1);
            const Vec2 y = x - shift_;
            return {(value(y + Vec2{h, 0}) - value(y - Vec2{h, 0})) / (2 * h),
                    (value(y + Vec2{0, h}) - value(y - Vec2{0, h})) / (2 * h)};
        }
    }
    return {0.0, 0.0};
}

ElasticMedium::ElasticMedium(double lambda_, double mu_, double omega_, DensityProfile rho_)
    : lambda(lambda_), mu(mu_), omega(omega_), rho(std::move(rho_)) {
    if (!(mu > 0.0 && lambda + mu > 0.0))
        throw std::invalid_argument("ElasticMedium: strong convexity requires mu > 0 and lambda + mu > 0");
    if (!(omega > 0.0)) throw std::invalid_argument("ElasticMedium: omega must be positive");
}

std::pair<double, double> wavenumbers(const ElasticMedium& medium) {
    return {medium.kp(), medium.ks()};
}

std::pair<CVec2, CVec2> far_field_split(CVec2 u_inf, Vec2 x_hat) {
    if (std::abs(x_hat.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("far_field_split: direction must be a unit vector");
    const Vec2 t = x_hat.perp();
    const cplx up = u_inf.dot(x_hat);
    const cplx us = u_inf.dot(t);
    return {CVec2{up * x_hat.x, up * x_hat.y}, CVec2{us * t.x, us * t.y}};
}

}  // namespace ewave
