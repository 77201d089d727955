#include "ewave/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace ewave {

PeriodicField apply_P(const SpectralGrid& grid, const SpectralMultiplier& mult,
                      const PeriodicField& f) {
    PeriodicField out = grid.make_field();
    grid.apply_multiplier(f, mult.values(), out);
    return out;
}

PeriodicField apply_P_derivative(const SpectralGrid& grid, const SpectralMultiplier& mult,
                                 const PeriodicField& f, int axis) {
    const int M = grid.M();
    std::vector<cplx> coeffs;
    grid.to_coeffs(f, coeffs);
    const auto& c = mult.values();
    for (int ky = 0; ky < M; ++ky)
        for (int kx = 0; kx < M; ++kx) {
            const std::size_t i = static_cast<std::size_t>(ky) * M + kx;
            const double a = axis == 0 ? grid.alpha1_of_bin(kx) : grid.alpha2_of_bin(ky);
            coeffs[i] *= c[i] * cplx{0.0, a};
        }
    PeriodicField out = grid.make_field();
    grid.to_samples(coeffs, out);
    return out;
}

SeriesEvaluator::SeriesEvaluator(const HalfShiftLattice& lattice, double tau, double k,
                                 double window_start, int window_power)
    : lattice_(lattice), tau_(tau), k_(k), window_start_(window_start),
      window_power_(window_power) {
    root_ = std::sqrt(tau * tau + k * k);
    cutoff_ = lattice_.N() * lattice_.step();
}

double SeriesEvaluator::window(double abs_alpha) const {
    const double t = abs_alpha / cutoff_;
    if (t <= window_start_) return 1.0;
    if (t >= 1.0) return 0.0;
    const double u = (t - window_start_) / (1.0 - window_start_);
    return std::exp(-16.0 * std::pow(u, window_power_));
}

cplx SeriesEvaluator::g(Vec2 x) const {
    const int N = lattice_.N();
    const double inv2R = 1.0 / (2.0 * lattice_.R_prime());
    cplx acc = 0.0;
    for (int n = -N; n < N; ++n) {
        const double a2 = lattice_.alpha2(n);
        for (int m = -N; m < N; ++m) {
            const double a1 = lattice_.alpha1(m);
            const double w = window(std::hypot(a1, a2));
            if (w == 0.0) continue;
            const cplx denom{a1 * a1 + a2 * a2 + 2.0 * root_ * a2, 2.0 * tau_ * a1};
            acc += (w / denom) * std::exp(cplx{0.0, a1 * x.x + a2 * x.y});
        }
    }
    return acc * inv2R;
}

cplx SeriesEvaluator::g_reflected(Vec2 x) const {
    const int N = lattice_.N();
    const double inv2R = 1.0 / (2.0 * lattice_.R_prime());
    cplx acc = 0.0;
    for (int n = -N; n < N; ++n) {
        // alpha -> -alpha reindexing: m' = -m - 1 stays inside [-N, N).
        const double a2 = -lattice_.alpha2(n);
        for (int m = -N; m < N; ++m) {
            const double a1 = -lattice_.alpha1(m);
            const double w = window(std::hypot(a1, a2));
            if (w == 0.0) continue;
            const cplx denom{a1 * a1 + a2 * a2 + 2.0 * root_ * a2, 2.0 * tau_ * a1};
            acc += (w / denom) * std::exp(cplx{0.0, a1 * x.x + a2 * x.y});
        }
    }
    return acc * inv2R;
}

cplx SeriesEvaluator::h(Vec2 x) const {
    if (x.norm() < 1e-14)
        throw std::domain_error("SeriesEvaluator: h_xi is singular at the origin");
    const cplx phase = std::exp(cplx{-tau_ * x.x, root_ * x.y});
    return phase * g(x);
}

}  // namespace ewave
