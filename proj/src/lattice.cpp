#include "ewave/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ewave {

HalfShiftLattice::HalfShiftLattice(double R_prime, int N) : R_prime_(R_prime), N_(N) {
    if (!(R_prime > 0.0)) throw std::invalid_argument("HalfShiftLattice: R' must be positive");
    if (N < 1) throw std::invalid_argument("HalfShiftLattice: N must be at least 1");
    step_ = std::numbers::pi / R_prime_;
}

std::vector<Vec2> HalfShiftLattice::points() const {
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(size()) * size());
    for (int n = -N_; n < N_; ++n)
        for (int m = -N_; m < N_; ++m) pts.push_back({alpha1(m), alpha2(n)});
    return pts;
}

HalfShiftLattice build_lattice(double R_prime, int N) { return {R_prime, N}; }

SpectralMultiplier::SpectralMultiplier(const HalfShiftLattice& lattice, double tau, double k)
    : tau_(tau), k_(k) {
    if (!(tau > 0.0) || !(k > 0.0))
        throw std::invalid_argument("SpectralMultiplier: tau and k must be positive");
    const int M = lattice.size();
    const double bound = std::numbers::pi * tau / lattice.R_prime();
    xi2_ = cplx{0.0, std::sqrt(tau * tau + k * k)};
    c_.resize(static_cast<std::size_t>(M) * M);
    abs_alpha_.resize(c_.size());
    const double root = std::sqrt(tau * tau + k * k);
    for (int ky = 0; ky < M; ++ky) {
        const double a2 = lattice.alpha2(lattice.signed_index(ky));
        for (int kx = 0; kx < M; ++kx) {
            const double a1 = lattice.alpha1(lattice.signed_index(kx));
            // alpha.alpha - 2i xi.alpha with xi = (-tau, i root):
            // real part alpha^2 + 2 root alpha2, imaginary part 2 tau alpha1.
            const cplx denom{a1 * a1 + a2 * a2 + 2.0 * root * a2, 2.0 * tau * a1};
            if (!(std::abs(denom) >= bound * (1.0 - 1e-12)))
                throw std::runtime_error("SpectralMultiplier: denominator bound violated");
            const std::size_t idx = static_cast<std::size_t>(ky) * M + kx;
            c_[idx] = 1.0 / denom;
            abs_alpha_[idx] = std::hypot(a1, a2);
        }
    }
}

double SpectralMultiplier::norm_P() const {
    double m = 0.0;
    for (const auto& c : c_) m = std::max(m, std::abs(c));
    return m;
}

double SpectralMultiplier::norm_gradP() const {
    double m = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) m = std::max(m, abs_alpha_[i] * std::abs(c_[i]));
    return m;
}

double SpectralMultiplier::norm_grad2P() const {
    double m = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i)
        m = std::max(m, abs_alpha_[i] * abs_alpha_[i] * std::abs(c_[i]));
    return m;
}

}  // namespace ewave
