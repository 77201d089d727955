#include "ewave/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace ewave {

cplx interpolate_bicubic(const PeriodicField& f, Vec2 xp) {
    const int M = f.M;
    const double h = 2.0 * f.R_prime / M;
    auto fetch = [&](int ix, int iy) -> cplx {
        double s = 1.0;
        while (ix < 0) {
            ix += M;
            s = -s;
        }
        while (ix >= M) {
            ix -= M;
            s = -s;
        }
        iy = ((iy % M) + M) % M;
        return s * f.at(ix, iy);
    };
    auto weights = [](double t, double w[4]) {
        const double t2 = t * t, t3 = t2 * t;
        w[0] = 0.5 * (-t3 + 2 * t2 - t);
        w[1] = 0.5 * (3 * t3 - 5 * t2 + 2);
        w[2] = 0.5 * (-3 * t3 + 4 * t2 + t);
        w[3] = 0.5 * (t3 - t2);
    };
    const double ux = (xp.x + f.R_prime) / h;
    const double uy = (xp.y + f.R_prime) / h;
    const int jx = static_cast<int>(std::floor(ux));
    const int jy = static_cast<int>(std::floor(uy));
    double wx[4], wy[4];
    weights(ux - jx, wx);
    weights(uy - jy, wy);
    cplx acc = 0.0;
    for (int b = 0; b < 4; ++b) {
        cplx row = 0.0;
        for (int a = 0; a < 4; ++a) row += wx[a] * fetch(jx - 1 + a, jy - 1 + b);
        acc += wy[b] * row;
    }
    return acc;
}

double PeriodicField::l2(double cell_area) const {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s * cell_area);
}

double PeriodicField::l2_disk(double radius, double cell_area) const {
    const double h = 2.0 * R_prime / M;
    double s = 0.0;
    for (int iy = 0; iy < M; ++iy) {
        const double y = -R_prime + h * iy;
        for (int ix = 0; ix < M; ++ix) {
            const double x = -R_prime + h * ix;
            if (x * x + y * y < radius * radius) s += std::norm(at(ix, iy));
        }
    }
    return std::sqrt(s * cell_area);
}

void PeriodicField::dump_binary(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("dump_binary: cannot open " + path);
    for (const auto& z : v) {
        const double re = z.real(), im = z.imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(double));
        out.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
}

void PeriodicField::dump_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_csv: cannot open " + path);
    char buf[80];
    out << "re,im\n";
    for (const auto& z : v) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", z.real(), z.imag());
        out << buf;
    }
}

PeriodicField PeriodicField::load_binary(const std::string& path, int M, double R_prime) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_binary: cannot open " + path);
    PeriodicField f(M, R_prime);
    for (auto& z : f.v) {
        double re, im;
        in.read(reinterpret_cast<char*>(&re), sizeof(double));
        in.read(reinterpret_cast<char*>(&im), sizeof(double));
        if (!in) throw std::runtime_error("load_binary: short read");
        z = {re, im};
    }
    return f;
}

SpectralGrid::SpectralGrid(const HalfShiftLattice& lattice)
    : lattice_(lattice), M_(lattice.size()) {
    buf_.resize(static_cast<std::size_t>(M_) * M_);
    auto* b = reinterpret_cast<fftw_complex*>(buf_.data());
    plan_fwd_ = fftw_plan_dft_2d(M_, M_, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_2d(M_, M_, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    pre1_.resize(M_);
    sgn_.resize(M_);
    for (int i = 0; i < M_; ++i) {
        const double x = coord(i);
        pre1_[i] = std::exp(cplx{0.0, -std::numbers::pi * x / (2.0 * R_prime())});
        sgn_[i] = (i % 2 == 0) ? 1.0 : -1.0;
    }
}

SpectralGrid::~SpectralGrid() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void SpectralGrid::to_coeffs(const PeriodicField& samples, std::vector<cplx>& coeffs) const {
    const std::size_t n = buf_.size();
    coeffs.resize(n);
    for (int iy = 0; iy < M_; ++iy)
        for (int ix = 0; ix < M_; ++ix)
            buf_[static_cast<std::size_t>(iy) * M_ + ix] = samples.at(ix, iy) * pre1_[ix];
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    const double scale = 1.0 / (static_cast<double>(M_) * M_);
    for (int ky = 0; ky < M_; ++ky)
        for (int kx = 0; kx < M_; ++kx) {
            const std::size_t i = static_cast<std::size_t>(ky) * M_ + kx;
            coeffs[i] = buf_[i] * (sgn_[kx] * sgn_[ky] * scale);
        }
}

void SpectralGrid::to_samples(const std::vector<cplx>& coeffs, PeriodicField& samples) const {
    if (coeffs.size() != buf_.size()) throw std::invalid_argument("to_samples: size mismatch");
    for (int ky = 0; ky < M_; ++ky)
        for (int kx = 0; kx < M_; ++kx) {
            const std::size_t i = static_cast<std::size_t>(ky) * M_ + kx;
            buf_[i] = coeffs[i] * (sgn_[kx] * sgn_[ky]);
        }
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    samples.M = M_;
    samples.R_prime = R_prime();
    samples.v.resize(buf_.size());
    for (int iy = 0; iy < M_; ++iy)
        for (int ix = 0; ix < M_; ++ix) {
            const std::size_t i = static_cast<std::size_t>(iy) * M_ + ix;
            samples.v[i] = buf_[i] * std::conj(pre1_[ix]);
        }
}

void SpectralGrid::apply_multiplier(const PeriodicField& in, const std::vector<cplx>& mult,
                                    PeriodicField& out) const {
    std::vector<cplx> coeffs;
    to_coeffs(in, coeffs);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= mult[i];
    to_samples(coeffs, out);
}

void SpectralGrid::derivative(const PeriodicField& in, int axis, PeriodicField& out) const {
    std::vector<cplx> coeffs;
    to_coeffs(in, coeffs);
    for (int ky = 0; ky < M_; ++ky)
        for (int kx = 0; kx < M_; ++kx) {
            const std::size_t i = static_cast<std::size_t>(ky) * M_ + kx;
            const double a = axis == 0 ? alpha1_of_bin(kx) : alpha2_of_bin(ky);
            coeffs[i] *= cplx{0.0, a};
        }
    to_samples(coeffs, out);
}

}  // namespace ewave
