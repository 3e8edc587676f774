#pragma once

// Multiplier operators, norms and functionals on spectral fields.
//
// Everything here is a pure function. The operators are diagonal in
// Fourier space:
//
//   free_flight(u, t)  : u_hat_k -> exp(-i t k^2) u_hat_k   (exp(i t dxx))
//   inv_dx             : u_hat_k -> u_hat_k / (i k), zero mode killed
//   inv_dx2            : inv_dx applied twice (multiplier -1/k^2)
//
// and the functionals follow the analytic normalization on (0, 2*pi):
//
//   mass M(u)     = (1/2pi) int |u|^2        = sum_k |u_hat_k|^2
//   momentum P(u) = (1/2pi) int u d_x conj(u) = -i sum_k k |u_hat_k|^2
//   ||u||_{H^g}^2 = 2pi sum_k (1+k^2)^g |u_hat_k|^2
//
// Pointwise products are collocation products: transform to the grid,
// multiply samples, transform back. By default no dealiasing is applied;
// passing dealias=true zero-pads both factors onto a 2n grid first, which
// is more than the 3/2 rule needs for a quadratic product but keeps the
// transform size a power of two.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fft.hpp"
#include "field.hpp"

namespace nlse {

inline SpectralField to_spectral(const PhysicalField& p) {
    return SpectralField(p.grid, fft_forward(p.values));
}

inline PhysicalField to_physical(const SpectralField& s) {
    return PhysicalField(s.grid, fft_inverse(s.coeffs));
}

// Exact linear propagator exp(i t dxx); unit modulus on every mode.
inline SpectralField free_flight(const SpectralField& s, double t) {
    SpectralField out = s;
    const auto& ks = s.grid->wavenumbers;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
        const double k = static_cast<double>(ks[i]);
        out.coeffs[i] *= std::polar(1.0, -t * k * k);
    }
    return out;
}

// Antiderivative with zero mean: multiplier 1/(ik), zero mode -> 0.
inline SpectralField inv_dx(const SpectralField& s) {
    SpectralField out = s;
    const auto& ks = s.grid->wavenumbers;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
        const int k = ks[i];
        if (k == 0)
            out.coeffs[i] = 0.0;
        else
            out.coeffs[i] /= cdouble(0.0, static_cast<double>(k));
    }
    return out;
}

// Second antiderivative, defined as the square of inv_dx.
inline SpectralField inv_dx2(const SpectralField& s) { return inv_dx(inv_dx(s)); }

inline cdouble zero_mode(const SpectralField& s) { return s.coeffs[s.grid->index_of(0)]; }

inline double sobolev_norm(const SpectralField& s, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("sobolev_norm: gamma must be >= 0");
    const auto& ks = s.grid->wavenumbers;
    double acc = 0.0;
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        const double k = static_cast<double>(ks[i]);
        const double w = (gamma == 0.0) ? 1.0 : std::pow(1.0 + k * k, gamma);
        acc += w * std::norm(s.coeffs[i]);
    }
    return std::sqrt(2.0 * std::numbers::pi * acc);
}

inline double mass(const SpectralField& s) {
    double acc = 0.0;
    for (const auto& c : s.coeffs) acc += std::norm(c);
    return acc;
}

inline cdouble momentum(const SpectralField& s) {
    const auto& ks = s.grid->wavenumbers;
    double acc = 0.0;
    for (std::size_t i = 0; i < s.coeffs.size(); ++i)
        acc += static_cast<double>(ks[i]) * std::norm(s.coeffs[i]);
    return cdouble(0.0, -acc);
}

// Complex conjugate of the field. In spectral form this is a permutation:
// conj(u)_hat_k = conj(u_hat_{-k}). The bin k = -n/2 maps to itself since
// exp(+i(n/2)x_j) and exp(-i(n/2)x_j) sample identically on the grid.
inline SpectralField conj_field(const SpectralField& s) {
    const int n = s.grid->n;
    SpectralField out = zero_field(s.grid);
    const auto& ks = s.grid->wavenumbers;
    for (int i = 0; i < n; ++i) {
        const int k = ks[i];
        const int kc = (k == -n / 2) ? k : -k;
        out.coeffs[s.grid->index_of(kc)] = std::conj(s.coeffs[i]);
    }
    return out;
}

namespace detail {

// Embed modes {-n/2..n/2-1} of s into the larger grid `big` (modes outside
// stay zero). The per-mode normalization makes this a literal copy.
inline std::vector<cdouble> pad_coeffs(const SpectralField& s, const Grid& big) {
    std::vector<cdouble> out(big.n, cdouble(0.0, 0.0));
    const auto& ks = s.grid->wavenumbers;
    for (std::size_t i = 0; i < s.coeffs.size(); ++i)
        out[big.index_of(ks[i])] = s.coeffs[i];
    return out;
}

// Keep only modes {-n/2..n/2-1} of the big-grid coefficient array.
inline SpectralField truncate_coeffs(const std::vector<cdouble>& big_coeffs,
                                     const Grid& big, const GridPtr& small) {
    SpectralField out = zero_field(small);
    const auto& ks = small->wavenumbers;
    for (int i = 0; i < small->n; ++i)
        out.coeffs[i] = big_coeffs[big.index_of(ks[i])];
    return out;
}

} // namespace detail

// Collocation product a*b (or conj(a)*b). With dealias=true the product is
// formed on a 2n grid and truncated back, i.e. the exact Galerkin product
// of the retained modes.
inline SpectralField pointwise_product(const SpectralField& a, const SpectralField& b,
                                       bool conjugate_a = false, bool dealias = false) {
    require_same_grid(a, b);
    if (!dealias) {
        auto pa = fft_inverse(a.coeffs);
        const auto pb = fft_inverse(b.coeffs);
        for (std::size_t j = 0; j < pa.size(); ++j) {
            const cdouble av = conjugate_a ? std::conj(pa[j]) : pa[j];
            pa[j] = av * pb[j];
        }
        return SpectralField(a.grid, fft_forward(pa));
    }
    auto big = make_grid(2 * a.grid->n);
    auto pa = fft_inverse(detail::pad_coeffs(a, *big));
    const auto pb = fft_inverse(detail::pad_coeffs(b, *big));
    for (std::size_t j = 0; j < pa.size(); ++j) {
        const cdouble av = conjugate_a ? std::conj(pa[j]) : pa[j];
        pa[j] = av * pb[j];
    }
    return detail::truncate_coeffs(fft_forward(pa), *big, a.grid);
}

} // namespace nlse
