#pragma once

// Random initial data of prescribed Sobolev regularity.
//
// Draw a complex uniform sample at every collocation point, smooth it by
// the fractional multiplier |k|^{-gamma} (zero mode removed), and rescale
// to unit sup norm:
//
//   u0 = S_gamma U / || S_gamma U ||_Linf,   U_j = rand + i rand,
//
// with (S_gamma)_k = |k|^{-gamma} for k != 0 and 0 at k = 0. The result
// has coefficients decaying like |k|^{-gamma}, i.e. it lies in H^s for
// s < gamma - 1/2 and "barely" in H^gamma in the averaged sense, which is
// the standard construction for convergence studies under low regularity.

#include <cmath>
#include <stdexcept>

#include "rng.hpp"
#include "spectral_ops.hpp"

namespace nlse {

struct RoughDataSpec {
    int n = 256;
    double gamma = 2.0;
    std::uint64_t seed = 0;
};

inline SpectralField gen_rough_data(const RoughDataSpec& spec) {
    if (spec.gamma < 0.0) throw std::invalid_argument("gen_rough_data: gamma must be >= 0");
    auto grid = make_grid(spec.n);

    // First n draws fill the real parts, the next n the imaginary parts,
    // mirroring rand(N,1) + i*rand(N,1).
    SplitMix64 rng(spec.seed);
    std::vector<cdouble> samples(spec.n);
    for (int j = 0; j < spec.n; ++j) samples[j].real(rng.uniform01());
    for (int j = 0; j < spec.n; ++j) samples[j].imag(rng.uniform01());

    SpectralField u = to_spectral(PhysicalField(grid, std::move(samples)));
    const auto& ks = grid->wavenumbers;
    for (int i = 0; i < spec.n; ++i) {
        const int k = ks[i];
        if (k == 0)
            u.coeffs[i] = 0.0;
        else
            u.coeffs[i] *= std::pow(std::abs(static_cast<double>(k)), -spec.gamma);
    }

    // Normalize in spectral form so the zero mode stays exactly zero.
    const auto phys = to_physical(u);
    double maxmod = 0.0;
    for (const auto& v : phys.values) maxmod = std::max(maxmod, std::abs(v));
    if (maxmod == 0.0) throw std::runtime_error("gen_rough_data: degenerate draw, all samples zero");
    for (auto& c : u.coeffs) c /= maxmod;
    return u;
}

} // namespace nlse
