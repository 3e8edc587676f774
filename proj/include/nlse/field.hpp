#pragma once

// Field containers. A SpectralField carries the Fourier amplitudes u_hat_k
// (normalization u_hat_k = (1/n) sum_j exp(-i k x_j) u(x_j), native bin
// order); a PhysicalField carries the complex samples u(x_j). Both are
// plain values: every operation on them returns a new field.

#include <complex>
#include <stdexcept>
#include <vector>

#include "grid.hpp"

namespace nlse {

struct SpectralField {
    GridPtr grid;
    std::vector<cdouble> coeffs; // u_hat per transform bin

    SpectralField() = default;
    SpectralField(GridPtr g, std::vector<cdouble> c) : grid(std::move(g)), coeffs(std::move(c)) {
        if (!grid || static_cast<int>(coeffs.size()) != grid->n)
            throw std::invalid_argument("SpectralField: coeffs size must equal grid.n");
    }

    // Amplitude of integer mode k.
    cdouble at_mode(int k) const { return coeffs[grid->index_of(k)]; }
};

struct PhysicalField {
    GridPtr grid;
    std::vector<cdouble> values; // u(x_j)

    PhysicalField() = default;
    PhysicalField(GridPtr g, std::vector<cdouble> v) : grid(std::move(g)), values(std::move(v)) {
        if (!grid || static_cast<int>(values.size()) != grid->n)
            throw std::invalid_argument("PhysicalField: values size must equal grid.n");
    }
};

inline SpectralField zero_field(const GridPtr& g) {
    return SpectralField(g, std::vector<cdouble>(g->n, cdouble(0.0, 0.0)));
}

inline void require_same_grid(const SpectralField& a, const SpectralField& b) {
    if (a.grid->n != b.grid->n)
        throw std::invalid_argument("fields live on incompatible grids");
}

inline SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a, b);
    SpectralField out = a;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
    return out;
}

inline SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a, b);
    SpectralField out = a;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
    return out;
}

inline SpectralField operator*(const cdouble& s, const SpectralField& a) {
    SpectralField out = a;
    for (auto& c : out.coeffs) c *= s;
    return out;
}

} // namespace nlse
