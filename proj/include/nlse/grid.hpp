#pragma once

// Uniform collocation grid on the torus (0, 2*pi).
//
// Nodes are x_j = 2*pi*j/n. Wavenumbers cover the symmetric range
// {-n/2, ..., n/2-1} and are stored in the transform's native bin order:
// bin i holds k = i for i < n/2 and k = i - n for i >= n/2. All multiplier
// code addresses modes through this table rather than by array position.

#include <complex>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nlse {

using cdouble = std::complex<double>;

struct Grid {
    int n = 0;
    std::vector<double> nodes;   // x_j, strictly increasing in [0, 2*pi)
    std::vector<int> wavenumbers; // k per transform bin, native order

    explicit Grid(int size) : n(size) {
        if (n < 4 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid: n must be a power of two >= 4");
        nodes.resize(n);
        wavenumbers.resize(n);
        for (int j = 0; j < n; ++j)
            nodes[j] = 2.0 * std::numbers::pi * j / n;
        for (int i = 0; i < n; ++i)
            wavenumbers[i] = (i < n / 2) ? i : i - n;
    }

    // Native bin index of integer mode k in [-n/2, n/2-1].
    int index_of(int k) const { return k >= 0 ? k : k + n; }
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(int n) { return std::make_shared<const Grid>(n); }

} // namespace nlse
