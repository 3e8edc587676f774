#pragma once

// Iterative radix-2 complex FFT with a process-wide plan cache.
//
// The solver only ever needs power-of-two sizes, so a plain Cooley-Tukey
// decimation-in-time transform is enough. We roll our own instead of
// linking FFTW for two reasons: the whole library stays header-only, and
// the operation order is fixed, so repeated transforms of the same data
// are bitwise identical (a property the test suite relies on).
//
// Conventions (matching the analytic normalization used throughout):
//   forward:  c[k] = (1/n) sum_j x[j] exp(-2*pi*i*j*k/n)
//   inverse:  x[j] =       sum_k c[k] exp(+2*pi*i*j*k/n)
// so inverse(forward(x)) == x up to roundoff and the k-th forward bin is
// the amplitude of the plane wave exp(i*k*x) on the 2*pi-periodic grid.

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "grid.hpp" // cdouble

namespace nlse {

namespace detail {

// Precomputed tables for one transform size: bit-reversal permutation and
// the twiddle factors w^r = exp(-2*pi*i*r/n) for r = 0 .. n/2-1.
struct FftPlan {
    std::size_t n = 0;
    std::vector<std::size_t> bitrev;
    std::vector<cdouble> twiddle;

    explicit FftPlan(std::size_t size) : n(size) {
        bitrev.resize(n);
        std::size_t log2n = 0;
        while ((std::size_t(1) << log2n) < n) ++log2n;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < log2n; ++b)
                if (i & (std::size_t(1) << b)) r |= std::size_t(1) << (log2n - 1 - b);
            bitrev[i] = r;
        }
        twiddle.resize(n / 2);
        const double base = -2.0 * std::numbers::pi / static_cast<double>(n);
        for (std::size_t r = 0; r < n / 2; ++r)
            twiddle[r] = std::polar(1.0, base * static_cast<double>(r));
    }
};

inline bool is_pow2(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

// Plans are immutable once built; the cache hands out shared pointers under
// a mutex so concurrent callers on different threads see identical tables.
inline std::shared_ptr<const FftPlan> get_plan(std::size_t n) {
    static std::mutex mtx;
    static std::map<std::size_t, std::shared_ptr<const FftPlan>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::make_shared<const FftPlan>(n)).first;
    return it->second;
}

// In-place Cooley-Tukey butterflies on bit-reversed input. `sign` selects
// the transform direction: -1 uses the stored twiddles (forward), +1 their
// conjugates (inverse).
inline void butterflies(std::vector<cdouble>& a, const FftPlan& plan, int sign) {
    const std::size_t n = plan.n;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t tstep = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t j = 0; j < half; ++j) {
                cdouble w = plan.twiddle[j * tstep];
                if (sign > 0) w = std::conj(w);
                const cdouble odd = a[start + j + half] * w;
                const cdouble even = a[start + j];
                a[start + j] = even + odd;
                a[start + j + half] = even - odd;
            }
        }
    }
}

} // namespace detail

// Forward transform: physical samples to Fourier amplitudes, 1/n scaling.
inline std::vector<cdouble> fft_forward(const std::vector<cdouble>& x) {
    const std::size_t n = x.size();
    if (!detail::is_pow2(n))
        throw std::invalid_argument("fft_forward: size must be a power of two");
    auto plan = detail::get_plan(n);
    std::vector<cdouble> a(n);
    for (std::size_t i = 0; i < n; ++i) a[plan->bitrev[i]] = x[i];
    detail::butterflies(a, *plan, -1);
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : a) v *= scale;
    return a;
}

// Inverse transform: Fourier amplitudes to physical samples, no scaling.
inline std::vector<cdouble> fft_inverse(const std::vector<cdouble>& c) {
    const std::size_t n = c.size();
    if (!detail::is_pow2(n))
        throw std::invalid_argument("fft_inverse: size must be a power of two");
    auto plan = detail::get_plan(n);
    std::vector<cdouble> a(n);
    for (std::size_t i = 0; i < n; ++i) a[plan->bitrev[i]] = c[i];
    detail::butterflies(a, *plan, +1);
    return a;
}

} // namespace nlse
